#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "phrasekit/core.hpp"

namespace phrasekit::ingest {

struct Span {
    std::string surface;
    std::string cls;
    bool operator==(const Span&) const = default;
};

struct BioOptions {
    // Column holding the BIO tag; negative values count from the end.
    int tag_column = -1;
    std::set<std::string> excluded_classes;
    bool strict = false;
};

struct BioParseResult {
    std::vector<Span> spans;
    // Lenient-mode diagnostics (line number + message).
    std::vector<std::string> diagnostics;
    std::size_t sentences = 0;
};

// Reads a CoNLL-style token-per-line file. Throws MalformedLine in strict
// mode; in lenient mode bad lines are skipped and reported.
BioParseResult parse_bio_corpus(std::istream& in, const BioOptions& options = {});
BioParseResult parse_bio_file(const std::string& path, const BioOptions& options = {});

struct LabeledCorpus {
    std::string dataset_id;
    std::vector<std::string> classes;
    std::vector<Phrase> phrases;
    // Mention-level corpora keep repeated surfaces.
    bool mention_level = false;

    std::vector<ClassId> labels() const;
    void validate() const;
    bool operator==(const LabeledCorpus&) const = default;
};

struct DedupResult {
    LabeledCorpus corpus;
    // Surfaces whose mentions tied between classes.
    std::vector<std::string> dropped;
};

// Merges exact-surface duplicates by majority label; ties drop the surface.
DedupResult dedup_entities(const std::vector<Span>& spans, const std::string& dataset_id = {});

// Keeps every mention as its own phrase.
LabeledCorpus mention_corpus(const std::vector<Span>& spans, const std::string& dataset_id = {});

// Canonical entity list: `surface<TAB>class_name` per line.
void write_entity_list(std::ostream& out, const LabeledCorpus& corpus);
void write_entity_list_file(const std::string& path, const LabeledCorpus& corpus);
LabeledCorpus read_entity_list(std::istream& in, const std::string& dataset_id = {});
LabeledCorpus read_entity_list_file(const std::string& path, const std::string& dataset_id = {});

struct SeedQuery {
    ClassId class_id;
    std::vector<Phrase> seeds;
};

struct ExpansionBenchmark {
    std::vector<std::string> classes;
    // Labels are gold classes; vocabulary entries may be unlabeled.
    std::vector<Phrase> vocabulary;
    std::vector<SeedQuery> queries;

    // Gold members of a class, in vocabulary order.
    std::vector<std::string> members(ClassId cls) const;
};

// vocab: lines `surface` or `surface<TAB>class_name`.
// seeds: lines `class_name<TAB>seed1<TAB>seed2<TAB>seed3`.
ExpansionBenchmark load_expansion_benchmark(std::istream& vocab, std::istream& seeds);
ExpansionBenchmark load_expansion_benchmark_files(const std::string& vocab_path,
                                                  const std::string& seed_path);

}  // namespace phrasekit::ingest
