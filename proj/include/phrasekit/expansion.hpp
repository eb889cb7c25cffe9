#pragma once

#include <set>
#include <string>
#include <vector>

#include "phrasekit/core.hpp"
#include "phrasekit/ingest.hpp"

namespace phrasekit::expansion {

struct VocabEntry {
    Phrase phrase;
    EmbeddingVector vector;
};

struct RankedEntry {
    std::string surface;
    double score;
};

struct RankedList {
    ingest::SeedQuery query;
    // Descending cosine; equal scores ordered by surface.
    std::vector<RankedEntry> entries;
};

// Ranks non-seed vocabulary by cosine to the mean of the seed vectors.
RankedList expand(const ingest::SeedQuery& query, const std::vector<VocabEntry>& vocabulary, std::size_t top_n);

// sum_{k<=K} P@k * rel(k) / min(K, |relevant|); 0 when relevant is empty.
double ap_at_k(const RankedList& ranked, const std::set<std::string>& relevant, std::size_t k);

struct ScoredQuery {
    RankedList ranked;
    std::set<std::string> relevant;
};

double map_at_k(const std::vector<ScoredQuery>& queries, std::size_t k);

// Gold members of the query's class minus its seeds.
std::set<std::string> relevant_set(const ingest::ExpansionBenchmark& bench, const ingest::SeedQuery& query);

}  // namespace phrasekit::expansion
