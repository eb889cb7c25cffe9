#include "phrasekit/ingest.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace phrasekit::ingest {

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound(path);
    return in;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find('\t', start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

// Interns class names in first-seen order.
class ClassIndex {
public:
    ClassId intern(const std::string& name) {
        auto [it, inserted] = index_.try_emplace(name, names_.size());
        if (inserted) names_.push_back(name);
        return it->second;
    }
    std::optional<ClassId> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::vector<std::string> names() const { return names_; }

private:
    std::unordered_map<std::string, ClassId> index_;
    std::vector<std::string> names_;
};

class BioParser {
public:
    explicit BioParser(const BioOptions& options) : opt_(options) {}

    BioParseResult run(std::istream& in) {
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            strip_cr(line);
            handle(line, lineno);
        }
        end_sentence();
        return std::move(result_);
    }

private:
    void handle(const std::string& line, std::size_t lineno) {
        const auto fields = split_whitespace(line);
        if (fields.empty()) {
            end_sentence();
            return;
        }
        if (fields.front().rfind("-DOCSTART-", 0) == 0) {
            end_sentence();
            return;
        }
        if (fields.size() < 2) {
            malformed(lineno, "expected token and tag columns");
            return;
        }
        if (expected_fields_ == 0) expected_fields_ = fields.size();
        if (fields.size() != expected_fields_) {
            malformed(lineno, "expected " + std::to_string(expected_fields_) + " fields, got " +
                                  std::to_string(fields.size()));
            return;
        }
        const int n = static_cast<int>(fields.size());
        const int col = opt_.tag_column < 0 ? n + opt_.tag_column : opt_.tag_column;
        if (col < 0 || col >= n || col == 0) {
            malformed(lineno, "tag column out of range");
            return;
        }
        in_sentence_ = true;
        const std::string& token = fields.front();
        const std::string& tag = fields[static_cast<std::size_t>(col)];

        if (tag == "O") {
            close_span();
            return;
        }
        if (tag.size() < 3 || tag[1] != '-' || (tag[0] != 'B' && tag[0] != 'I')) {
            malformed(lineno, "bad BIO tag '" + tag + "'");
            return;
        }
        const std::string cls = tag.substr(2);
        if (tag[0] == 'I' && open_ && open_->cls == cls) {
            open_->surface += ' ';
            open_->surface += token;
            return;
        }
        if (tag[0] == 'I' && opt_.strict)
            throw MalformedLine(lineno, "I-" + cls + " without a preceding B-" + cls);
        close_span();
        open_ = Span{token, cls};
    }

    void malformed(std::size_t lineno, const std::string& what) {
        if (opt_.strict) throw MalformedLine(lineno, what);
        result_.diagnostics.push_back("line " + std::to_string(lineno) + ": " + what);
        close_span();
    }

    void close_span() {
        if (!open_) return;
        if (!opt_.excluded_classes.count(open_->cls)) result_.spans.push_back(std::move(*open_));
        open_.reset();
    }

    void end_sentence() {
        close_span();
        if (in_sentence_) ++result_.sentences;
        in_sentence_ = false;
    }

    const BioOptions& opt_;
    BioParseResult result_;
    std::optional<Span> open_;
    std::size_t expected_fields_ = 0;
    bool in_sentence_ = false;
};

}  // namespace

BioParseResult parse_bio_corpus(std::istream& in, const BioOptions& options) {
    return BioParser(options).run(in);
}

BioParseResult parse_bio_file(const std::string& path, const BioOptions& options) {
    auto in = open_input(path);
    return parse_bio_corpus(in, options);
}

std::vector<ClassId> LabeledCorpus::labels() const {
    std::vector<ClassId> out;
    out.reserve(phrases.size());
    for (const auto& p : phrases) {
        if (!p.label()) throw InvariantViolation("corpus phrase without label: " + p.surface());
        out.push_back(*p.label());
    }
    return out;
}

void LabeledCorpus::validate() const {
    std::unordered_map<std::string, int> seen;
    for (const auto& p : phrases) {
        if (!p.label() || *p.label() >= classes.size())
            throw InvariantViolation("label out of range for " + p.surface());
        if (!mention_level && seen[p.surface()]++)
            throw InvariantViolation("duplicate surface " + p.surface());
    }
}

DedupResult dedup_entities(const std::vector<Span>& spans, const std::string& dataset_id) {
    // surface -> class -> mention count
    std::vector<std::string> order;
    std::unordered_map<std::string, std::map<std::string, std::size_t>> counts;
    for (const auto& s : spans) {
        auto [it, inserted] = counts.try_emplace(s.surface);
        if (inserted) order.push_back(s.surface);
        ++it->second[s.cls];
    }

    DedupResult result;
    result.corpus.dataset_id = dataset_id;
    std::vector<std::pair<std::string, std::string>> kept;
    for (const auto& surface : order) {
        const auto& by_class = counts.at(surface);
        std::size_t best = 0;
        std::size_t ties = 0;
        const std::string* best_cls = nullptr;
        for (const auto& [cls, n] : by_class) {
            if (n > best) {
                best = n;
                best_cls = &cls;
                ties = 1;
            } else if (n == best) {
                ++ties;
            }
        }
        if (ties > 1) {
            result.dropped.push_back(surface);
            continue;
        }
        kept.emplace_back(surface, *best_cls);
    }

    ClassIndex classes;
    for (auto& [surface, cls] : kept) {
        result.corpus.phrases.emplace_back(surface, classes.intern(cls), dataset_id);
    }
    result.corpus.classes = classes.names();
    return result;
}

LabeledCorpus mention_corpus(const std::vector<Span>& spans, const std::string& dataset_id) {
    LabeledCorpus corpus;
    corpus.dataset_id = dataset_id;
    corpus.mention_level = true;
    ClassIndex classes;
    for (const auto& s : spans) corpus.phrases.emplace_back(s.surface, classes.intern(s.cls), dataset_id);
    corpus.classes = classes.names();
    return corpus;
}

void write_entity_list(std::ostream& out, const LabeledCorpus& corpus) {
    for (const auto& p : corpus.phrases) {
        if (p.surface().find('\t') != std::string::npos)
            throw InvalidArgument("surface contains a tab: " + p.surface());
        out << p.surface() << '\t' << corpus.classes.at(p.label().value()) << '\n';
    }
}

void write_entity_list_file(const std::string& path, const LabeledCorpus& corpus) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileNotFound(path);
    write_entity_list(out, corpus);
}

LabeledCorpus read_entity_list(std::istream& in, const std::string& dataset_id) {
    LabeledCorpus corpus;
    corpus.dataset_id = dataset_id;
    ClassIndex classes;
    std::unordered_map<std::string, int> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 2 || fields[1].empty())
            throw MalformedLine(lineno, "expected surface<TAB>class");
        if (seen[fields[0]]++) corpus.mention_level = true;
        try {
            corpus.phrases.emplace_back(fields[0], classes.intern(fields[1]), dataset_id);
        } catch (const InvalidArgument& e) {
            throw MalformedLine(lineno, e.what());
        }
    }
    corpus.classes = classes.names();
    return corpus;
}

LabeledCorpus read_entity_list_file(const std::string& path, const std::string& dataset_id) {
    auto in = open_input(path);
    return read_entity_list(in, dataset_id);
}

std::vector<std::string> ExpansionBenchmark::members(ClassId cls) const {
    std::vector<std::string> out;
    for (const auto& p : vocabulary) {
        if (p.label() == cls) out.push_back(p.surface());
    }
    return out;
}

ExpansionBenchmark load_expansion_benchmark(std::istream& vocab, std::istream& seeds) {
    ExpansionBenchmark bench;
    ClassIndex classes;
    std::unordered_map<std::string, std::size_t> by_surface;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(vocab, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() > 2) throw MalformedLine(lineno, "expected surface[<TAB>class]");
        std::optional<ClassId> label;
        if (fields.size() == 2 && !fields[1].empty()) label = classes.intern(fields[1]);
        if (by_surface.count(fields[0])) throw MalformedLine(lineno, "duplicate vocabulary entry " + fields[0]);
        by_surface.emplace(fields[0], bench.vocabulary.size());
        try {
            bench.vocabulary.emplace_back(fields[0], label);
        } catch (const InvalidArgument& e) {
            throw MalformedLine(lineno, e.what());
        }
    }

    std::vector<std::string> missing;
    lineno = 0;
    while (std::getline(seeds, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 4) throw MalformedLine(lineno, "expected class<TAB>seed1<TAB>seed2<TAB>seed3");
        SeedQuery q{classes.intern(fields[0]), {}};
        for (std::size_t i = 1; i < 4; ++i) {
            auto it = by_surface.find(fields[i]);
            if (it == by_surface.end()) {
                missing.push_back(fields[i]);
                continue;
            }
            const Phrase& p = bench.vocabulary[it->second];
            if (p.label() && *p.label() != q.class_id)
                throw MalformedLine(lineno, "seed '" + fields[i] + "' belongs to another class");
            q.seeds.emplace_back(p.surface(), q.class_id);
        }
        if (fields[1] == fields[2] || fields[1] == fields[3] || fields[2] == fields[3])
            throw MalformedLine(lineno, "seeds must be distinct");
        bench.queries.push_back(std::move(q));
    }
    if (!missing.empty()) throw UnresolvedSeed(std::move(missing));
    bench.classes = classes.names();
    return bench;
}

ExpansionBenchmark load_expansion_benchmark_files(const std::string& vocab_path,
                                                  const std::string& seed_path) {
    auto v = open_input(vocab_path);
    auto s = open_input(seed_path);
    return load_expansion_benchmark(v, s);
}

}  // namespace phrasekit::ingest
