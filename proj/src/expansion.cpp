#include "phrasekit/expansion.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace phrasekit::expansion {

RankedList expand(const ingest::SeedQuery& query, const std::vector<VocabEntry>& vocabulary, std::size_t top_n) {
    if (top_n == 0) throw InvalidArgument("top_n must be positive");
    if (query.seeds.empty()) throw InvalidArgument("query without seeds");

    std::unordered_map<std::string_view, const VocabEntry*> by_surface;
    for (const auto& e : vocabulary) by_surface.emplace(e.phrase.surface(), &e);

    std::unordered_set<std::string_view> seeds;
    std::vector<double> centroid;
    for (const auto& s : query.seeds) {
        auto it = by_surface.find(s.surface());
        if (it == by_surface.end()) throw MissingSeedEmbedding(s.surface());
        seeds.insert(s.surface());
        const auto v = it->second->vector.values();
        if (centroid.empty()) centroid.assign(v.size(), 0.0);
        if (v.size() != centroid.size()) throw DimensionMismatch(centroid.size(), v.size());
        for (std::size_t d = 0; d < v.size(); ++d) centroid[d] += v[d];
    }
    const std::size_t candidates = vocabulary.size() - std::min(vocabulary.size(), seeds.size());
    if (top_n > candidates)
        throw InvalidArgument("top_n=" + std::to_string(top_n) + " exceeds " + std::to_string(candidates) +
                              " candidates");
    std::vector<float> centroid_f(centroid.size());
    for (std::size_t d = 0; d < centroid.size(); ++d)
        centroid_f[d] = static_cast<float>(centroid[d] / double(query.seeds.size()));
    const EmbeddingVector center(std::move(centroid_f));

    RankedList out{query, {}};
    out.entries.reserve(candidates);
    for (const auto& e : vocabulary) {
        if (seeds.count(e.phrase.surface())) continue;
        out.entries.push_back({e.phrase.surface(), cosine_similarity(center, e.vector)});
    }
    const auto better = [](const RankedEntry& a, const RankedEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.surface < b.surface;
    };
    std::partial_sort(out.entries.begin(), out.entries.begin() + static_cast<std::ptrdiff_t>(top_n),
                      out.entries.end(), better);
    out.entries.resize(top_n);
    return out;
}

double ap_at_k(const RankedList& ranked, const std::set<std::string>& relevant, std::size_t k) {
    if (k == 0) throw InvalidArgument("K must be >= 1");
    if (relevant.empty()) return 0.0;
    const std::size_t depth = std::min(k, ranked.entries.size());
    std::size_t hits = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < depth; ++i) {
        if (!relevant.count(ranked.entries[i].surface)) continue;
        ++hits;
        sum += double(hits) / double(i + 1);
    }
    return sum / double(std::min(k, relevant.size()));
}

double map_at_k(const std::vector<ScoredQuery>& queries, std::size_t k) {
    if (queries.empty()) throw EmptyQuerySet();
    double sum = 0.0;
    for (const auto& q : queries) sum += ap_at_k(q.ranked, q.relevant, k);
    return sum / double(queries.size());
}

std::set<std::string> relevant_set(const ingest::ExpansionBenchmark& bench, const ingest::SeedQuery& query) {
    std::set<std::string> out;
    for (auto& m : bench.members(query.class_id)) out.insert(std::move(m));
    for (const auto& s : query.seeds) out.erase(s.surface());
    return out;
}

}  // namespace phrasekit::expansion
