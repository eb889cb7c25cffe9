#include <gtest/gtest.h>

#include <random>

#include "phrasekit/backend.hpp"
#include "phrasekit/expansion.hpp"
#include "oracles.hpp"

using namespace phrasekit;
using namespace phrasekit::expansion;

namespace {

RankedList ranking(const std::vector<std::string>& surfaces) {
    RankedList r{{0, {}}, {}};
    double s = 1.0;
    for (const auto& x : surfaces) r.entries.push_back({x, s -= 0.01});
    return r;
}

ingest::SeedQuery query(std::initializer_list<const char*> seeds) {
    ingest::SeedQuery q{0, {}};
    for (const char* s : seeds) q.seeds.emplace_back(s);
    return q;
}

}  // namespace

TEST(Expand, CosineOrdering) {
    std::vector<VocabEntry> vocab = {
        {Phrase("s1"), EmbeddingVector({1, 0})},
        {Phrase("s2"), EmbeddingVector({1, 0})},
        {Phrase("s3"), EmbeddingVector({1, 0})},
        {Phrase("b"), EmbeddingVector({0, 1})},
        {Phrase("a"), EmbeddingVector({0.8f, 0.6f})},
    };
    const auto r = expand(query({"s1", "s2", "s3"}), vocab, 2);
    ASSERT_EQ(r.entries.size(), 2u);
    EXPECT_EQ(r.entries[0].surface, "a");
    EXPECT_NEAR(r.entries[0].score, 0.8, 1e-6);
    EXPECT_EQ(r.entries[1].surface, "b");
    EXPECT_NEAR(r.entries[1].score, 0.0, 1e-6);
}

TEST(Expand, ExcludesSeedsAndBreaksTies) {
    std::vector<VocabEntry> vocab = {
        {Phrase("seed"), EmbeddingVector({1, 0})},
        {Phrase("zeta"), EmbeddingVector({1, 1})},
        {Phrase("alpha"), EmbeddingVector({1, 1})},
    };
    const auto r = expand(query({"seed"}), vocab, 2);
    EXPECT_EQ(r.entries[0].surface, "alpha");
    EXPECT_EQ(r.entries[1].surface, "zeta");
    for (const auto& e : r.entries) EXPECT_NE(e.surface, "seed");
    EXPECT_THROW(expand(query({"seed"}), vocab, 3), InvalidArgument);
    EXPECT_THROW(expand(query({"missing"}), vocab, 1), MissingSeedEmbedding);
}

TEST(Ap, Examples) {
    EXPECT_NEAR(ap_at_k(ranking({"a", "b", "c"}), {"a", "c"}, 3), (1.0 + 2.0 / 3.0) / 2.0, 1e-12);
    EXPECT_NEAR(ap_at_k(ranking({"a", "b", "c"}), {"a", "c"}, 3), 0.8333, 1e-4);
    EXPECT_EQ(ap_at_k(ranking({"a", "b"}), {"a", "b", "c"}, 2), 1.0);
    EXPECT_EQ(ap_at_k(ranking({"x", "y"}), {"a"}, 2), 0.0);
    EXPECT_EQ(ap_at_k(ranking({"a"}), {}, 2), 0.0);
}

TEST(Ap, MatchesEnumeration) {
    std::mt19937 rng(31);
    for (int t = 0; t < 400; ++t) {
        const std::size_t n = 1 + rng() % 60;
        std::vector<std::string> items;
        for (std::size_t i = 0; i < n; ++i) items.push_back("e" + std::to_string(i));
        std::shuffle(items.begin(), items.end(), rng);
        std::set<std::string> relevant;
        for (std::size_t i = 0; i < n + 10; ++i) {
            if (rng() % 3 == 0) relevant.insert("e" + std::to_string(i));
        }
        const std::size_t k = 1 + rng() % 60;
        EXPECT_NEAR(ap_at_k(ranking(items), relevant, k), oracle::enumerate_ap(items, relevant, k), 1e-12);
    }
}

TEST(Ap, Bounded) {
    std::mt19937 rng(1);
    for (int t = 0; t < 200; ++t) {
        std::vector<std::string> items;
        for (int i = 0; i < 20; ++i) items.push_back("e" + std::to_string(rng() % 40));
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        std::shuffle(items.begin(), items.end(), rng);
        std::set<std::string> relevant;
        for (int i = 0; i < 40; ++i) {
            if (rng() % 2) relevant.insert("e" + std::to_string(i));
        }
        const double ap = ap_at_k(ranking(items), relevant, 10);
        EXPECT_GE(ap, 0.0);
        EXPECT_LE(ap, 1.0);
    }
}

TEST(Ap, SwapTowardTopNeverHurts) {
    std::mt19937 rng(12);
    for (int t = 0; t < 200; ++t) {
        std::vector<std::string> items;
        for (int i = 0; i < 15; ++i) items.push_back("e" + std::to_string(i));
        std::shuffle(items.begin(), items.end(), rng);
        std::set<std::string> relevant;
        for (int i = 0; i < 15; ++i) {
            if (rng() % 2) relevant.insert("e" + std::to_string(i));
        }
        for (std::size_t i = 1; i < items.size(); ++i) {
            if (relevant.count(items[i]) && !relevant.count(items[i - 1])) {
                auto better = items;
                std::swap(better[i], better[i - 1]);
                EXPECT_GE(ap_at_k(ranking(better), relevant, 10), ap_at_k(ranking(items), relevant, 10) - 1e-15);
            }
        }
    }
}

TEST(Map, Examples) {
    const ScoredQuery perfect{ranking({"a"}), {"a"}};
    const ScoredQuery miss{ranking({"x"}), {"a"}};
    EXPECT_EQ(map_at_k({perfect}, 10), ap_at_k(perfect.ranked, perfect.relevant, 10));
    EXPECT_EQ(map_at_k({perfect, miss}, 10), 0.5);
    EXPECT_THROW(map_at_k({}, 10), EmptyQuerySet);
}

TEST(Expand, BlobTopTenFromSeedClass) {
    const std::size_t classes = 4, dim = 16;
    const auto centroids = backend::orthogonal_centroids(classes, dim);
    std::unordered_map<std::string, ClassId> assign;
    std::vector<std::string> texts;
    for (std::size_t i = 0; i < 120; ++i) {
        texts.push_back("w" + std::to_string(i));
        assign[texts.back()] = i % classes;
    }
    const backend::SyntheticBlobProvider p(assign, centroids, 0.01, 5);
    const auto vectors = p.embed_batch(texts, true);
    std::vector<VocabEntry> vocab;
    std::vector<std::vector<float>> points;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        vocab.push_back({Phrase(texts[i]), vectors[i]});
        points.emplace_back(vectors[i].values().begin(), vectors[i].values().end());
    }
    const auto labels = oracle::nearest_centroid(points, centroids);
    const auto r = expand(query({"w0", "w4", "w8"}), vocab, 10);
    for (const auto& e : r.entries) {
        const auto idx = std::stoul(e.surface.substr(1));
        EXPECT_EQ(labels[idx], 0u) << e.surface;
    }
}
