#include <gtest/gtest.h>

#include <random>

#include "phrasekit/backend.hpp"
#include "phrasekit/cluster_eval.hpp"
#include "oracles.hpp"

using namespace phrasekit;
using namespace phrasekit::cluster;

namespace {

std::vector<EmbeddingVector> vecs(const std::vector<std::vector<float>>& pts) {
    std::vector<EmbeddingVector> out;
    for (const auto& p : pts) out.emplace_back(p);
    return out;
}

void expect_monotone(const ClusteringResult& r) {
    for (std::size_t i = 1; i < r.inertia_history.size(); ++i)
        EXPECT_LE(r.inertia_history[i], r.inertia_history[i - 1] * (1 + 1e-12) + 1e-12);
}

}  // namespace

TEST(KMeans, FourPoints) {
    const auto v = vecs({{0, 0}, {0, 1}, {10, 0}, {10, 1}});
    const auto r = kmeans(v, 2);
    EXPECT_NEAR(r.inertia, 1.0, 1e-9);
    EXPECT_NEAR(r.inertia, oracle::best_two_partition({{0, 0}, {0, 1}, {10, 0}, {10, 1}}), 1e-9);
    EXPECT_EQ(r.assignments[0], r.assignments[1]);
    EXPECT_EQ(r.assignments[2], r.assignments[3]);
    EXPECT_NE(r.assignments[0], r.assignments[2]);
    const auto& left = r.centroids[r.assignments[0]];
    EXPECT_NEAR(left[0], 0.0, 1e-12);
    EXPECT_NEAR(left[1], 0.5, 1e-12);
    EXPECT_NEAR(r.inertia, kmeans_objective(v, r.assignments, r.centroids), 1e-9);
}

TEST(KMeans, KEqualsN) {
    const auto v = vecs({{0, 0}, {1, 2}, {5, 5}, {-3, 1}});
    const auto r = kmeans(v, 4);
    EXPECT_EQ(r.inertia, 0.0);
    std::set<std::size_t> distinct(r.assignments.begin(), r.assignments.end());
    EXPECT_EQ(distinct.size(), 4u);
}

TEST(KMeans, KEqualsOne) {
    const auto v = vecs({{0, 0}, {1, 2}, {5, 4}});
    const auto r = kmeans(v, 1);
    EXPECT_EQ(r.assignments, (std::vector<std::size_t>{0, 0, 0}));
    EXPECT_NEAR(r.centroids[0][0], 2.0, 1e-12);
    EXPECT_NEAR(r.centroids[0][1], 2.0, 1e-12);
}

TEST(KMeans, Errors) {
    const auto v = vecs({{0, 0}, {1, 1}});
    EXPECT_THROW(kmeans(v, 3), KTooLarge);
    EXPECT_THROW(kmeans(v, 0), InvalidArgument);
}

TEST(KMeans, DegenerateWarns) {
    const auto v = vecs({{1, 1}, {1, 1}, {1, 1}, {1, 1}});
    const auto r = kmeans(v, 2);
    EXPECT_FALSE(r.warnings.empty());
    EXPECT_EQ(r.inertia, 0.0);
    EXPECT_EQ(r.assignments.size(), 4u);
}

TEST(KMeans, SeedDeterminism) {
    std::mt19937 rng(4);
    std::normal_distribution<float> g;
    std::vector<std::vector<float>> pts(60, std::vector<float>(5));
    for (auto& p : pts) {
        for (auto& x : p) x = g(rng);
    }
    const auto v = vecs(pts);
    KMeansConfig seq;
    seq.seed = 11;
    seq.parallel = false;
    KMeansConfig par = seq;
    par.parallel = true;
    const auto a = kmeans(v, 4, seq), b = kmeans(v, 4, par), c = kmeans(v, 4, par);
    EXPECT_EQ(a.assignments, b.assignments);
    EXPECT_EQ(a.inertia, b.inertia);
    EXPECT_EQ(b.assignments, c.assignments);
}

TEST(KMeans, MonotoneOnRandomData) {
    std::mt19937 rng(9);
    std::normal_distribution<float> g;
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 10 + rng() % 80, d = 2 + rng() % 6, k = 1 + rng() % 6;
        std::vector<std::vector<float>> pts(n, std::vector<float>(d));
        for (auto& p : pts) {
            for (auto& x : p) x = g(rng);
        }
        KMeansConfig cfg;
        cfg.seed = t;
        const auto r = kmeans(vecs(pts), k, cfg);
        expect_monotone(r);
        EXPECT_NEAR(r.inertia, kmeans_objective(vecs(pts), r.assignments, r.centroids), 1e-6 * (1 + r.inertia));
    }
}

TEST(KMeans, BlobRecovery) {
    for (std::size_t classes = 2; classes <= 6; ++classes) {
        const auto centroids = backend::orthogonal_centroids(classes, 32);
        std::unordered_map<std::string, ClassId> assign;
        std::vector<std::string> texts;
        std::vector<std::size_t> gold;
        for (std::size_t i = 0; i < 200; ++i) {
            texts.push_back("p" + std::to_string(i));
            gold.push_back(i % classes);
            assign[texts.back()] = gold.back();
        }
        const backend::SyntheticBlobProvider p(assign, centroids, 0.05, classes);
        const auto r = kmeans(p.embed_batch(texts, true), classes);
        EXPECT_GE(clustering_accuracy(r.assignments, gold), 0.99) << classes;
        EXPECT_GE(nmi(r.assignments, gold), 0.95) << classes;
        expect_monotone(r);
    }
}
