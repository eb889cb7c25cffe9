#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phrasekit/core.hpp"

namespace phrasekit::cluster {

struct KMeansConfig {
    std::size_t n_restarts = 10;
    std::size_t max_iter = 300;
    // Converged when no centroid moves farther than this (Euclidean).
    double tol = 1e-4;
    std::uint64_t seed = 0;
    // Run restarts on separate threads.
    bool parallel = true;
};

struct ClusteringResult {
    std::vector<std::size_t> assignments;
    std::vector<std::vector<double>> centroids;
    double inertia = 0.0;
    std::size_t n_iter = 0;
    std::uint64_t seed = 0;
    // Index of the winning restart.
    std::size_t restart = 0;
    // Inertia after each assignment step of the winning restart.
    std::vector<double> inertia_history;
    std::vector<std::string> warnings;
};

// Lloyd's algorithm with k-means++ seeding, best of n_restarts by inertia
// (ties go to the lowest restart index). Throws KTooLarge when k > n and
// InvariantViolation if an iteration ever increases the objective.
ClusteringResult kmeans(std::span<const EmbeddingVector> vectors, std::size_t k, const KMeansConfig& config = {});

// Sum of squared Euclidean distances to the assigned centroids.
double kmeans_objective(std::span<const EmbeddingVector> vectors, std::span<const std::size_t> assignments,
                        const std::vector<std::vector<double>>& centroids);

struct Matching {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    double total = 0.0;
};

// Maximum-weight matching on a dense r x c matrix (row-major), pairing
// min(r, c) rows with distinct columns. O(n^2 m) shortest augmenting path.
Matching hungarian_max(const std::vector<std::vector<double>>& weights);

struct ContingencyTable {
    // counts[cluster][class]
    std::vector<std::vector<std::size_t>> counts;
    std::vector<std::size_t> cluster_totals;
    std::vector<std::size_t> class_totals;
    std::size_t total = 0;

    static ContingencyTable build(std::span<const std::size_t> assignments, std::span<const std::size_t> gold);
};

// Best one-to-one cluster -> class accuracy.
double clustering_accuracy(std::span<const std::size_t> assignments, std::span<const std::size_t> gold);

// MI / mean(H(C), H(Y)), natural log.
double nmi(std::span<const std::size_t> assignments, std::span<const std::size_t> gold);

}  // namespace phrasekit::cluster
