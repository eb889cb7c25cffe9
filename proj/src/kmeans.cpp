#include <algorithm>
#include <cmath>
#include <future>
#include <random>

#include "phrasekit/cluster_eval.hpp"
#include "phrasekit/hashing.hpp"

namespace phrasekit::cluster {

namespace {

using Matrix = std::vector<std::vector<double>>;

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double unit(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

Matrix kmeanspp_init(const Matrix& x, std::size_t k, std::mt19937_64& rng) {
    const std::size_t n = x.size();
    Matrix centers;
    centers.reserve(k);
    std::vector<bool> taken(n, false);
    std::size_t first = static_cast<std::size_t>(unit(rng) * double(n));
    first = std::min(first, n - 1);
    centers.push_back(x[first]);
    taken[first] = true;

    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(x[i], centers[0]);
    while (centers.size() < k) {
        double total = 0.0;
        for (double d : d2) total += d;
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = unit(rng) * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (d2[i] <= 0.0) continue;
                acc += d2[i];
                pick = i;
                if (acc > target) break;
            }
        } else {
            // Every point coincides with a center; take the next unused one.
            for (std::size_t i = 0; i < n && pick == n; ++i) {
                if (!taken[i]) pick = i;
            }
        }
        taken[pick] = true;
        centers.push_back(x[pick]);
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_dist(x[i], centers.back()));
    }
    return centers;
}

struct RunState {
    std::vector<std::size_t> assign;
    Matrix centers;
    std::vector<double> history;
    double inertia = 0.0;
    std::size_t n_iter = 0;
};

// Nearest-center assignment followed by empty-cluster repair. Returns inertia.
double assign_and_repair(const Matrix& x, RunState& s) {
    const std::size_t n = x.size();
    const std::size_t k = s.centers.size();
    std::vector<double> dist(n);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        double best_d = sq_dist(x[i], s.centers[0]);
        for (std::size_t c = 1; c < k; ++c) {
            const double d = sq_dist(x[i], s.centers[c]);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        s.assign[i] = best;
        dist[i] = best_d;
        ++sizes[best];
    }
    for (std::size_t e = 0; e < k; ++e) {
        if (sizes[e] != 0) continue;
        // Reseed from the point farthest from its center, taken from a
        // cluster that keeps at least one member.
        std::size_t far = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (sizes[s.assign[i]] < 2) continue;
            if (far == n || dist[i] > dist[far]) far = i;
        }
        if (far == n) throw InvariantViolation("k-means: no point available to reseed an empty cluster");
        --sizes[s.assign[far]];
        s.assign[far] = e;
        sizes[e] = 1;
        s.centers[e] = x[far];
        dist[far] = 0.0;
    }
    double inertia = 0.0;
    for (double d : dist) inertia += d;
    return inertia;
}

void check_monotone(const std::vector<double>& history) {
    if (history.size() < 2) return;
    const double prev = history[history.size() - 2];
    const double cur = history.back();
    if (cur > prev + 1e-9 * std::max(1.0, prev))
        throw InvariantViolation("k-means inertia increased from " + std::to_string(prev) + " to " +
                                 std::to_string(cur));
}

RunState run_once(const Matrix& x, std::size_t k, const KMeansConfig& cfg, std::uint64_t run_seed) {
    const std::size_t n = x.size();
    const std::size_t dim = x.front().size();
    std::mt19937_64 rng(run_seed);
    RunState s;
    s.assign.assign(n, 0);
    s.centers = kmeanspp_init(x, k, rng);

    for (std::size_t iter = 0; iter < cfg.max_iter; ++iter) {
        s.history.push_back(assign_and_repair(x, s));
        check_monotone(s.history);
        ++s.n_iter;

        Matrix next(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& c = next[s.assign[i]];
            for (std::size_t d = 0; d < dim; ++d) c[d] += x[i][d];
            ++sizes[s.assign[i]];
        }
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            for (auto& v : next[c]) v /= double(sizes[c]);
            shift = std::max(shift, std::sqrt(sq_dist(next[c], s.centers[c])));
        }
        s.centers = std::move(next);
        if (shift < cfg.tol) break;
    }
    s.inertia = assign_and_repair(x, s);
    s.history.push_back(s.inertia);
    check_monotone(s.history);
    return s;
}

}  // namespace

double kmeans_objective(std::span<const EmbeddingVector> vectors, std::span<const std::size_t> assignments,
                        const std::vector<std::vector<double>>& centroids) {
    if (vectors.size() != assignments.size()) throw LengthMismatch(vectors.size(), assignments.size());
    double total = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const auto& c = centroids.at(assignments[i]);
        if (c.size() != vectors[i].dim()) throw DimensionMismatch(c.size(), vectors[i].dim());
        for (std::size_t d = 0; d < c.size(); ++d) {
            const double diff = double(vectors[i][d]) - c[d];
            total += diff * diff;
        }
    }
    return total;
}

ClusteringResult kmeans(std::span<const EmbeddingVector> vectors, std::size_t k, const KMeansConfig& config) {
    if (k == 0) throw InvalidArgument("k must be positive");
    if (k > vectors.size()) throw KTooLarge(k, vectors.size());
    if (config.n_restarts == 0) throw InvalidArgument("need at least one restart");
    const std::size_t dim = vectors.front().dim();
    Matrix x;
    x.reserve(vectors.size());
    for (const auto& v : vectors) {
        if (v.dim() != dim) throw DimensionMismatch(dim, v.dim());
        x.emplace_back(v.values().begin(), v.values().end());
    }

    std::vector<RunState> runs(config.n_restarts);
    auto seed_for = [&](std::size_t r) { return splitmix64(config.seed ^ splitmix64(r)); };
    if (config.parallel && config.n_restarts > 1) {
        std::vector<std::future<RunState>> futures;
        for (std::size_t r = 0; r < config.n_restarts; ++r)
            futures.push_back(std::async(std::launch::async, run_once, std::cref(x), k, std::cref(config), seed_for(r)));
        for (std::size_t r = 0; r < config.n_restarts; ++r) runs[r] = futures[r].get();
    } else {
        for (std::size_t r = 0; r < config.n_restarts; ++r) runs[r] = run_once(x, k, config, seed_for(r));
    }

    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].inertia < runs[best].inertia) best = r;
    }

    ClusteringResult out;
    out.assignments = std::move(runs[best].assign);
    out.centroids = std::move(runs[best].centers);
    out.inertia = runs[best].inertia;
    out.n_iter = runs[best].n_iter;
    out.inertia_history = std::move(runs[best].history);
    out.seed = config.seed;
    out.restart = best;

    if (k > 1 && std::all_of(x.begin(), x.end(), [&](const auto& p) { return p == x.front(); })) {
        out.warnings.push_back("degenerate input: all points identical; clusters beyond the first are singletons");
        warn(out.warnings.back());
    }
    return out;
}

}  // namespace phrasekit::cluster
