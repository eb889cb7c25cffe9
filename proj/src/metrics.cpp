#include <algorithm>
#include <cmath>

#include "phrasekit/cluster_eval.hpp"

namespace phrasekit::cluster {

namespace {

// Maps arbitrary ids onto 0..distinct-1 in increasing id order.
std::vector<std::size_t> compact(std::span<const std::size_t> ids, std::size_t& distinct) {
    std::vector<std::size_t> sorted(ids.begin(), ids.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    distinct = sorted.size();
    std::vector<std::size_t> out;
    out.reserve(ids.size());
    for (auto id : ids) {
        out.push_back(static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), id) - sorted.begin()));
    }
    return out;
}

double entropy(const std::vector<std::size_t>& totals, double n) {
    double h = 0.0;
    for (auto t : totals) {
        if (t == 0) continue;
        const double p = double(t) / n;
        h -= p * std::log(p);
    }
    return h;
}

}  // namespace

ContingencyTable ContingencyTable::build(std::span<const std::size_t> assignments, std::span<const std::size_t> gold) {
    if (assignments.size() != gold.size()) throw LengthMismatch(assignments.size(), gold.size());
    if (assignments.empty()) throw InvalidArgument("metrics need at least one point");
    std::size_t n_clusters = 0, n_classes = 0;
    const auto a = compact(assignments, n_clusters);
    const auto g = compact(gold, n_classes);

    ContingencyTable t;
    t.counts.assign(n_clusters, std::vector<std::size_t>(n_classes, 0));
    t.cluster_totals.assign(n_clusters, 0);
    t.class_totals.assign(n_classes, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++t.counts[a[i]][g[i]];
        ++t.cluster_totals[a[i]];
        ++t.class_totals[g[i]];
    }
    t.total = a.size();
    return t;
}

double clustering_accuracy(std::span<const std::size_t> assignments, std::span<const std::size_t> gold) {
    const auto t = ContingencyTable::build(assignments, gold);
    std::vector<std::vector<double>> w(t.counts.size());
    for (std::size_t i = 0; i < t.counts.size(); ++i) w[i].assign(t.counts[i].begin(), t.counts[i].end());
    return hungarian_max(w).total / double(t.total);
}

double nmi(std::span<const std::size_t> assignments, std::span<const std::size_t> gold) {
    const auto t = ContingencyTable::build(assignments, gold);
    const double n = double(t.total);
    const double h_c = entropy(t.cluster_totals, n);
    const double h_y = entropy(t.class_totals, n);
    if (h_c == 0.0 && h_y == 0.0) return 1.0;

    double mi = 0.0;
    for (std::size_t i = 0; i < t.counts.size(); ++i) {
        for (std::size_t j = 0; j < t.counts[i].size(); ++j) {
            const auto nij = t.counts[i][j];
            if (nij == 0) continue;
            const double joint = double(nij) / n;
            mi += joint * std::log(n * double(nij) / (double(t.cluster_totals[i]) * double(t.class_totals[j])));
        }
    }
    if (mi <= 0.0) return 0.0;
    return std::clamp(mi / (0.5 * (h_c + h_y)), 0.0, 1.0);
}

}  // namespace phrasekit::cluster
