#include <algorithm>
#include <cmath>
#include <limits>

#include "phrasekit/cluster_eval.hpp"

namespace phrasekit::cluster {

namespace {

// Min-cost assignment of every row of an n x m cost matrix (n <= m) using
// row/column potentials. Returns col_of_row.
std::vector<std::size_t> min_cost_rows(const std::vector<std::vector<double>>& cost, std::size_t n, std::size_t m) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    // 1-based internally; column 0 is the virtual source.
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> row_of_col(m + 1, 0), way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        row_of_col[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = row_of_col[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (row_of_col[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> col_of_row(n, 0);
    for (std::size_t j = 1; j <= m; ++j) {
        if (row_of_col[j] != 0) col_of_row[row_of_col[j] - 1] = j - 1;
    }
    return col_of_row;
}

}  // namespace

Matching hungarian_max(const std::vector<std::vector<double>>& weights) {
    const std::size_t r = weights.size();
    if (r == 0 || weights.front().empty()) throw EmptyMatrix();
    const std::size_t c = weights.front().size();
    for (const auto& row : weights) {
        if (row.size() != c) throw InvalidArgument("ragged weight matrix");
        for (double w : row) {
            if (!std::isfinite(w)) throw InvalidArgument("non-finite weight");
        }
    }

    const bool transpose = r > c;
    const std::size_t n = transpose ? c : r;
    const std::size_t m = transpose ? r : c;
    std::vector<std::vector<double>> cost(n, std::vector<double>(m));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) cost[i][j] = -(transpose ? weights[j][i] : weights[i][j]);
    }
    const auto col_of_row = min_cost_rows(cost, n, m);

    Matching out;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t row = transpose ? col_of_row[i] : i;
        const std::size_t col = transpose ? i : col_of_row[i];
        out.pairs.emplace_back(row, col);
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    for (auto [row, col] : out.pairs) out.total += weights[row][col];
    return out;
}

}  // namespace phrasekit::cluster
