#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "msgnn/dense.hpp"
#include "msgnn/graph.hpp"
#include "msgnn/parallel.hpp"

namespace msgnn {

// Stocks x days matrix of returns; no missing values allowed, callers impute
// or drop beforehand.
struct ReturnPanel {
    std::vector<std::string> ids;
    RMat returns;

    void validate() const {
        if (returns.cols < 3) throw std::invalid_argument("ReturnPanel: need at least 3 observations");
        if (!ids.empty() && static_cast<index_t>(ids.size()) != returns.rows)
            throw std::invalid_argument("ReturnPanel: id count != row count");
        for (double v : returns.a)
            if (!std::isfinite(v)) throw std::invalid_argument("ReturnPanel: non-finite return");
    }
};

// Which series is the regressor. `leader_lagged` regresses today's follower
// return on yesterday's leader return, so entry (i, j) measures how much i
// leads j. `follower_lagged` is the transposed-literal alternative.
enum class LagOrientation { leader_lagged, follower_lagged };

// Dense matrix of pairwise lag-one regression slopes (with intercept).
// Diagonal forced to zero; zero-variance regressors produce zero entries and
// raise the warning flag.
inline RMat lead_lag_matrix(const ReturnPanel& panel,
                            LagOrientation orientation = LagOrientation::leader_lagged,
                            bool* zero_variance_warning = nullptr) {
    panel.validate();
    const index_t s = panel.returns.rows;
    const index_t t = panel.returns.cols;
    const index_t m = t - 1;  // regression sample size
    if (zero_variance_warning) *zero_variance_warning = false;

    // per-stock lagged (first m) and current (last m) means
    std::vector<double> lag_mean(static_cast<std::size_t>(s), 0.0);
    std::vector<double> cur_mean(static_cast<std::size_t>(s), 0.0);
    std::vector<double> lag_var(static_cast<std::size_t>(s), 0.0);
    std::vector<char> constant(static_cast<std::size_t>(s), 1);
    for (index_t i = 0; i < s; ++i) {
        for (index_t k = 0; k < m; ++k) {
            lag_mean[static_cast<std::size_t>(i)] += panel.returns(i, k);
            cur_mean[static_cast<std::size_t>(i)] += panel.returns(i, k + 1);
            if (panel.returns(i, k) != panel.returns(i, 0)) constant[static_cast<std::size_t>(i)] = 0;
        }
        lag_mean[static_cast<std::size_t>(i)] /= static_cast<double>(m);
        cur_mean[static_cast<std::size_t>(i)] /= static_cast<double>(m);
        for (index_t k = 0; k < m; ++k) {
            const double d = panel.returns(i, k) - lag_mean[static_cast<std::size_t>(i)];
            lag_var[static_cast<std::size_t>(i)] += d * d;
        }
    }

    RMat beta(s, s);
    std::atomic<bool> warn{false};
    parallel_for(s, [&](index_t lead) {
        if (constant[static_cast<std::size_t>(lead)] || lag_var[static_cast<std::size_t>(lead)] == 0.0) {
            warn.store(true, std::memory_order_relaxed);
            return;  // regressor has no variance, row stays zero
        }
        for (index_t follow = 0; follow < s; ++follow) {
            if (follow == lead) continue;
            double cov = 0.0;
            for (index_t k = 0; k < m; ++k)
                cov += (panel.returns(lead, k) - lag_mean[static_cast<std::size_t>(lead)]) *
                       (panel.returns(follow, k + 1) - cur_mean[static_cast<std::size_t>(follow)]);
            const double b = cov / lag_var[static_cast<std::size_t>(lead)];
            if (orientation == LagOrientation::leader_lagged)
                beta(lead, follow) = b;
            else
                beta(follow, lead) = b;
        }
    }, /*grain=*/1);
    if (zero_variance_warning) *zero_variance_warning = warn.load();
    return beta;
}

// Keeps the ceil(frac * (S^2 - S)) off-diagonal entries of largest
// magnitude as a signed directed graph. Ties break by (|value| desc, row
// asc, col asc).
inline SignedDiGraph sparsify_top(const RMat& m, double frac = 0.2) {
    if (m.rows != m.cols) throw std::invalid_argument("sparsify_top: matrix not square");
    if (!(frac > 0.0 && frac <= 1.0)) throw std::invalid_argument("sparsify_top: frac out of (0, 1]");
    const index_t s = m.rows;
    struct Entry {
        double mag;
        index_t i, j;
        double v;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(s) * static_cast<std::size_t>(s - 1));
    for (index_t i = 0; i < s; ++i)
        for (index_t j = 0; j < s; ++j) {
            if (i == j) continue;
            entries.push_back({std::abs(m(i, j)), i, j, m(i, j)});
        }
    const auto keep = static_cast<std::size_t>(
        std::ceil(frac * static_cast<double>(s) * static_cast<double>(s - 1)));
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(b.mag, a.i, a.j) < std::tie(a.mag, b.i, b.j);
    });
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < keep && k < entries.size(); ++k) {
        if (entries[k].v == 0.0) continue;  // an exact zero is no edge
        edges.push_back({entries[k].i, entries[k].j, entries[k].v});
    }
    return from_edge_list(edges, s);
}

}  // namespace msgnn
