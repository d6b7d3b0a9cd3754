#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "msgnn/dense.hpp"
#include "msgnn/eig.hpp"
#include "msgnn/graph.hpp"

namespace msgnn {

// How edge weights enter the degree statistics: edge counts, plain weight
// sums, or absolute-value sums.
enum class WeightMode { none, net_sum, abs_sum };

struct FeatureSpec {
    bool signed_split = true;            // separate positive / negative subgraph statistics
    WeightMode weighted = WeightMode::none;
    bool standardize = true;             // z-score per column after construction

    index_t dim() const { return signed_split ? 4 : 2; }
};

namespace detail {

inline void standardize_columns(RMat& x) {
    for (index_t j = 0; j < x.cols; ++j) {
        double mean = 0.0;
        for (index_t i = 0; i < x.rows; ++i) mean += x(i, j);
        mean /= static_cast<double>(x.rows);
        double var = 0.0;
        for (index_t i = 0; i < x.rows; ++i) {
            const double d = x(i, j) - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / static_cast<double>(x.rows));
        if (sd > 0.0) {
            const double inv = 1.0 / sd;
            for (index_t i = 0; i < x.rows; ++i) x(i, j) = (x(i, j) - mean) * inv;
        } else {
            for (index_t i = 0; i < x.rows; ++i) x(i, j) = 0.0;  // constant column carries no signal
        }
    }
}

}  // namespace detail

// Per-node degree tuples: [in, out] when unsigned, [in+, out+, in-, out-]
// computed over the signed subgraphs otherwise. Within a signed subgraph the
// weighted statistics sum magnitudes, so they never cancel.
inline RMat build_features(const SignedDiGraph& g, const FeatureSpec& spec) {
    RMat x(g.n, spec.dim());
    auto accumulate = [&](index_t in_col, index_t out_col, bool want_positive, bool split) {
        for (index_t s = 0; s < g.n; ++s) {
            const auto cs = g.adj.row_cols(s);
            const auto vs = g.adj.row_vals(s);
            for (std::size_t k = 0; k < cs.size(); ++k) {
                const double w = vs[k];
                if (split && (w > 0.0) != want_positive) continue;
                double stat = 1.0;
                switch (spec.weighted) {
                    case WeightMode::none: stat = 1.0; break;
                    case WeightMode::net_sum: stat = split ? std::abs(w) : w; break;
                    case WeightMode::abs_sum: stat = std::abs(w); break;
                }
                x(s, out_col) += stat;
                x(cs[k], in_col) += stat;
            }
        }
    };
    if (spec.signed_split) {
        accumulate(0, 1, true, true);   // in+, out+
        accumulate(2, 3, false, true);  // in-, out-
    } else {
        accumulate(0, 1, true, false);  // in, out over the whole graph
    }
    if (spec.standardize) detail::standardize_columns(x);
    return x;
}

// Node features for undirected signed graphs: eigenvectors of the largest
// num_clusters eigenvalues of Atilde + (mean absolute degree / n) * J, where
// J is the all-ones matrix.
inline RMat build_eigen_features(const SignedDiGraph& g, int num_clusters) {
    if (num_clusters < 1 || num_clusters > g.n) throw std::invalid_argument("build_eigen_features: bad cluster count");
    const CsrMatrix<double> atilde = symmetrized_adjacency(g);
    const std::vector<double> deg = absolute_degree(g);
    double mean_deg = 0.0;
    for (double d : deg) mean_deg += d;
    mean_deg /= static_cast<double>(g.n);
    const double reg = mean_deg / static_cast<double>(g.n);

    CMat dense(g.n, g.n, cplx(reg, 0.0));
    for (index_t i = 0; i < g.n; ++i) {
        const auto cs = atilde.row_cols(i);
        const auto vs = atilde.row_vals(i);
        for (std::size_t k = 0; k < cs.size(); ++k) dense(i, cs[k]) += vs[k];
    }
    const EigenDecomposition eig = eigh_dense(std::move(dense));
    RMat x(g.n, num_clusters);
    for (int c = 0; c < num_clusters; ++c) {
        const index_t src = g.n - 1 - c;
        for (index_t i = 0; i < g.n; ++i) x(i, c) = eig.eigenvectors(i, src).real();
    }
    return x;
}

}  // namespace msgnn
