#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "msgnn/csr.hpp"

namespace msgnn {

struct Edge {
    index_t src = 0;
    index_t dst = 0;
    double weight = 0.0;
};

// Signed, weighted, directed graph. At most one edge per ordered pair,
// weights nonzero, self-loops allowed. Immutable after construction.
struct SignedDiGraph {
    index_t n = 0;
    CsrMatrix<double> adj;  // adj.at(i, j) = w(i -> j), 0 if absent

    index_t num_edges() const { return adj.nnz(); }

    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(static_cast<std::size_t>(adj.nnz()));
        for (index_t i = 0; i < n; ++i) {
            const auto cs = adj.row_cols(i);
            const auto vs = adj.row_vals(i);
            for (std::size_t k = 0; k < cs.size(); ++k) out.push_back({i, cs[k], vs[k]});
        }
        return out;
    }
};

inline SignedDiGraph from_edge_list(const std::vector<Edge>& rows,
                                    std::optional<index_t> n_override = std::nullopt) {
    index_t max_index = -1;
    std::vector<std::tuple<index_t, index_t, double>> coo;
    coo.reserve(rows.size());
    for (const Edge& e : rows) {
        if (e.src < 0 || e.dst < 0) throw std::invalid_argument("from_edge_list: negative node index");
        if (!std::isfinite(e.weight)) throw std::invalid_argument("from_edge_list: non-finite weight");
        if (e.weight == 0.0) throw std::invalid_argument("from_edge_list: zero weight");
        max_index = std::max(max_index, std::max(e.src, e.dst));
        coo.emplace_back(e.src, e.dst, e.weight);
    }
    index_t n = max_index + 1;
    if (n_override) {
        if (*n_override < n) throw std::invalid_argument("from_edge_list: node count smaller than max index + 1");
        n = *n_override;
    }
    SignedDiGraph g;
    g.n = n;
    try {
        g.adj = CsrMatrix<double>::from_coo(n, n, std::move(coo));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("from_edge_list: duplicate ordered pair");
    }
    return g;
}

// Atilde(i,j) = (A(i,j) + A(j,i)) / 2; entries cancelling to exactly zero are
// dropped so the sparse support matches the Hermitian adjacency built on it.
inline CsrMatrix<double> symmetrized_adjacency(const SignedDiGraph& g) {
    std::vector<std::tuple<index_t, index_t, double>> coo;
    coo.reserve(static_cast<std::size_t>(2 * g.adj.nnz()));
    for (index_t i = 0; i < g.n; ++i) {
        const auto cs = g.adj.row_cols(i);
        const auto vs = g.adj.row_vals(i);
        for (std::size_t k = 0; k < cs.size(); ++k) {
            const index_t j = cs[k];
            if (i == j) {
                coo.emplace_back(i, i, vs[k]);  // (A_ii + A_ii) / 2
            } else {
                coo.emplace_back(i, j, 0.5 * vs[k]);
                coo.emplace_back(j, i, 0.5 * vs[k]);
            }
        }
    }
    CsrMatrix<double> sym = CsrMatrix<double>::from_coo(g.n, g.n, std::move(coo), /*sum_duplicates=*/true);
    // prune exact cancellations
    CsrMatrix<double> pruned(g.n, g.n);
    pruned.col.reserve(sym.col.size());
    pruned.val.reserve(sym.val.size());
    for (index_t i = 0; i < g.n; ++i) {
        const auto cs = sym.row_cols(i);
        const auto vs = sym.row_vals(i);
        for (std::size_t k = 0; k < cs.size(); ++k) {
            if (vs[k] == 0.0) continue;
            pruned.col.push_back(cs[k]);
            pruned.val.push_back(vs[k]);
        }
        pruned.row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<index_t>(pruned.col.size());
    }
    return pruned;
}

// Dtilde(i,i) = sum_j (|A(i,j)| + |A(j,i)|) / 2, returned as the diagonal.
inline std::vector<double> absolute_degree(const SignedDiGraph& g) {
    std::vector<double> d(static_cast<std::size_t>(g.n), 0.0);
    for (index_t i = 0; i < g.n; ++i) {
        const auto cs = g.adj.row_cols(i);
        const auto vs = g.adj.row_vals(i);
        for (std::size_t k = 0; k < cs.size(); ++k) {
            const double half = 0.5 * std::abs(vs[k]);
            d[static_cast<std::size_t>(i)] += half;
            d[static_cast<std::size_t>(cs[k])] += half;
        }
    }
    return d;
}

// Edge-disjoint partition by weight sign; union recovers the input.
inline std::pair<SignedDiGraph, SignedDiGraph> signed_subgraphs(const SignedDiGraph& g) {
    std::vector<std::tuple<index_t, index_t, double>> pos, neg;
    for (index_t i = 0; i < g.n; ++i) {
        const auto cs = g.adj.row_cols(i);
        const auto vs = g.adj.row_vals(i);
        for (std::size_t k = 0; k < cs.size(); ++k)
            (vs[k] > 0.0 ? pos : neg).emplace_back(i, cs[k], vs[k]);
    }
    SignedDiGraph gp, gn;
    gp.n = gn.n = g.n;
    gp.adj = CsrMatrix<double>::from_coo(g.n, g.n, std::move(pos));
    gn.adj = CsrMatrix<double>::from_coo(g.n, g.n, std::move(neg));
    return {std::move(gp), std::move(gn)};
}

}  // namespace msgnn
