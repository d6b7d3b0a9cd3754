#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "msgnn/dense.hpp"
#include "msgnn/graph.hpp"

namespace msgnn {

// Scales how strongly edge direction rotates the complex phase. q = 0
// discards direction entirely.
struct ChargeParameter {
    explicit ChargeParameter(double q) : value_(q) {
        if (!std::isfinite(q)) throw std::invalid_argument("ChargeParameter: non-finite q");
    }
    double value() const { return value_; }

  private:
    double value_;
};

// Sparse complex Hermitian matrix. Builders construct the upper triangle and
// mirror it, so conjugate symmetry is exact rather than a floating-point
// accident; diagonal entries are real.
struct HermitianMatrix {
    index_t n = 0;
    CsrMatrix<cplx> m;
};

namespace detail {

// One record per unordered support pair: forward = A(i,j), backward = A(j,i),
// with i <= j.
struct PairEntry {
    index_t i, j;
    double forward = 0.0;
    double backward = 0.0;
};

inline std::vector<PairEntry> collect_pairs(const SignedDiGraph& g) {
    struct Raw {
        index_t i, j;
        double w;
        bool is_forward;
    };
    std::vector<Raw> raw;
    raw.reserve(static_cast<std::size_t>(g.adj.nnz()));
    for (index_t s = 0; s < g.n; ++s) {
        const auto cs = g.adj.row_cols(s);
        const auto vs = g.adj.row_vals(s);
        for (std::size_t k = 0; k < cs.size(); ++k) {
            const index_t d = cs[k];
            if (s <= d)
                raw.push_back({s, d, vs[k], true});
            else
                raw.push_back({d, s, vs[k], false});
        }
    }
    std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
    std::vector<PairEntry> pairs;
    pairs.reserve(raw.size());
    for (const Raw& r : raw) {
        if (pairs.empty() || pairs.back().i != r.i || pairs.back().j != r.j) pairs.push_back({r.i, r.j, 0.0, 0.0});
        (r.is_forward ? pairs.back().forward : pairs.back().backward) = r.w;
    }
    return pairs;
}

inline HermitianMatrix hermitian_from_upper(index_t n,
                                            const std::vector<std::tuple<index_t, index_t, cplx>>& upper) {
    std::vector<std::tuple<index_t, index_t, cplx>> coo;
    coo.reserve(2 * upper.size());
    for (const auto& [i, j, v] : upper) {
        if (i == j) {
            coo.emplace_back(i, i, cplx(v.real(), 0.0));
        } else {
            coo.emplace_back(i, j, v);
            coo.emplace_back(j, i, std::conj(v));
        }
    }
    HermitianMatrix h;
    h.n = n;
    h.m = CsrMatrix<cplx>::from_coo(n, n, std::move(coo));
    return h;
}

inline cplx phase_factor(double q, double forward, double backward) {
    // reduce mod 2*pi before cos/sin; remainder keeps the odd symmetry exact
    const double two_pi = 2.0 * std::numbers::pi;
    const double theta = std::remainder(two_pi * q * (forward - backward), two_pi);
    return {std::cos(theta), std::sin(theta)};
}

}  // namespace detail

// q0 = 1 / (2 max_{i,j} (A(i,j) - A(j,i))), the charge mapping the largest
// asymmetry to phase pi.
inline double q_max(const SignedDiGraph& g) {
    double max_diff = 0.0;
    for (const auto& p : detail::collect_pairs(g))
        max_diff = std::max(max_diff, std::abs(p.forward - p.backward));
    if (max_diff <= 0.0)
        throw std::domain_error("q_max: graph has no directional information; use q = 0");
    return 1.0 / (2.0 * max_diff);
}

// H(q) = Atilde elementwise-times exp(i Theta(q)), supported exactly on the
// support of Atilde.
inline HermitianMatrix hermitian_adjacency(const SignedDiGraph& g, ChargeParameter q) {
    std::vector<std::tuple<index_t, index_t, cplx>> upper;
    for (const auto& p : detail::collect_pairs(g)) {
        const double atilde = 0.5 * (p.forward + p.backward);
        if (p.i == p.j) {
            if (p.forward != 0.0) upper.emplace_back(p.i, p.i, cplx(p.forward, 0.0));
            continue;
        }
        if (atilde == 0.0) continue;
        upper.emplace_back(p.i, p.j, atilde * detail::phase_factor(q.value(), p.forward, p.backward));
    }
    return detail::hermitian_from_upper(g.n, upper);
}

// L_U(q) = Dtilde - H(q)
inline HermitianMatrix laplacian_unnormalized(const SignedDiGraph& g, ChargeParameter q) {
    const std::vector<double> deg = absolute_degree(g);
    std::vector<std::tuple<index_t, index_t, cplx>> upper;
    for (const auto& p : detail::collect_pairs(g)) {
        if (p.i == p.j) continue;
        const double atilde = 0.5 * (p.forward + p.backward);
        if (atilde == 0.0) continue;
        upper.emplace_back(p.i, p.j, -atilde * detail::phase_factor(q.value(), p.forward, p.backward));
    }
    for (index_t i = 0; i < g.n; ++i) {
        const double h_ii = g.adj.at(i, i);
        const double d = deg[static_cast<std::size_t>(i)] - h_ii;
        if (d != 0.0) upper.emplace_back(i, i, cplx(d, 0.0));
    }
    return detail::hermitian_from_upper(g.n, upper);
}

// L_N(q) = I - D^{-1/2} H(q) D^{-1/2}. Rows of isolated nodes degenerate to
// identity rows, keeping the spectrum inside [0, 2].
inline HermitianMatrix laplacian_normalized(const SignedDiGraph& g, ChargeParameter q) {
    const std::vector<double> deg = absolute_degree(g);
    std::vector<double> inv_sqrt(deg.size(), 0.0);
    for (std::size_t i = 0; i < deg.size(); ++i)
        if (deg[i] > 0.0) inv_sqrt[i] = 1.0 / std::sqrt(deg[i]);
    std::vector<std::tuple<index_t, index_t, cplx>> upper;
    for (const auto& p : detail::collect_pairs(g)) {
        if (p.i == p.j) continue;
        const double atilde = 0.5 * (p.forward + p.backward);
        if (atilde == 0.0) continue;
        const double scaled = atilde * inv_sqrt[static_cast<std::size_t>(p.i)] * inv_sqrt[static_cast<std::size_t>(p.j)];
        upper.emplace_back(p.i, p.j, -scaled * detail::phase_factor(q.value(), p.forward, p.backward));
    }
    for (index_t i = 0; i < g.n; ++i) {
        const double h_ii = g.adj.at(i, i);
        double d = 1.0;
        if (deg[static_cast<std::size_t>(i)] > 0.0) d = 1.0 - h_ii / deg[static_cast<std::size_t>(i)];
        if (d != 0.0) upper.emplace_back(i, i, cplx(d, 0.0));
    }
    return detail::hermitian_from_upper(g.n, upper);
}

}  // namespace msgnn
