#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "msgnn/dense.hpp"
#include "msgnn/maglap.hpp"
#include "msgnn/parallel.hpp"

namespace msgnn {

// y = M x for a sparse complex matrix and a dense block of column vectors.
// Rows are processed independently, so the result is identical for any
// thread count.
inline CMat spmm(const CsrMatrix<cplx>& m, const CMat& x) {
    if (m.cols != x.rows) throw std::invalid_argument("spmm: shape mismatch");
    CMat y(m.rows, x.cols);
    const index_t f = x.cols;
    parallel_for(m.rows, [&](index_t i) {
        const auto cs = m.row_cols(i);
        const auto vs = m.row_vals(i);
        cplx* out = &y.a[static_cast<std::size_t>(i * f)];
        for (std::size_t k = 0; k < cs.size(); ++k) {
            const cplx v = vs[k];
            const cplx* in = &x.a[static_cast<std::size_t>(cs[k] * f)];
            for (index_t c = 0; c < f; ++c) out[c] += v * in[c];
        }
    });
    return y;
}

// Ltil = (2 / lambda_max) L - I, with every diagonal entry materialized.
inline CsrMatrix<cplx> scaled_laplacian(const HermitianMatrix& l, double lambda_max) {
    if (lambda_max <= 0.0) throw std::invalid_argument("scaled_laplacian: lambda_max must be positive");
    const double scale = 2.0 / lambda_max;
    std::vector<std::tuple<index_t, index_t, cplx>> coo;
    coo.reserve(static_cast<std::size_t>(l.m.nnz()) + static_cast<std::size_t>(l.n));
    for (index_t i = 0; i < l.n; ++i) {
        const auto cs = l.m.row_cols(i);
        const auto vs = l.m.row_vals(i);
        bool diag_seen = false;
        for (std::size_t k = 0; k < cs.size(); ++k) {
            cplx v = scale * vs[k];
            if (cs[k] == i) {
                v -= 1.0;
                diag_seen = true;
            }
            coo.emplace_back(i, cs[k], v);
        }
        if (!diag_seen) coo.emplace_back(i, i, cplx(-1.0, 0.0));
    }
    return CsrMatrix<cplx>::from_coo(l.n, l.n, std::move(coo));
}

// sum_k coeffs[k] T_k(Ltil) x via the three-term recurrence
// T_k = 2 Ltil T_{k-1} - T_{k-2}.
inline CMat cheb_apply(const HermitianMatrix& m, double lambda_max, std::span<const double> coeffs,
                       const CMat& x) {
    if (coeffs.empty()) throw std::invalid_argument("cheb_apply: empty coefficient vector");
    if (m.n != x.rows) throw std::invalid_argument("cheb_apply: shape mismatch");
    const CsrMatrix<cplx> ltil = scaled_laplacian(m, lambda_max);

    CMat acc = x;
    for (cplx& v : acc.a) v *= coeffs[0];
    if (coeffs.size() == 1) return acc;

    CMat t_prev = x;          // T_0 x
    CMat t_cur = spmm(ltil, x);  // T_1 x
    for (std::size_t k = 0; k < acc.a.size(); ++k) acc.a[k] += coeffs[1] * t_cur.a[k];
    for (std::size_t deg = 2; deg < coeffs.size(); ++deg) {
        CMat t_next = spmm(ltil, t_cur);
        for (std::size_t k = 0; k < t_next.a.size(); ++k)
            t_next.a[k] = 2.0 * t_next.a[k] - t_prev.a[k];
        for (std::size_t k = 0; k < acc.a.size(); ++k) acc.a[k] += coeffs[deg] * t_next.a[k];
        t_prev = std::move(t_cur);
        t_cur = std::move(t_next);
    }
    return acc;
}

}  // namespace msgnn
