#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "msgnn/dense.hpp"
#include "msgnn/maglap.hpp"
#include "msgnn/parallel.hpp"
#include "msgnn/rng.hpp"

namespace msgnn {

// Full spectrum of a Hermitian matrix: eigenvalues ascending, eigenvector
// columns orthonormal, each column's global phase fixed so that its
// largest-magnitude component is real positive.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    CMat eigenvectors;  // column k pairs with eigenvalues[k]
};

inline constexpr index_t kDenseEigCap = 4000;

namespace detail {

// Householder reduction of a dense Hermitian matrix to real symmetric
// tridiagonal form, unblocked, lower-triangle convention: Q^H A Q = T.
// On return `a` holds the reflector vectors in its strictly lower part.
inline void householder_tridiagonalize(CMat& a, std::vector<double>& d, std::vector<double>& e,
                                       std::vector<cplx>& tau) {
    const index_t n = a.rows;
    d.assign(static_cast<std::size_t>(n), 0.0);
    e.assign(static_cast<std::size_t>(n), 0.0);
    tau.assign(static_cast<std::size_t>(n), cplx{});
    std::vector<cplx> p(static_cast<std::size_t>(n));
    std::vector<cplx> w(static_cast<std::size_t>(n));

    for (index_t k = 0; k + 1 < n; ++k) {
        const cplx alpha = a(k + 1, k);
        double xnorm2 = 0.0;
        for (index_t i = k + 2; i < n; ++i) xnorm2 += std::norm(a(i, k));

        if (xnorm2 == 0.0 && alpha.imag() == 0.0) {
            tau[static_cast<std::size_t>(k)] = cplx{};
            e[static_cast<std::size_t>(k)] = alpha.real();
            continue;
        }

        // elementary reflector H = I - tau v v^H with v(k+1) = 1 mapping the
        // column below the diagonal onto a real beta
        const double beta = -std::copysign(std::sqrt(std::norm(alpha) + xnorm2), alpha.real());
        const cplx t((beta - alpha.real()) / beta, -alpha.imag() / beta);
        const cplx scale = 1.0 / (alpha - beta);
        for (index_t i = k + 2; i < n; ++i) a(i, k) *= scale;
        e[static_cast<std::size_t>(k)] = beta;
        tau[static_cast<std::size_t>(k)] = t;

        // v(k+1) = 1 held implicitly
        a(k + 1, k) = cplx(1.0, 0.0);

        // p = tau * A v on the trailing block (rows are independent, so the
        // parallel split is deterministic)
        const index_t tail = n - (k + 1);
        parallel_for(tail, [&](index_t r) {
            const index_t i = k + 1 + r;
            cplx s{};
            for (index_t j = k + 1; j < n; ++j) s += a(i, j) * a(j, k);
            p[static_cast<std::size_t>(i)] = t * s;
        }, /*grain=*/64);
        // w = p - (tau/2) (p^H v) v
        cplx pv{};
        for (index_t i = k + 1; i < n; ++i) pv += std::conj(p[static_cast<std::size_t>(i)]) * a(i, k);
        const cplx corr = -0.5 * t * pv;
        for (index_t i = k + 1; i < n; ++i)
            w[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)] + corr * a(i, k);
        // rank-2 update A -= v w^H + w v^H
        parallel_for(tail, [&](index_t r) {
            const index_t i = k + 1 + r;
            const cplx vi = a(i, k);
            const cplx wi = w[static_cast<std::size_t>(i)];
            for (index_t j = k + 1; j < n; ++j)
                a(i, j) -= vi * std::conj(w[static_cast<std::size_t>(j)]) + wi * std::conj(a(j, k));
        }, /*grain=*/64);
    }
    for (index_t i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = a(i, i).real();
}

// Accumulate Q = H(0) H(1) ... H(n-2) from the stored reflectors.
inline CMat accumulate_q(const CMat& a, const std::vector<cplx>& tau) {
    const index_t n = a.rows;
    CMat q(n, n);
    for (index_t i = 0; i < n; ++i) q(i, i) = 1.0;
    std::vector<cplx> vh_q(static_cast<std::size_t>(n));
    for (index_t k = n - 2; k >= 0; --k) {
        const cplx t = tau[static_cast<std::size_t>(k)];
        if (t == cplx{}) continue;
        // rows k+1.., columns k+1.. are the only ones affected at this stage
        const index_t tail = n - (k + 1);
        parallel_for(tail, [&](index_t r) {
            const index_t c = k + 1 + r;
            cplx s = q(k + 1, c);  // v(k+1) = 1
            for (index_t i = k + 2; i < n; ++i) s += std::conj(a(i, k)) * q(i, c);
            vh_q[static_cast<std::size_t>(c)] = s;
        }, /*grain=*/64);
        parallel_for(tail, [&](index_t r) {
            const index_t c = k + 1 + r;
            const cplx s = t * vh_q[static_cast<std::size_t>(c)];
            q(k + 1, c) -= s;
            for (index_t i = k + 2; i < n; ++i) q(i, c) -= a(i, k) * s;
        }, /*grain=*/64);
    }
    return q;
}

// Implicit-shift QL on the real symmetric tridiagonal (d, e), rotating the
// complex columns of z alongside.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, CMat& z) {
    const index_t n = static_cast<index_t>(d.size());
    if (n == 0) return;
    const double eps = std::numeric_limits<double>::epsilon();
    // shift the subdiagonal so e[i] couples d[i] and d[i+1]
    for (index_t l = 0; l < n; ++l) {
        int iter = 0;
        index_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[static_cast<std::size_t>(m)]) + std::abs(d[static_cast<std::size_t>(m) + 1]);
                if (std::abs(e[static_cast<std::size_t>(m)]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 64) throw std::runtime_error("eigh: QL iteration did not converge");
                double g = (d[static_cast<std::size_t>(l) + 1] - d[static_cast<std::size_t>(l)]) /
                           (2.0 * e[static_cast<std::size_t>(l)]);
                double r = std::hypot(g, 1.0);
                g = d[static_cast<std::size_t>(m)] - d[static_cast<std::size_t>(l)] +
                    e[static_cast<std::size_t>(l)] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                index_t i;
                bool underflow = false;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[static_cast<std::size_t>(i)];
                    const double b = c * e[static_cast<std::size_t>(i)];
                    r = std::hypot(f, g);
                    e[static_cast<std::size_t>(i) + 1] = r;
                    if (r == 0.0) {
                        d[static_cast<std::size_t>(i) + 1] -= p;
                        e[static_cast<std::size_t>(m)] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[static_cast<std::size_t>(i) + 1] - p;
                    r = (d[static_cast<std::size_t>(i)] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[static_cast<std::size_t>(i) + 1] = g + p;
                    g = c * r - b;
                    for (index_t k = 0; k < z.rows; ++k) {
                        const cplx zk1 = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * zk1;
                        z(k, i) = c * z(k, i) - s * zk1;
                    }
                    if (i == l) break;
                }
                if (underflow && i >= l) continue;
                d[static_cast<std::size_t>(l)] -= p;
                e[static_cast<std::size_t>(l)] = g;
                e[static_cast<std::size_t>(m)] = 0.0;
            }
        } while (m != l);
    }
}

inline void fix_phases(CMat& z) {
    for (index_t c = 0; c < z.cols; ++c) {
        index_t arg = 0;
        double best = -1.0;
        for (index_t i = 0; i < z.rows; ++i) {
            const double mag = std::abs(z(i, c));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (best <= 0.0) continue;
        const cplx rot = std::conj(z(arg, c)) / best;
        for (index_t i = 0; i < z.rows; ++i) z(i, c) *= rot;
        z(arg, c) = cplx(std::abs(z(arg, c)), 0.0);
    }
}

}  // namespace detail

inline EigenDecomposition eigh_dense(CMat a) {
    if (a.rows != a.cols) throw std::invalid_argument("eigh: matrix not square");
    const index_t n = a.rows;
    EigenDecomposition out;
    if (n == 0) return out;

    std::vector<double> d, e;
    std::vector<cplx> tau;
    detail::householder_tridiagonalize(a, d, e, tau);
    CMat q = detail::accumulate_q(a, tau);
    detail::tridiagonal_ql(d, e, q);

    // ascending, stable under ties
    std::vector<index_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), index_t{0});
    std::stable_sort(order.begin(), order.end(), [&](index_t x, index_t y) {
        return d[static_cast<std::size_t>(x)] < d[static_cast<std::size_t>(y)];
    });
    out.eigenvalues.resize(static_cast<std::size_t>(n));
    out.eigenvectors = CMat(n, n);
    for (index_t c = 0; c < n; ++c) {
        out.eigenvalues[static_cast<std::size_t>(c)] = d[static_cast<std::size_t>(order[static_cast<std::size_t>(c)])];
        for (index_t i = 0; i < n; ++i) out.eigenvectors(i, c) = q(i, order[static_cast<std::size_t>(c)]);
    }
    detail::fix_phases(out.eigenvectors);
    return out;
}

inline EigenDecomposition eigh(const HermitianMatrix& h, index_t dense_cap = kDenseEigCap) {
    if (h.n > dense_cap)
        throw std::invalid_argument("eigh: dimension exceeds dense-solver cap; use iterative bound instead");
    return eigh_dense(to_dense(h.m));
}

struct PowerIterationError : std::runtime_error {
    double best_estimate;
    explicit PowerIterationError(double est)
        : std::runtime_error("lambda_max: power iteration did not converge"), best_estimate(est) {}
};

// Largest eigenvalue of a Hermitian PSD matrix by power iteration. The
// returned estimate carries the residual as a safety margin so it does not
// undershoot the true value by more than tol.
inline double lambda_max(const HermitianMatrix& h, double tol, int max_iter = 10000) {
    const index_t n = h.n;
    if (n == 0 || h.m.nnz() == 0) return 0.0;
    Rng rng(0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(n));
    std::vector<cplx> x(static_cast<std::size_t>(n));
    auto randomize = [&] {
        double norm2 = 0.0;
        for (auto& v : x) {
            v = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            norm2 += std::norm(v);
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& v : x) v *= inv;
    };
    randomize();
    std::vector<cplx> y(static_cast<std::size_t>(n));
    double rho = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        for (index_t i = 0; i < n; ++i) {
            const auto cs = h.m.row_cols(i);
            const auto vs = h.m.row_vals(i);
            cplx s{};
            for (std::size_t k = 0; k < cs.size(); ++k) s += vs[k] * x[static_cast<std::size_t>(cs[k])];
            y[static_cast<std::size_t>(i)] = s;
        }
        rho = 0.0;
        for (index_t i = 0; i < n; ++i)
            rho += (std::conj(x[static_cast<std::size_t>(i)]) * y[static_cast<std::size_t>(i)]).real();
        double resid2 = 0.0;
        double ynorm2 = 0.0;
        for (index_t i = 0; i < n; ++i) {
            resid2 += std::norm(y[static_cast<std::size_t>(i)] - rho * x[static_cast<std::size_t>(i)]);
            ynorm2 += std::norm(y[static_cast<std::size_t>(i)]);
        }
        const double resid = std::sqrt(resid2);
        if (resid <= 0.5 * tol) return rho + resid;
        if (ynorm2 < 1e-280) {
            randomize();  // started in the kernel
            continue;
        }
        const double inv = 1.0 / std::sqrt(ynorm2);
        for (index_t i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] * inv;
    }
    throw PowerIterationError(rho);
}

}  // namespace msgnn
