#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "msgnn/csr.hpp"

namespace msgnn {

using cplx = std::complex<double>;

// Row-major dense real matrix.
struct RMat {
    index_t rows = 0;
    index_t cols = 0;
    std::vector<double> a;

    RMat() = default;
    RMat(index_t r, index_t c, double fill = 0.0)
        : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

    double& operator()(index_t i, index_t j) { return a[static_cast<std::size_t>(i * cols + j)]; }
    double operator()(index_t i, index_t j) const { return a[static_cast<std::size_t>(i * cols + j)]; }
};

// Row-major dense complex matrix.
struct CMat {
    index_t rows = 0;
    index_t cols = 0;
    std::vector<cplx> a;

    CMat() = default;
    CMat(index_t r, index_t c, cplx fill = cplx{})
        : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

    cplx& operator()(index_t i, index_t j) { return a[static_cast<std::size_t>(i * cols + j)]; }
    cplx operator()(index_t i, index_t j) const { return a[static_cast<std::size_t>(i * cols + j)]; }
};

inline CMat complexify(const RMat& x) {
    CMat z(x.rows, x.cols);
    for (std::size_t k = 0; k < x.a.size(); ++k) z.a[k] = cplx(x.a[k], 0.0);
    return z;
}

// C = A * B, real * real
inline RMat matmul(const RMat& a, const RMat& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: shape mismatch");
    RMat c(a.rows, b.cols);
    for (index_t i = 0; i < a.rows; ++i)
        for (index_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (index_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

// C = A * B, complex * real (real weights acting on both parts)
inline CMat matmul(const CMat& a, const RMat& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: shape mismatch");
    CMat c(a.rows, b.cols);
    for (index_t i = 0; i < a.rows; ++i)
        for (index_t k = 0; k < a.cols; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (index_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

// C = A * B, complex * complex
inline CMat matmul(const CMat& a, const CMat& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: shape mismatch");
    CMat c(a.rows, b.cols);
    for (index_t i = 0; i < a.rows; ++i)
        for (index_t k = 0; k < a.cols; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (index_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

// Re(A^H * B): the gradient of a real weight matrix sandwiched between
// complex activations.
inline RMat real_adjoint_product(const CMat& a, const CMat& b) {
    if (a.rows != b.rows) throw std::invalid_argument("real_adjoint_product: shape mismatch");
    RMat c(a.cols, b.cols);
    for (index_t k = 0; k < a.rows; ++k)
        for (index_t i = 0; i < a.cols; ++i) {
            const cplx aki = a(k, i);
            if (aki == cplx{}) continue;
            for (index_t j = 0; j < b.cols; ++j) {
                const cplx bkj = b(k, j);
                c(i, j) += aki.real() * bkj.real() + aki.imag() * bkj.imag();
            }
        }
    return c;
}

// C = A^T * B, real
inline RMat transpose_matmul(const RMat& a, const RMat& b) {
    if (a.rows != b.rows) throw std::invalid_argument("transpose_matmul: shape mismatch");
    RMat c(a.cols, b.cols);
    for (index_t k = 0; k < a.rows; ++k)
        for (index_t i = 0; i < a.cols; ++i) {
            const double aki = a(k, i);
            if (aki == 0.0) continue;
            for (index_t j = 0; j < b.cols; ++j) c(i, j) += aki * b(k, j);
        }
    return c;
}

// C = A * B^T, complex * real
inline CMat matmul_transposed(const CMat& a, const RMat& b) {
    if (a.cols != b.cols) throw std::invalid_argument("matmul_transposed: shape mismatch");
    CMat c(a.rows, b.rows);
    for (index_t i = 0; i < a.rows; ++i)
        for (index_t j = 0; j < b.rows; ++j) {
            cplx s{};
            for (index_t k = 0; k < a.cols; ++k) s += a(i, k) * b(j, k);
            c(i, j) = s;
        }
    return c;
}

// C = A * B^T, real
inline RMat matmul_transposed(const RMat& a, const RMat& b) {
    if (a.cols != b.cols) throw std::invalid_argument("matmul_transposed: shape mismatch");
    RMat c(a.rows, b.rows);
    for (index_t i = 0; i < a.rows; ++i)
        for (index_t j = 0; j < b.rows; ++j) {
            double s = 0.0;
            for (index_t k = 0; k < a.cols; ++k) s += a(i, k) * b(j, k);
            c(i, j) = s;
        }
    return c;
}

inline double frobenius_norm(const CMat& m) {
    double s = 0.0;
    for (const cplx& z : m.a) s += std::norm(z);
    return std::sqrt(s);
}

inline CMat to_dense(const CsrMatrix<cplx>& m) {
    CMat d(m.rows, m.cols);
    for (index_t i = 0; i < m.rows; ++i) {
        const auto cs = m.row_cols(i);
        const auto vs = m.row_vals(i);
        for (std::size_t k = 0; k < cs.size(); ++k) d(i, cs[k]) = vs[k];
    }
    return d;
}

inline RMat to_dense(const CsrMatrix<double>& m) {
    RMat d(m.rows, m.cols);
    for (index_t i = 0; i < m.rows; ++i) {
        const auto cs = m.row_cols(i);
        const auto vs = m.row_vals(i);
        for (std::size_t k = 0; k < cs.size(); ++k) d(i, cs[k]) = vs[k];
    }
    return d;
}

}  // namespace msgnn
