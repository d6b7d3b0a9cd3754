#pragma once

#include <stdexcept>

#include "msgnn/eig.hpp"

namespace msgnn {

enum class EigOrder { largest, smallest };

// Stacks real then imaginary parts of k eigenvectors, chosen from the top or
// bottom of the spectrum, into an n x 2k real feature matrix.
inline RMat spectral_embed(const HermitianMatrix& m, index_t k, EigOrder order) {
    if (k < 0 || k > m.n) throw std::invalid_argument("spectral_embed: k out of range");
    const EigenDecomposition eig = eigh(m);
    RMat out(m.n, 2 * k);
    for (index_t c = 0; c < k; ++c) {
        const index_t src = order == EigOrder::largest ? m.n - 1 - c : c;
        for (index_t i = 0; i < m.n; ++i) {
            out(i, c) = eig.eigenvectors(i, src).real();
            out(i, k + c) = eig.eigenvectors(i, src).imag();
        }
    }
    return out;
}

}  // namespace msgnn
