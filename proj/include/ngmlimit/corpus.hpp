#ifndef NGMLIMIT_CORPUS_HPP
#define NGMLIMIT_CORPUS_HPP

// Seeded random inputs for property checks.

#include <cstdint>
#include <random>

#include "ngmlimit/dense.hpp"
#include "ngmlimit/relapse.hpp"

namespace ngmlimit::corpus {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Index uniform_index(Rng& rng, Index lo, Index hi) {
    return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

/// Entries uniform in [lo, hi].
inline MatrixXd random_matrix(Rng& rng, Index rows, Index cols, double lo = -1.0, double hi = 1.0) {
    MatrixXd out(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) out(r, c) = uniform(rng, lo, hi);
    return out;
}

/// Random matrix shifted towards the identity until its condition number is
/// modest; used where a "well-conditioned" input is wanted.
inline MatrixXd random_well_conditioned(Rng& rng, Index n) {
    MatrixXd a = random_matrix(rng, n, n);
    a.diagonal().array() += static_cast<double>(n);
    return a;
}

/// Strictly row-diagonally-dominant Z-matrix: a nonsingular M-matrix whose
/// principal minors are nonsingular M-matrices as well.
inline MatrixXd random_m_matrix(Rng& rng, Index n) {
    MatrixXd v = -random_matrix(rng, n, n, 0.0, 1.0);
    for (Index k = 0; k < n; ++k) {
        v(k, k) = 0.0;
        v(k, k) = -v.row(k).sum() + uniform(rng, 0.1, 1.0);
    }
    return v;
}

inline HostParams random_host(Rng& rng, Index stages) {
    HostParams h;
    h.c = uniform(rng, 0.2, 1.0);
    h.S_bar = uniform(rng, 0.5, 2.0);
    for (Index k = 0; k <= stages; ++k) h.alpha.push_back(uniform(rng, 0.1, 2.0));
    for (Index k = 0; k < stages; ++k) h.mu.push_back(uniform(rng, 0.01, 0.5));
    return h;
}

inline VectorParams random_vector(Rng& rng) {
    VectorParams v;
    v.f = uniform(rng, 0.2, 1.5);
    v.c_v = uniform(rng, 0.2, 1.0);
    v.S_v_bar = uniform(rng, 0.5, 3.0);
    v.mu_tilde = uniform(rng, 0.1, 1.0);
    return v;
}

}  // namespace ngmlimit::corpus

#endif  // NGMLIMIT_CORPUS_HPP
