#ifndef NGMLIMIT_SPECTRUM_HPP
#define NGMLIMIT_SPECTRUM_HPP

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

#include "ngmlimit/dense.hpp"

namespace ngmlimit {

/// Eigenvalues with |Im| below this (relative to max(1, |lambda|)) are real.
inline constexpr double kConjugatePairTolerance = 1e-8;

/// QR sweeps allowed per row before declaring non-convergence.
inline constexpr Index kSweepsPerRow = 100;

/// All eigenvalues of a real square matrix, sorted by real part then
/// imaginary part. Non-real values come in conjugate pairs.
template <typename Real>
struct Spectrum {
    std::vector<std::complex<Real>> values;

    std::size_t size() const { return values.size(); }
};

/// Hessenberg reduction followed by shifted QR (Eigen's real Schur form).
template <typename Derived>
auto eigenvalues(const Eigen::MatrixBase<Derived>& a) {
    using Real = typename Derived::Scalar;
    static_assert(!Eigen::NumTraits<Real>::IsComplex, "eigenvalues: real input expected");
    detail::require_square(a, "eigenvalues");
    const Index n = a.rows();

    Eigen::EigenSolver<Matrix<Real>> solver;
    solver.setMaxIterations(kSweepsPerRow * n);
    solver.compute(a.eval(), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        // Residual: the largest subdiagonal of the partially reduced Schur form.
        Eigen::RealSchur<Matrix<Real>> schur(n);
        schur.setMaxIterations(kSweepsPerRow * n);
        schur.compute(a.eval(), false);
        const Matrix<Real> t = schur.matrixT();
        Real residual(0);
        for (Index k = 1; k < n; ++k) residual = std::max(residual, std::abs(t(k, k - 1)));
        throw ConvergenceError("eigenvalues: QR iteration did not converge", double(residual));
    }

    Spectrum<Real> out;
    out.values.reserve(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) {
        std::complex<Real> z = solver.eigenvalues()(k);
        const Real scale = std::max(Real(1), std::abs(z));
        if (std::abs(z.imag()) <= Real(kConjugatePairTolerance) * scale) z.imag(Real(0));
        out.values.push_back(z);
    }
    std::sort(out.values.begin(), out.values.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return out;
}

/// max |lambda|; zero for the zero matrix.
template <typename Derived>
auto spectral_radius(const Eigen::MatrixBase<Derived>& a) {
    using Real = typename Derived::Scalar;
    Real rho(0);
    for (const auto& z : eigenvalues(a).values) rho = std::max(rho, std::abs(z));
    return rho;
}

/// max Re(lambda).
template <typename Derived>
auto spectral_abscissa(const Eigen::MatrixBase<Derived>& a) {
    const auto spectrum = eigenvalues(a);
    auto best = spectrum.values.front().real();
    for (const auto& z : spectrum.values) best = std::max(best, z.real());
    return best;
}

/// Largest distance in an optimal one-to-one pairing of two equal-size
/// multisets of complex numbers. Exhaustive over permutations up to 8
/// values, greedy nearest-neighbour beyond that.
template <typename Real>
Real multiset_distance(std::vector<std::complex<Real>> a, std::vector<std::complex<Real>> b) {
    if (a.size() != b.size()) throw InvalidInput("multiset_distance: size mismatch");
    if (a.empty()) return Real(0);
    if (a.size() <= 8) {
        std::vector<std::size_t> perm(b.size());
        for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
        Real best = std::numeric_limits<Real>::infinity();
        do {
            Real worst(0);
            for (std::size_t k = 0; k < a.size() && worst < best; ++k) {
                worst = std::max(worst, std::abs(a[k] - b[perm[k]]));
            }
            best = std::min(best, worst);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }
    Real worst(0);
    for (const auto& z : a) {
        auto it = std::min_element(b.begin(), b.end(), [&](const auto& x, const auto& y) {
            return std::abs(x - z) < std::abs(y - z);
        });
        worst = std::max(worst, std::abs(*it - z));
        b.erase(it);
    }
    return worst;
}

}  // namespace ngmlimit

#endif  // NGMLIMIT_SPECTRUM_HPP
