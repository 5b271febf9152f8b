#ifndef NGMLIMIT_DENSE_HPP
#define NGMLIMIT_DENSE_HPP

// Dense real-matrix helpers on top of Eigen.
//
// Indices taken by the public functions are 1-based; storage is Eigen's.
// Every function takes its matrix arguments by const reference and returns a
// new matrix, so callers never observe mutation of their inputs.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <type_traits>

#include "ngmlimit/errors.hpp"

namespace ngmlimit {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using MatrixXd = Matrix<double>;

/// Relative pivot magnitude below which a factorization is declared singular.
inline constexpr double kSingularityThreshold = 1e-12;

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* op) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw InvalidInput(std::string(op) + ": expected a non-empty square matrix, got " +
                           std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

inline void require_index(Index idx, Index extent, const char* op) {
    if (idx < 1 || idx > extent) {
        throw InvalidInput(std::string(op) + ": index " + std::to_string(idx) +
                           " outside [1, " + std::to_string(extent) + "]");
    }
}

}  // namespace detail

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
    return a.allFinite();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* what) {
    if (!a.allFinite()) {
        throw InvalidInput(std::string(what) + ": matrix contains NaN or Inf");
    }
}

template <typename Scalar = double>
Matrix<Scalar> identity(Index n) {
    if (n < 1) throw InvalidInput("identity: dimension must be positive");
    return Matrix<Scalar>::Identity(n, n);
}

/// Maximum absolute row sum.
template <typename Derived>
auto inf_norm(const Eigen::MatrixBase<Derived>& a) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    if (a.size() == 0) return Real(0);
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename DerivedA, typename DerivedB>
auto matmul(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    using Scalar = typename DerivedA::Scalar;
    if (a.cols() != b.rows()) {
        throw InvalidInput("matmul: inner dimensions differ (" + std::to_string(a.cols()) +
                           " vs " + std::to_string(b.rows()) + ")");
    }
    return Matrix<Scalar>(a * b);
}

/// Copy of `a` with entry (i, j) replaced by `value`.
template <typename Derived>
auto set_entry(const Eigen::MatrixBase<Derived>& a, Index i, Index j,
               typename Derived::Scalar value) {
    detail::require_index(i, a.rows(), "set_entry");
    detail::require_index(j, a.cols(), "set_entry");
    Matrix<typename Derived::Scalar> out = a;
    out(i - 1, j - 1) = value;
    return out;
}

/// The matrix with row `i` and column `j` removed.
template <typename Derived>
auto minor(const Eigen::MatrixBase<Derived>& a, Index i, Index j) {
    const Index n = a.rows();
    const Index m = a.cols();
    if (n < 2 || m < 2) {
        throw InvalidInput("minor: matrix must be at least 2x2, got " + std::to_string(n) + "x" +
                           std::to_string(m));
    }
    detail::require_index(i, n, "minor");
    detail::require_index(j, m, "minor");
    const Index r = i - 1;
    const Index c = j - 1;
    Matrix<typename Derived::Scalar> out(n - 1, m - 1);
    out.topLeftCorner(r, c) = a.topLeftCorner(r, c);
    out.topRightCorner(r, m - 1 - c) = a.topRightCorner(r, m - 1 - c);
    out.bottomLeftCorner(n - 1 - r, c) = a.bottomLeftCorner(n - 1 - r, c);
    out.bottomRightCorner(n - 1 - r, m - 1 - c) = a.bottomRightCorner(n - 1 - r, m - 1 - c);
    return out;
}

/// Determinant by row-pivoted LU with sign tracking.
template <typename Derived>
auto determinant(const Eigen::MatrixBase<Derived>& a) {
    detail::require_square(a, "determinant");
    using Scalar = typename Derived::Scalar;
    Eigen::PartialPivLU<Matrix<Scalar>> lu(a.eval());
    return lu.determinant();
}

/// Recursive Laplace expansion along the first row. O(n!); used as an oracle.
template <typename Derived>
auto cofactor_det(const Eigen::MatrixBase<Derived>& a) {
    detail::require_square(a, "cofactor_det");
    using Scalar = typename Derived::Scalar;
    const Index n = a.rows();
    if (n > 10) throw InvalidInput("cofactor_det: dimension " + std::to_string(n) + " above 10");
    if (n == 1) return Scalar(a(0, 0));
    if (n == 2) return Scalar(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
    Scalar sum(0);
    for (Index k = 0; k < n; ++k) {
        if (a(0, k) == Scalar(0)) continue;
        const Scalar sign = (k % 2 == 0) ? Scalar(1) : Scalar(-1);
        sum += sign * a(0, k) * cofactor_det(minor(a, 1, k + 1));
    }
    return sum;
}

/// Smallest pivot magnitude of the row-pivoted LU factorization.
template <typename Derived>
auto min_pivot(const Eigen::MatrixBase<Derived>& a) {
    detail::require_square(a, "min_pivot");
    using Scalar = typename Derived::Scalar;
    Eigen::PartialPivLU<Matrix<Scalar>> lu(a.eval());
    return lu.matrixLU().diagonal().cwiseAbs().minCoeff();
}

/// Inverse via row-pivoted LU. Throws SingularMatrix when some pivot has
/// magnitude below kSingularityThreshold * ||a||_inf.
template <typename Derived>
auto inverse(const Eigen::MatrixBase<Derived>& a) {
    detail::require_square(a, "inverse");
    using Scalar = typename Derived::Scalar;
    Eigen::PartialPivLU<Matrix<Scalar>> lu(a.eval());
    const auto pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    const auto tol = kSingularityThreshold * inf_norm(a);
    if (!(pivot > tol) || pivot == 0) {
        throw SingularMatrix("inverse: matrix is singular to tolerance", static_cast<double>(pivot));
    }
    return Matrix<Scalar>(lu.inverse());
}

/// ||a||_inf * ||a^-1||_inf.
template <typename Derived>
auto condition_inf(const Eigen::MatrixBase<Derived>& a) {
    return inf_norm(a) * inf_norm(inverse(a));
}

}  // namespace ngmlimit

#endif  // NGMLIMIT_DENSE_HPP
