#ifndef NGMLIMIT_MINOR_LIMIT_HPP
#define NGMLIMIT_MINOR_LIMIT_HPP

// Limits along a diagonal ray A(t) = base with entry (i, i) replaced by t.
//
// For a nonsingular minor base_[i,i]:
//   * det A(t) is affine in t with slope det base_[i,i];
//   * (A(t)^-1)_[i,i] -> (base_[i,i])^-1 as t -> inf;
//   * row i and column i of A(t)^-1 decay to zero;
//   * rho(F V(t)^-1) -> rho(F_[i,i] (V_[i,i])^-1) for a fixed F.
// Each inverse entry is a ratio of affine functions of t, so every one of
// these limits is approached at rate O(1/t). The routines here evaluate the
// families along a schedule of t values, measure the error against the exact
// target and extrapolate.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ngmlimit/dense.hpp"
#include "ngmlimit/spectrum.hpp"

namespace ngmlimit {

template <typename Real>
class DiagonalRay {
public:
    /// `i` is 1-based.
    DiagonalRay(Matrix<Real> base, Index i) : base_(std::move(base)), i_(i) {
        detail::require_square(base_, "DiagonalRay");
        if (base_.rows() < 2) throw InvalidInput("DiagonalRay: base must be at least 2x2");
        detail::require_index(i_, base_.rows(), "DiagonalRay");
        require_finite(base_, "DiagonalRay");
    }

    const Matrix<Real>& base() const { return base_; }
    Index index() const { return i_; }
    Index dim() const { return base_.rows(); }

    Matrix<Real> at(Real t) const { return set_entry(base_, i_, i_, t); }

    Matrix<Real> fixed_minor() const { return minor(base_, i_, i_); }

private:
    Matrix<Real> base_;
    Index i_;
};

/// Per-point errors of a limit evaluated along a schedule.
///
/// `schedule` holds the points actually evaluated; points where A(t) was
/// singular are moved to `skipped`. `extrapolated_errors[k]` is the error of
/// the Richardson combination of points k and k+1. A point is `flagged` when
/// the condition estimate of A(t) exceeded 1/(100 eps).
template <typename Real>
struct ConvergenceReport {
    std::vector<Real> schedule;
    std::vector<Real> errors;
    std::vector<Real> extrapolated_errors;
    std::vector<bool> flagged;
    std::vector<Real> skipped;
    std::optional<Real> fitted_rate;

    std::size_t size() const { return schedule.size(); }
    Real final_error() const { return errors.back(); }
    Real final_extrapolated_error() const {
        return extrapolated_errors.empty() ? errors.back() : extrapolated_errors.back();
    }
};

template <typename Value, typename Real>
struct LimitEstimate {
    Value estimate;
    ConvergenceReport<Real> report;
};

template <typename Real>
struct AffineCoeffs {
    Real slope;
    Real intercept;

    Real operator()(Real t) const { return slope * t + intercept; }
};

template <typename Real>
struct RowColDecay {
    Real row_max;
    Real col_max;
};

template <typename Real>
Real unreliable_condition() {
    return Real(1) / (Real(100) * std::numeric_limits<Real>::epsilon());
}

/// det A(t) = slope * t + intercept. Succeeds even when the minor is singular.
template <typename Real>
AffineCoeffs<Real> det_affine_coeffs(const DiagonalRay<Real>& ray) {
    return {determinant(ray.fixed_minor()), determinant(ray.at(Real(0)))};
}

/// Scale beyond which the ray is in its 1/t regime: the larger of
/// ||base||_inf and |intercept / slope|, the t at which A(t) is singular.
template <typename Real>
Real asymptotic_scale(const DiagonalRay<Real>& ray) {
    Real scale = inf_norm(ray.base());
    const auto coeffs = det_affine_coeffs(ray);
    if (coeffs.slope != Real(0)) scale = std::max(scale, std::abs(coeffs.intercept / coeffs.slope));
    return scale > Real(0) ? scale : Real(1);
}

/// t = asymptotic_scale(ray) * 10^k for k = 1..8.
template <typename Real>
std::vector<Real> default_schedule(const DiagonalRay<Real>& ray) {
    const Real scale = asymptotic_scale(ray);
    std::vector<Real> out;
    for (int k = 1; k <= 8; ++k) out.push_back(scale * std::pow(Real(10), Real(k)));
    return out;
}

template <typename Real>
void validate_schedule(const std::vector<Real>& schedule) {
    if (schedule.empty()) throw InvalidInput("schedule: empty");
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (!std::isfinite(schedule[k]) || !(schedule[k] > Real(0))) {
            throw InvalidInput("schedule: entries must be positive and finite");
        }
        if (k > 0 && !(schedule[k] > schedule[k - 1])) {
            throw InvalidInput("schedule: must be strictly increasing");
        }
    }
}

template <typename Real>
Matrix<Real> exact_minor_inverse(const DiagonalRay<Real>& ray) {
    try {
        return inverse(ray.fixed_minor());
    } catch (const SingularMatrix& e) {
        throw SingularMatrix("minor A[" + std::to_string(ray.index()) + "," +
                                 std::to_string(ray.index()) + "] is singular",
                             e.pivot());
    }
}

template <typename Real>
struct RayInverse {
    Matrix<Real> inverse;
    bool flagged;
};

/// A(t)^-1 with row and column i scaled by 1/sqrt|t| before inverting. The
/// scaled system keeps O(1) pivots however large t grows.
template <typename Real>
Matrix<Real> scaled_inverse_at(const DiagonalRay<Real>& ray, Real t) {
    const Matrix<Real> a = ray.at(t);
    Eigen::Matrix<Real, Eigen::Dynamic, 1> d = Eigen::Matrix<Real, Eigen::Dynamic, 1>::Ones(a.rows());
    if (t != Real(0)) d(ray.index() - 1) = Real(1) / std::sqrt(std::abs(t));
    const Matrix<Real> scaled = d.asDiagonal() * a * d.asDiagonal();
    return d.asDiagonal() * inverse(scaled) * d.asDiagonal();
}

/// A(t)^-1. Falls back to the scaled system when the plain factorization
/// hits the singularity threshold or its condition estimate exceeds
/// 1/(100 eps); the point is flagged in the second case. Throws
/// SingularMatrix only when the scaled system is singular as well.
template <typename Real>
RayInverse<Real> inverse_at(const DiagonalRay<Real>& ray, Real t) {
    const Matrix<Real> a = ray.at(t);
    try {
        Matrix<Real> inv = inverse(a);
        if (inf_norm(a) * inf_norm(inv) <= unreliable_condition<Real>()) return {std::move(inv), false};
    } catch (const SingularMatrix&) {
    }
    Matrix<Real> inv = scaled_inverse_at(ray, t);
    const bool flagged = !(inf_norm(a) * inf_norm(inv) <= unreliable_condition<Real>());
    return {std::move(inv), flagged};
}

/// 2 x_2t - x_t: cancels the c/t term of a first-order limit.
template <typename DerivedA, typename DerivedB>
auto richardson(const Eigen::MatrixBase<DerivedA>& x_t, const Eigen::MatrixBase<DerivedB>& x_2t) {
    if (x_t.rows() != x_2t.rows() || x_t.cols() != x_2t.cols()) {
        throw InvalidInput("richardson: dimension mismatch");
    }
    using Scalar = typename DerivedA::Scalar;
    return Matrix<Scalar>(Scalar(2) * x_2t - x_t);
}

/// First-order extrapolation for arbitrary t1 < t2; reduces to
/// richardson(x1, x2) when t2 = 2 t1.
template <typename Value, typename Real>
Value richardson_at(const Value& x1, Real t1, const Value& x2, Real t2) {
    return Value((t2 * x2 - t1 * x1) / (t2 - t1));
}

/// Least-squares slope of log(error) against log(t), negated. Uses unflagged
/// points with a positive error; needs at least three of them.
template <typename Real>
std::optional<Real> fit_rate(const std::vector<Real>& schedule, const std::vector<Real>& errors,
                             const std::vector<bool>& flagged) {
    std::vector<Real> xs;
    std::vector<Real> ys;
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (flagged[k] || !(errors[k] > Real(0))) continue;
        xs.push_back(std::log(schedule[k]));
        ys.push_back(std::log(errors[k]));
    }
    if (xs.size() < 3) return std::nullopt;
    const Real n = Real(xs.size());
    Real mx(0), my(0);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= n;
    my /= n;
    Real sxy(0), sxx(0);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxy += (xs[k] - mx) * (ys[k] - my);
        sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    if (!(sxx > Real(0))) return std::nullopt;
    return -sxy / sxx;
}

/// ||a - b||_inf
template <typename Real>
Real limit_error(const Matrix<Real>& a, const Matrix<Real>& b) {
    return inf_norm(Matrix<Real>(a - b));
}

inline double limit_error(double a, double b) { return std::abs(a - b); }

namespace detail {

// Evaluates `sample(t)` along the schedule and assembles the report against
// `target`. `sample` returns {value, flagged} and may throw SingularMatrix.
template <typename Value, typename Real, typename Sample>
LimitEstimate<Value, Real> run_limit(const std::vector<Real>& schedule, const Value& target,
                                     Sample&& sample) {
    validate_schedule(schedule);
    ConvergenceReport<Real> report;
    std::vector<Value> values;
    for (const Real t : schedule) {
        try {
            auto [value, flagged] = sample(t);
            report.schedule.push_back(t);
            report.errors.push_back(limit_error(value, target));
            report.flagged.push_back(flagged);
            values.push_back(std::move(value));
        } catch (const SingularMatrix&) {
            report.skipped.push_back(t);
        }
    }
    if (values.empty()) {
        throw ConvergenceError("limit: matrix singular at every schedule point",
                               std::numeric_limits<double>::infinity());
    }
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        const Value x = richardson_at(values[k], report.schedule[k], values[k + 1],
                                      report.schedule[k + 1]);
        report.extrapolated_errors.push_back(limit_error(x, target));
    }
    report.fitted_rate = fit_rate(report.schedule, report.errors, report.flagged);

    const std::size_t last = values.size() - 1;
    Value estimate = last == 0 ? values[0]
                               : richardson_at(values[last - 1], report.schedule[last - 1],
                                               values[last], report.schedule[last]);
    return {std::move(estimate), std::move(report)};
}

}  // namespace detail

/// Evaluates minor(A(t)^-1, i, i) along the schedule. The estimate is the
/// extrapolant of the last two evaluated points.
template <typename Real>
LimitEstimate<Matrix<Real>, Real> limit_minor_inverse(const DiagonalRay<Real>& ray,
                                                      const std::vector<Real>& schedule) {
    const Matrix<Real> target = exact_minor_inverse(ray);
    const Index i = ray.index();
    return detail::run_limit(schedule, target, [&](Real t) {
        auto [inv, flagged] = inverse_at(ray, t);
        return std::pair<Matrix<Real>, bool>(minor(inv, i, i), flagged);
    });
}

template <typename Real>
LimitEstimate<Matrix<Real>, Real> limit_minor_inverse(const DiagonalRay<Real>& ray) {
    return limit_minor_inverse(ray, default_schedule(ray));
}

/// Largest magnitude in row i and in column i of A(t)^-1, diagonal included.
template <typename Real>
RowColDecay<Real> row_col_decay(const DiagonalRay<Real>& ray, Real t) {
    const Matrix<Real> inv = inverse_at(ray, t).inverse;
    const Index r = ray.index() - 1;
    return {inv.row(r).cwiseAbs().maxCoeff(), inv.col(r).cwiseAbs().maxCoeff()};
}

/// The limit of V(t)^-1: the minor limit embedded with a zero row and column i.
template <typename Real>
Matrix<Real> assemble_limit_inverse(const DiagonalRay<Real>& ray, const Matrix<Real>& minor_limit) {
    const Index n = ray.dim();
    const Index r = ray.index() - 1;
    if (minor_limit.rows() != n - 1 || minor_limit.cols() != n - 1) {
        throw InvalidInput("assemble_limit_inverse: minor has wrong dimension");
    }
    Matrix<Real> out = Matrix<Real>::Zero(n, n);
    const Index tail = n - 1 - r;
    out.topLeftCorner(r, r) = minor_limit.topLeftCorner(r, r);
    out.topRightCorner(r, tail) = minor_limit.topRightCorner(r, tail);
    out.bottomLeftCorner(tail, r) = minor_limit.bottomLeftCorner(tail, r);
    out.bottomRightCorner(tail, tail) = minor_limit.bottomRightCorner(tail, tail);
    return out;
}

/// rho(F_[i,i] (V_[i,i])^-1), the target of spectral_limit.
template <typename Real>
Real reduced_spectral_radius(const Matrix<Real>& f, const DiagonalRay<Real>& v_ray) {
    const Index i = v_ray.index();
    return spectral_radius(Matrix<Real>(minor(f, i, i) * exact_minor_inverse(v_ray)));
}

/// Evaluates rho(F V(t)^-1) along the schedule with F held fixed, measuring
/// errors against an externally supplied `target` (a closed form, say).
template <typename Real>
LimitEstimate<Real, Real> spectral_limit_to(const Matrix<Real>& f, const DiagonalRay<Real>& v_ray,
                                            const std::vector<Real>& schedule, Real target) {
    if (f.rows() != v_ray.dim() || f.cols() != v_ray.dim()) {
        throw InvalidInput("spectral_limit: F must match the dimension of V");
    }
    require_finite(f, "spectral_limit");
    exact_minor_inverse(v_ray);  // rejects a singular minor up front
    return detail::run_limit(schedule, target, [&](Real t) {
        auto [inv, flagged] = inverse_at(v_ray, t);
        return std::pair<Real, bool>(spectral_radius(Matrix<Real>(f * inv)), flagged);
    });
}

/// Evaluates rho(F V(t)^-1) along the schedule with F held fixed.
template <typename Real>
LimitEstimate<Real, Real> spectral_limit(const Matrix<Real>& f, const DiagonalRay<Real>& v_ray,
                                         const std::vector<Real>& schedule) {
    if (f.rows() != v_ray.dim() || f.cols() != v_ray.dim()) {
        throw InvalidInput("spectral_limit: F must match the dimension of V");
    }
    return spectral_limit_to(f, v_ray, schedule, reduced_spectral_radius(f, v_ray));
}

template <typename Real>
LimitEstimate<Real, Real> spectral_limit(const Matrix<Real>& f, const DiagonalRay<Real>& v_ray) {
    return spectral_limit(f, v_ray, default_schedule(v_ray));
}

}  // namespace ngmlimit

#endif  // NGMLIMIT_MINOR_LIMIT_HPP
