#include "ngmlimit/ngm.hpp"

#include <cmath>
#include <utility>

#include "ngmlimit/spectrum.hpp"

namespace ngmlimit {

namespace {

int threshold_sign(double x) {
    if (std::abs(x) < kThresholdTolerance) return 0;
    return x > 0 ? 1 : -1;
}

}  // namespace

NGMPair::NGMPair(MatrixXd f, MatrixXd v, std::vector<std::string> labels)
    : f_(std::move(f)), v_(std::move(v)), labels_(std::move(labels)) {
    detail::require_square(f_, "NGMPair F");
    detail::require_square(v_, "NGMPair V");
    if (f_.rows() != v_.rows()) throw InvalidInput("NGMPair: F and V differ in dimension");
    if (static_cast<Index>(labels_.size()) != f_.rows()) {
        throw InvalidInput("NGMPair: " + std::to_string(labels_.size()) + " labels for " +
                           std::to_string(f_.rows()) + " compartments");
    }
    require_finite(f_, "NGMPair F");
    require_finite(v_, "NGMPair V");
    if ((f_.array() < 0.0).any()) throw InvalidInput("NGMPair: F has a negative entry");

    const MatrixXd v_inv = inverse(v_);
    if (v_inv.minCoeff() < -1e-10) {
        warnings_.push_back("V is not an M-matrix: V^-1 has entry " +
                            std::to_string(v_inv.minCoeff()));
    }
}

MatrixXd NGMPair::next_generation() const { return f_ * inverse(v_); }

double r0(const NGMPair& pair) { return spectral_radius(pair.next_generation()); }

NGMPair remove_compartment(const NGMPair& pair, Index i) {
    if (pair.dim() < 2) throw InvalidInput("remove_compartment: pair has a single compartment");
    detail::require_index(i, pair.dim(), "remove_compartment");
    std::vector<std::string> labels = pair.labels();
    labels.erase(labels.begin() + (i - 1));
    return NGMPair(minor(pair.F(), i, i), minor(pair.V(), i, i), std::move(labels));
}

ThresholdReport dfe_threshold_check(const NGMPair& pair) {
    ThresholdReport out{};
    out.r0 = r0(pair);
    out.abscissa = spectral_abscissa(MatrixXd(pair.F() - pair.V()));
    const int lhs = threshold_sign(out.r0 - 1.0);
    const int rhs = threshold_sign(out.abscissa);
    out.consistent = lhs == rhs;
    out.critical = lhs == 0 && rhs == 0;
    return out;
}

LimitEstimate<double, double> r0_removal_limit(const NGMPair& pair, Index i,
                                               const std::vector<double>& schedule) {
    const DiagonalRay<double> ray(pair.V(), i);
    return spectral_limit(pair.F(), ray, schedule);
}

LimitEstimate<double, double> r0_removal_limit(const NGMPair& pair, Index i) {
    return r0_removal_limit(pair, i, default_schedule(DiagonalRay<double>(pair.V(), i)));
}

}  // namespace ngmlimit
