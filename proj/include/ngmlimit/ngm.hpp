#ifndef NGMLIMIT_NGM_HPP
#define NGMLIMIT_NGM_HPP

#include <string>
#include <vector>

#include "ngmlimit/dense.hpp"
#include "ngmlimit/minor_limit.hpp"

namespace ngmlimit {

/// Jacobian blocks at a disease-free equilibrium: F carries new infections,
/// V the transfers between infected compartments.
///
/// Construction rejects mismatched dimensions, non-finite entries, negative
/// entries of F and a singular V. A V whose inverse has negative entries is
/// accepted but reported through `warnings()`.
class NGMPair {
public:
    NGMPair(MatrixXd f, MatrixXd v, std::vector<std::string> labels);

    const MatrixXd& F() const { return f_; }
    const MatrixXd& V() const { return v_; }
    const std::vector<std::string>& labels() const { return labels_; }
    Index dim() const { return f_.rows(); }
    const std::vector<std::string>& warnings() const { return warnings_; }

    /// F V^-1.
    MatrixXd next_generation() const;

private:
    MatrixXd f_;
    MatrixXd v_;
    std::vector<std::string> labels_;
    std::vector<std::string> warnings_;
};

/// rho(F V^-1).
double r0(const NGMPair& pair);

/// Drops compartment `i` (1-based) from F, V and the labels.
NGMPair remove_compartment(const NGMPair& pair, Index i);

/// Values within this of their threshold count as zero in the sign test.
inline constexpr double kThresholdTolerance = 1e-8;

struct ThresholdReport {
    double r0;
    double abscissa;  ///< spectral abscissa of F - V
    bool consistent;
    bool critical;  ///< both quantities sit on their thresholds
};

/// Checks that R0 - 1 and the spectral abscissa of F - V share a sign.
ThresholdReport dfe_threshold_check(const NGMPair& pair);

/// Drives V's diagonal entry (i, i) to infinity along the schedule and
/// tracks rho(F V(t)^-1) against r0(remove_compartment(pair, i)).
LimitEstimate<double, double> r0_removal_limit(const NGMPair& pair, Index i,
                                               const std::vector<double>& schedule);
LimitEstimate<double, double> r0_removal_limit(const NGMPair& pair, Index i);

}  // namespace ngmlimit

#endif  // NGMLIMIT_NGM_HPP
