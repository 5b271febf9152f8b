#ifndef NGMLIMIT_RELAPSE_HPP
#define NGMLIMIT_RELAPSE_HPP

// Relapsing vector-borne disease models: a host species passes through a
// chain of j infected stages (j - 1 relapses) and infects one vector species.
//
// Compartment order for the next-generation matrices built here:
//   uncoupled:  I_1 .. I_j, I_v
//   coupled:    species-1 stages, species-2 stages, I_v
//
// V is the lower-bidiagonal stage chain: diagonal alpha_l + mu_l, subdiagonal
// -alpha_{l-1}, and mu_tilde for the vector. F has the vector-to-host inflow
// f c alpha_0 into the first stage of each host species and the host-to-vector
// weight f c_v Sv / S from every host stage.

#include <optional>
#include <vector>

#include "ngmlimit/minor_limit.hpp"
#include "ngmlimit/ngm.hpp"

namespace ngmlimit {

struct HostParams {
    double c = 0.0;                ///< competence / contact weight
    double S_bar = 0.0;            ///< equilibrium susceptible density
    std::vector<double> alpha;     ///< alpha_0 .. alpha_j, stage exit rates
    std::vector<double> mu;        ///< mu_1 .. mu_j, stage removal rates

    Index stages() const { return static_cast<Index>(mu.size()); }
    void validate() const;
};

struct VectorParams {
    double f = 0.0;         ///< biting rate
    double c_v = 0.0;       ///< vector competence
    double S_v_bar = 0.0;   ///< equilibrium susceptible vector density
    double mu_tilde = 0.0;  ///< vector mortality

    void validate() const;
};

enum class R0Method { closed_form, spectral, limit };

const char* to_string(R0Method m);

struct R0Result {
    double value = 0.0;
    R0Method method = R0Method::closed_form;
    std::optional<ConvergenceReport<double>> detail;
};

/// sum_{k=1}^{j} prod_{l=1}^{k} alpha_{l-1} / (alpha_l + mu_l)
double stage_chain_sum(const HostParams& host, Index j);

/// R_{0,i,j} for one host species with j stages. j may be smaller than the
/// number of stages the host carries; the leading j are used.
R0Result r0_uncoupled_closed(const HostParams& host, const VectorParams& vec, Index j);

/// sqrt(R_{0,1,stages1}^2 + R_{0,2,stages2}^2). A zero stage count drops
/// that species.
R0Result r0_coupled_closed(const HostParams& host1, const HostParams& host2,
                           const VectorParams& vec, Index stages1, Index stages2);

NGMPair build_uncoupled_ngm(const HostParams& host, const VectorParams& vec, Index j);

NGMPair build_coupled_ngm(const HostParams& host1, const HostParams& host2,
                          const VectorParams& vec, Index stages1, Index stages2);

/// R0 of the built pair via rho(F V^-1).
R0Result r0_spectral(const NGMPair& pair);

struct RemovalStep {
    Index stages_before;  ///< species-1 stages in the pair the limit acts on
    double closed_form;   ///< R0^{stages_before - 1, j}
    double exact_removal; ///< r0 of the pair with the stage removed outright
    double estimate;      ///< extrapolated limit
    ConvergenceReport<double> report;

    double estimate_error() const;
    double final_raw_error() const;
    double final_extrapolated_error() const;
};

struct RelapseLimitReport {
    Index j;
    std::vector<RemovalStep> steps;
};

/// Builds the (j, j) coupled pair and removes species-1 stages j, j-1, ...,
/// down to `stop_at` stages through the alpha_{1,s} -> inf limit, checking
/// each step against the closed form R0^{s-1, j}. An empty schedule selects
/// the default geometric schedule of each step's V. `stop_at` defaults to
/// j - 1 (a single removal).
RelapseLimitReport relapse_limit_experiment(const HostParams& host1, const HostParams& host2,
                                            const VectorParams& vec, Index j,
                                            const std::vector<double>& schedule = {},
                                            std::optional<Index> stop_at = std::nullopt);

}  // namespace ngmlimit

#endif  // NGMLIMIT_RELAPSE_HPP
