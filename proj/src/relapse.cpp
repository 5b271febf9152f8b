#include "ngmlimit/relapse.hpp"

#include <cmath>
#include <string>

namespace ngmlimit {

namespace {

void require_positive(double x, const std::string& name) {
    if (!std::isfinite(x) || !(x > 0.0)) {
        throw InvalidInput(name + " must be positive and finite, got " + std::to_string(x));
    }
}

void require_stages(const HostParams& host, Index j, const char* who, Index min_stages = 1) {
    if (j < min_stages || j > host.stages()) {
        throw InvalidInput(std::string(who) + ": " + std::to_string(j) +
                           " stages requested, host provides " + std::to_string(host.stages()));
    }
}

// Places one host species' stage chain at offset `first` of an m x m pair.
void place_host(MatrixXd& f, MatrixXd& v, const HostParams& host, const VectorParams& vec,
                Index first, Index stages) {
    const Index vector_row = f.rows() - 1;
    for (Index l = 0; l < stages; ++l) {
        const auto k = static_cast<std::size_t>(l);
        v(first + l, first + l) = host.alpha[k + 1] + host.mu[k];
        if (l > 0) v(first + l, first + l - 1) = -host.alpha[k];
        f(vector_row, first + l) = vec.f * vec.c_v * vec.S_v_bar / host.S_bar;
    }
    f(first, vector_row) = vec.f * host.c * host.alpha[0];
}

}  // namespace

void HostParams::validate() const {
    require_positive(c, "host c");
    require_positive(S_bar, "host S_bar");
    if (mu.empty()) throw InvalidInput("host: at least one stage required");
    if (alpha.size() != mu.size() + 1) {
        throw InvalidInput("host: alpha has " + std::to_string(alpha.size()) +
                           " entries, expected mu length + 1 = " + std::to_string(mu.size() + 1));
    }
    for (std::size_t k = 0; k < alpha.size(); ++k) require_positive(alpha[k], "host alpha[" + std::to_string(k) + "]");
    for (std::size_t k = 0; k < mu.size(); ++k) require_positive(mu[k], "host mu[" + std::to_string(k + 1) + "]");
}

void VectorParams::validate() const {
    require_positive(f, "vector f");
    require_positive(c_v, "vector c_v");
    require_positive(S_v_bar, "vector S_v_bar");
    require_positive(mu_tilde, "vector mu_tilde");
}

const char* to_string(R0Method m) {
    switch (m) {
        case R0Method::closed_form: return "closed_form";
        case R0Method::spectral: return "spectral";
        case R0Method::limit: return "limit";
    }
    return "unknown";
}

double stage_chain_sum(const HostParams& host, Index j) {
    host.validate();
    require_stages(host, j, "stage_chain_sum");
    double sum = 0.0;
    double product = 1.0;
    for (Index l = 1; l <= j; ++l) {
        const auto k = static_cast<std::size_t>(l);
        product *= host.alpha[k - 1] / (host.alpha[k] + host.mu[k - 1]);
        sum += product;
    }
    return sum;
}

R0Result r0_uncoupled_closed(const HostParams& host, const VectorParams& vec, Index j) {
    vec.validate();
    const double weight = host.c * vec.c_v * vec.S_v_bar / (vec.mu_tilde * host.S_bar);
    return {vec.f * std::sqrt(weight * stage_chain_sum(host, j)), R0Method::closed_form,
            std::nullopt};
}

R0Result r0_coupled_closed(const HostParams& host1, const HostParams& host2,
                           const VectorParams& vec, Index stages1, Index stages2) {
    if (stages1 == 0 && stages2 == 0) throw InvalidInput("r0_coupled_closed: no host stages");
    const double r1 = stages1 == 0 ? 0.0 : r0_uncoupled_closed(host1, vec, stages1).value;
    const double r2 = stages2 == 0 ? 0.0 : r0_uncoupled_closed(host2, vec, stages2).value;
    return {std::hypot(r1, r2), R0Method::closed_form, std::nullopt};
}

NGMPair build_uncoupled_ngm(const HostParams& host, const VectorParams& vec, Index j) {
    host.validate();
    vec.validate();
    require_stages(host, j, "build_uncoupled_ngm");
    const Index m = j + 1;
    MatrixXd f = MatrixXd::Zero(m, m);
    MatrixXd v = MatrixXd::Zero(m, m);
    place_host(f, v, host, vec, 0, j);
    v(m - 1, m - 1) = vec.mu_tilde;

    std::vector<std::string> labels;
    for (Index l = 1; l <= j; ++l) labels.push_back("I" + std::to_string(l));
    labels.push_back("Iv");
    return NGMPair(std::move(f), std::move(v), std::move(labels));
}

NGMPair build_coupled_ngm(const HostParams& host1, const HostParams& host2,
                          const VectorParams& vec, Index stages1, Index stages2) {
    host1.validate();
    host2.validate();
    vec.validate();
    require_stages(host1, stages1, "build_coupled_ngm (species 1)");
    require_stages(host2, stages2, "build_coupled_ngm (species 2)");
    const Index m = stages1 + stages2 + 1;
    MatrixXd f = MatrixXd::Zero(m, m);
    MatrixXd v = MatrixXd::Zero(m, m);
    place_host(f, v, host1, vec, 0, stages1);
    place_host(f, v, host2, vec, stages1, stages2);
    v(m - 1, m - 1) = vec.mu_tilde;

    std::vector<std::string> labels;
    for (Index l = 1; l <= stages1; ++l) labels.push_back("H1_I" + std::to_string(l));
    for (Index l = 1; l <= stages2; ++l) labels.push_back("H2_I" + std::to_string(l));
    labels.push_back("Iv");
    return NGMPair(std::move(f), std::move(v), std::move(labels));
}

R0Result r0_spectral(const NGMPair& pair) { return {r0(pair), R0Method::spectral, std::nullopt}; }

double RemovalStep::estimate_error() const { return std::abs(estimate - closed_form); }

double RemovalStep::final_raw_error() const { return report.final_error(); }

double RemovalStep::final_extrapolated_error() const { return report.final_extrapolated_error(); }

RelapseLimitReport relapse_limit_experiment(const HostParams& host1, const HostParams& host2,
                                            const VectorParams& vec, Index j,
                                            const std::vector<double>& schedule,
                                            std::optional<Index> stop_at) {
    if (j < 2) {
        throw InvalidInput("relapse_limit_experiment: j >= 2 required, removing the only "
                           "species-1 stage would empty its chain");
    }
    const Index last = stop_at.value_or(j - 1);
    if (last < 1 || last >= j) {
        throw InvalidInput("relapse_limit_experiment: stop_at must lie in [1, j - 1]");
    }

    RelapseLimitReport out{j, {}};
    NGMPair pair = build_coupled_ngm(host1, host2, vec, j, j);
    for (Index s = j; s > last; --s) {
        // Species-1 stage s sits at index s; its V diagonal is alpha_{1,s} + mu_{1,s}.
        const double closed = r0_coupled_closed(host1, host2, vec, s - 1, j).value;
        const DiagonalRay<double> ray(pair.V(), s);
        auto limit = spectral_limit_to(pair.F(), ray,
                                       schedule.empty() ? default_schedule(ray) : schedule,
                                       closed);
        NGMPair reduced = remove_compartment(pair, s);
        RemovalStep step{s, closed, r0(reduced), limit.estimate, std::move(limit.report)};
        out.steps.push_back(std::move(step));
        pair = std::move(reduced);
    }
    return out;
}

}  // namespace ngmlimit
