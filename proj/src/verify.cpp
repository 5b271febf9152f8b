#include "ngmlimit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <cstdio>
#include <utility>

#include "ngmlimit/corpus.hpp"
#include "ngmlimit/dense.hpp"
#include "ngmlimit/minor_limit.hpp"
#include "ngmlimit/ngm.hpp"
#include "ngmlimit/relapse.hpp"
#include "ngmlimit/spectrum.hpp"

namespace ngmlimit {

namespace {

constexpr std::size_t kMaxFailuresKept = 5;

std::string fmt(const char* pattern, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, a);
    return buf;
}

std::string where(const char* corpus, std::size_t idx, Index n, Index i = 0) {
    std::string out = std::string(corpus) + " #" + std::to_string(idx) + " (n=" + std::to_string(n);
    if (i > 0) out += ", i=" + std::to_string(i);
    return out + ")";
}

double rel_err(double value, double reference) {
    return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

// Each check gets its own stream so results do not depend on suite order.
corpus::Rng stream(const VerifyOptions& opt, std::uint64_t salt) {
    std::seed_seq seq{opt.seed, salt};
    return corpus::Rng(seq);
}

// 200 matrices, n in 2..6, entries uniform in [-1, 1]; shared by the
// determinant, minor-inverse and decay checks.
std::vector<MatrixXd> theorem_corpus(const VerifyOptions& opt) {
    auto rng = stream(opt, 1);
    std::vector<MatrixXd> out;
    for (int k = 0; k < 200; ++k) {
        const Index n = corpus::uniform_index(rng, 2, 6);
        out.push_back(corpus::random_matrix(rng, n, n));
    }
    return out;
}

std::vector<double> decades_from(double scale, int first, int last) {
    std::vector<double> out;
    for (int k = first; k <= last; ++k) out.push_back(scale * std::pow(10.0, k));
    return out;
}

bool minor_nonsingular(const DiagonalRay<double>& ray) {
    try {
        exact_minor_inverse(ray);
        return true;
    } catch (const SingularMatrix&) {
        return false;
    }
}

}  // namespace

PropertyResult::PropertyResult(std::string name_, int criterion_, std::string description_,
                               std::string bound_)
    : name(std::move(name_)),
      criterion(criterion_),
      description(std::move(description_)),
      bound(std::move(bound_)) {}

void PropertyResult::observe(double value) {
    ++cases;
    if (std::isnan(value)) return;
    observed_min = std::min(observed_min, value);
    observed_max = std::max(observed_max, value);
}

void PropertyResult::fail(const std::string& where) {
    passed = false;
    if (failures.size() < kMaxFailuresKept) failures.push_back(where);
}

void PropertyResult::at_most(double value, double limit, const std::string& where) {
    observe(value);
    if (!(value <= limit)) fail(where + ": " + fmt("%.6g", value));
}

void PropertyResult::at_least(double value, double limit, const std::string& where) {
    observe(value);
    if (!(value >= limit)) fail(where + ": " + fmt("%.6g", value));
}

void PropertyResult::within(double value, double lo, double hi, const std::string& where) {
    observe(value);
    if (!(value >= lo && value <= hi)) fail(where + ": " + fmt("%.6g", value));
}

void PropertyResult::require(bool ok, const std::string& where) {
    ++cases;
    if (!ok) fail(where);
}

bool VerifyReport::all_passed() const {
    return std::all_of(properties.begin(), properties.end(),
                       [](const PropertyResult& p) { return p.passed; });
}

bool VerifyReport::criterion_passed(int criterion) const {
    bool any = false;
    for (const auto& p : properties) {
        if (p.criterion != criterion) continue;
        any = true;
        if (!p.passed) return false;
    }
    return any;
}

const PropertyResult* VerifyReport::find(const std::string& name) const {
    for (const auto& p : properties)
        if (p.name == name) return &p;
    return nullptr;
}

PropertyList check_dense_oracles(const VerifyOptions& opt) {
    PropertyResult det("determinant_vs_cofactor", 0,
                       "LU determinant agrees with recursive cofactor expansion, n = 1..8",
                       "|det - cofactor| / max(1, |cofactor|) <= 1e-10");
    PropertyResult residual("inverse_residual", 0,
                            "||A inverse(A) - I||_inf on well-conditioned matrices, n = 2..10",
                            "<= 1e-9 ||A||_inf n");
    PropertyResult product("inverse_determinant_product", 0,
                           "det(inverse(A)) det(A) = 1 on well-conditioned matrices",
                           "relative error <= 1e-8");
    auto rng = stream(opt, 100);
    for (std::size_t k = 0; k < 160; ++k) {
        const Index n = 1 + static_cast<Index>(k % 8);
        const MatrixXd a = corpus::random_matrix(rng, n, n);
        const double oracle = cofactor_det(a);
        det.at_most(std::abs(determinant(a) - oracle) / std::max(1.0, std::abs(oracle)), 1e-10,
                    where("random", k, n));
    }
    for (std::size_t k = 0; k < 90; ++k) {
        const Index n = 2 + static_cast<Index>(k % 9);
        const MatrixXd a = corpus::random_well_conditioned(rng, n);
        const MatrixXd inv = inverse(a);
        const double r = inf_norm(MatrixXd(a * inv - MatrixXd::Identity(n, n)));
        residual.at_most(r / (inf_norm(a) * double(n)), 1e-9, where("well-conditioned", k, n));
        product.at_most(std::abs(determinant(inv) * determinant(a) - 1.0), 1e-8,
                        where("well-conditioned", k, n));
    }
    return {det, residual, product};
}

PropertyList check_spectrum_oracles(const VerifyOptions& opt) {
    PropertyResult charpoly("eigenvalue_charpoly_residual", 0,
                            "|det(A - lambda I)| for every returned eigenvalue, n = 1..8",
                            "<= 1e-6 ||A||_inf^n");
    PropertyResult similarity("spectral_radius_similarity", 0,
                              "rho(P^-1 A P) = rho(A) for well-conditioned P",
                              "relative error <= 1e-7");
    PropertyResult scaling("spectral_radius_scaling", 0, "rho(cA) = |c| rho(A)",
                           "relative error <= 1e-9");
    auto rng = stream(opt, 200);
    for (std::size_t k = 0; k < 120; ++k) {
        const Index n = 1 + static_cast<Index>(k % 8);
        const MatrixXd a = corpus::random_matrix(rng, n, n);
        const Matrix<std::complex<double>> ac = a.cast<std::complex<double>>();
        const double scale = std::pow(std::max(inf_norm(a), 1e-300), double(n));
        for (const auto& lambda : eigenvalues(a).values) {
            const Matrix<std::complex<double>> shifted =
                ac - lambda * Matrix<std::complex<double>>::Identity(n, n);
            charpoly.at_most(std::abs(determinant(shifted)) / scale, 1e-6, where("random", k, n));
        }
        if (n < 2) continue;
        const MatrixXd p = corpus::random_well_conditioned(rng, n);
        const double rho = spectral_radius(a);
        similarity.at_most(rel_err(spectral_radius(MatrixXd(inverse(p) * a * p)), rho), 1e-7,
                           where("random", k, n));
        const double c = corpus::uniform(rng, -5.0, 5.0);
        scaling.at_most(rel_err(spectral_radius(MatrixXd(c * a)), std::abs(c) * rho), 1e-9,
                        where("random", k, n));
    }
    return {charpoly, similarity, scaling};
}

PropertyList check_affine_determinant(const VerifyOptions& opt) {
    PropertyResult affine("affine_determinant", 1,
                          "det A(t) = slope t + intercept at t in {-10, 0, 7, 1e3}",
                          "|det A(t) - (slope t + intercept)| / (1 + |slope t| + |intercept|) <= 1e-8");
    PropertyResult slope("affine_slope_is_minor_determinant", 1,
                         "slope equals the cofactor-expansion determinant of the (i,i) minor",
                         "relative error (floor 1) <= 1e-10");
    const auto matrices = theorem_corpus(opt);
    for (std::size_t k = 0; k < matrices.size(); ++k) {
        const MatrixXd& a = matrices[k];
        for (Index i = 1; i <= a.rows(); ++i) {
            const DiagonalRay<double> ray(a, i);
            const auto coeffs = det_affine_coeffs(ray);
            for (const double t : {-10.0, 0.0, 7.0, 1e3}) {
                const double scale = 1.0 + std::abs(coeffs.slope * t) + std::abs(coeffs.intercept);
                affine.at_most(std::abs(determinant(ray.at(t)) - coeffs(t)) / scale, 1e-8,
                               where("matrix", k, a.rows(), i));
            }
            const double oracle = cofactor_det(minor(a, i, i));
            slope.at_most(std::abs(coeffs.slope - oracle) / std::max(1.0, std::abs(oracle)), 1e-10,
                          where("matrix", k, a.rows(), i));
        }
    }
    return {affine, slope};
}

PropertyList check_minor_inverse_limit(const VerifyOptions& opt) {
    PropertyResult final_err("minor_inverse_final_error", 2,
                             "||minor(A(t)^-1) - (A_[i,i])^-1||_inf at t = 1e8 ||A||_inf, relative to ||(A_[i,i])^-1||_inf",
                             "<= 1e-6");
    PropertyResult ratio("minor_inverse_decade_ratio", 2,
                         "error(10 t) / error(t) across decades t = 1e1..1e8 ||A||_inf",
                         "in [0.05, 0.2]");
    PropertyResult gain("minor_inverse_richardson_gain", 2,
                        "raw error at 1e8 ||A||_inf / error of the extrapolant from 1e7 and 1e8 ||A||_inf",
                        ">= 10");
    PropertyResult final_asym("minor_inverse_final_error_asymptotic", 0,
                              "as minor_inverse_final_error with ||A||_inf replaced by the asymptotic scale max(||A||_inf, |det A(0) / det A_[i,i]|)",
                              "<= 1e-6");
    PropertyResult ratio_asym("minor_inverse_decade_ratio_asymptotic", 0,
                              "error(10 t) / error(t) across the decades of the default schedule (asymptotic scale)",
                              "in [0.05, 0.2]");
    PropertyResult gain_asym("minor_inverse_richardson_gain_asymptotic", 0,
                             "final raw error / extrapolated error on the default schedule",
                             ">= 10");
    PropertyResult rate("minor_inverse_fitted_rate", 0,
                        "least-squares exponent p of error ~ C / t^p on the default schedule",
                        "in [0.8, 1.2]");
    PropertyResult bound("minor_inverse_c_over_t", 0,
                         "t error(t) / C with C = t0 error(t0) at the first default schedule point",
                         "<= 2");
    const auto matrices = theorem_corpus(opt);
    for (std::size_t k = 0; k < matrices.size(); ++k) {
        const MatrixXd& a = matrices[k];
        for (Index i = 1; i <= a.rows(); ++i) {
            const DiagonalRay<double> ray(a, i);
            if (!minor_nonsingular(ray)) continue;
            const std::string at = where("matrix", k, a.rows(), i);
            const double scale = inf_norm(exact_minor_inverse(ray));

            const auto literal = limit_minor_inverse(ray, decades_from(inf_norm(a), 1, 8)).report;
            const auto asym = limit_minor_inverse(ray, default_schedule(ray)).report;
            for (const auto* rep : {&literal, &asym}) {
                const bool is_literal = rep == &literal;
                (is_literal ? final_err : final_asym).at_most(rep->final_error() / scale, 1e-6, at);
                for (std::size_t s = 0; s + 1 < rep->size(); ++s) {
                    (is_literal ? ratio : ratio_asym)
                        .within(rep->errors[s + 1] / rep->errors[s], 0.05, 0.2,
                                at + " t=" + fmt("%.3g", rep->schedule[s]));
                }
                // Floor at rounding level so an exact extrapolant does not divide by zero.
                const double extrapolated = std::max(rep->final_extrapolated_error(),
                                                     std::numeric_limits<double>::epsilon() * scale);
                (is_literal ? gain : gain_asym).at_least(rep->final_error() / extrapolated, 10.0, at);
            }
            rate.within(asym.fitted_rate.value_or(std::nan("")), 0.8, 1.2, at);
            const double c = asym.errors.front() * asym.schedule.front();
            for (std::size_t s = 0; s < asym.size(); ++s) {
                bound.at_most(asym.errors[s] * asym.schedule[s] / c, 2.0,
                              at + " t=" + fmt("%.3g", asym.schedule[s]));
            }
        }
    }
    return {final_err, ratio, gain, final_asym, ratio_asym, gain_asym, rate, bound};
}

namespace {

void check_decay_from(const DiagonalRay<double>& ray, const std::vector<double>& schedule,
                      const std::string& at, PropertyResult& row, PropertyResult& col) {
    const auto first = row_col_decay(ray, schedule.front());
    const double c_row = first.row_max * schedule.front();
    const double c_col = first.col_max * schedule.front();
    for (const double t : schedule) {
        const auto d = row_col_decay(ray, t);
        const std::string where_t = at + " t=" + fmt("%.3g", t);
        row.at_most(d.row_max * t / c_row, 2.0, where_t);
        col.at_most(d.col_max * t / c_col, 2.0, where_t);
    }
}

}  // namespace

PropertyList check_row_col_decay(const VerifyOptions& opt) {
    PropertyResult row("row_decay", 3,
                       "t max_k |(A(t)^-1)_ik| / C, C fitted at t0 = 1e2 ||A||_inf, t = 1e2..1e8 ||A||_inf",
                       "<= 2");
    PropertyResult col("col_decay", 3,
                       "t max_k |(A(t)^-1)_ki| / C, C fitted at t0 = 1e2 ||A||_inf, t = 1e2..1e8 ||A||_inf",
                       "<= 2");
    PropertyResult row_asym("row_decay_asymptotic", 0,
                            "as row_decay with ||A||_inf replaced by the asymptotic scale max(||A||_inf, |det A(0) / det A_[i,i]|)",
                            "<= 2");
    PropertyResult col_asym("col_decay_asymptotic", 0,
                            "as col_decay with ||A||_inf replaced by the asymptotic scale max(||A||_inf, |det A(0) / det A_[i,i]|)",
                            "<= 2");
    const auto matrices = theorem_corpus(opt);
    for (std::size_t k = 0; k < matrices.size(); ++k) {
        const MatrixXd& a = matrices[k];
        for (Index i = 1; i <= a.rows(); ++i) {
            const DiagonalRay<double> ray(a, i);
            if (!minor_nonsingular(ray)) continue;
            const std::string at = where("matrix", k, a.rows(), i);
            check_decay_from(ray, decades_from(inf_norm(a), 2, 8), at, row, col);
            check_decay_from(ray, decades_from(asymptotic_scale(ray), 2, 8), at, row_asym, col_asym);
        }
    }
    return {row, col, row_asym, col_asym};
}

PropertyList check_spectral_limit(const VerifyOptions& opt) {
    PropertyResult final_err("spectral_limit_final_error", 4,
                             "|rho(F V(t)^-1) - rho(F_[i,i] V_[i,i]^-1)| at t = 1e8 ||V||_inf; F >= 0, V an M-matrix, n = 2..8",
                             "<= 1e-6");
    PropertyResult spectrum("spectral_limit_spectrum_identity", 4,
                            "spectrum of F lim V(t)^-1 equals {0} union spectrum of F_[i,i] V_[i,i]^-1 as multisets",
                            "optimal-matching distance <= 1e-6");
    auto rng = stream(opt, 4);
    for (std::size_t k = 0; k < 100; ++k) {
        const Index n = corpus::uniform_index(rng, 2, 8);
        const MatrixXd f = corpus::random_matrix(rng, n, n, 0.0, 1.0);
        const MatrixXd v = corpus::random_m_matrix(rng, n);
        const Index i = corpus::uniform_index(rng, 1, n);
        const std::string at = where("pair", k, n, i);
        const DiagonalRay<double> ray(v, i);

        const auto limit = spectral_limit(f, ray, default_schedule(ray));
        final_err.at_most(limit.report.final_error(), 1e-6, at);

        const MatrixXd minor_limit = limit_minor_inverse(ray, default_schedule(ray)).estimate;
        const MatrixXd assembled = assemble_limit_inverse(ray, minor_limit);
        auto lhs = eigenvalues(MatrixXd(f * assembled)).values;
        auto rhs = eigenvalues(MatrixXd(minor(f, i, i) * exact_minor_inverse(ray))).values;
        rhs.emplace_back(0.0, 0.0);
        spectrum.at_most(multiset_distance(lhs, rhs), 1e-6, at);
    }
    return {final_err, spectrum};
}

PropertyList check_closed_form_ngm(const VerifyOptions& opt) {
    PropertyResult agree("closed_form_vs_ngm", 5,
                         "rho(F V^-1) of the uncoupled relapse pair against the closed-form R0, j = 1..6, 500 draws each",
                         "relative error <= 1e-10");
    auto rng = stream(opt, 5);
    for (Index j = 1; j <= 6; ++j) {
        for (std::size_t k = 0; k < 500; ++k) {
            const auto host = corpus::random_host(rng, j);
            const auto vec = corpus::random_vector(rng);
            const double spectral = r0(build_uncoupled_ngm(host, vec, j));
            const double closed = r0_uncoupled_closed(host, vec, j).value;
            agree.at_most(rel_err(spectral, closed), 1e-10, where("draw", k, j + 1));
        }
    }
    return {agree};
}

PropertyList check_coupling(const VerifyOptions& opt) {
    PropertyResult equal("coupling_pythagorean", 6,
                         "r0(coupled(j, j))^2 = R0_1^2 + R0_2^2 for j = 1..5",
                         "relative error <= 1e-10");
    PropertyResult mixed("coupling_mixed", 6,
                         "r0(coupled(k, j)) = sqrt(R0_{1,k}^2 + R0_{2,j}^2) for k, j = 1..5",
                         "relative error <= 1e-10");
    auto rng = stream(opt, 6);
    auto faulty_r0 = [&](const NGMPair& pair) {
        if (opt.coupled_fault == 0.0) return r0(pair);
        return r0(NGMPair(pair.F() * (1.0 + opt.coupled_fault), pair.V(), pair.labels()));
    };
    for (Index k = 1; k <= 5; ++k) {
        for (Index j = 1; j <= 5; ++j) {
            for (std::size_t d = 0; d < 20; ++d) {
                const auto h1 = corpus::random_host(rng, k);
                const auto h2 = corpus::random_host(rng, j);
                const auto vec = corpus::random_vector(rng);
                const double spectral = faulty_r0(build_coupled_ngm(h1, h2, vec, k, j));
                const double r1 = r0_uncoupled_closed(h1, vec, k).value;
                const double r2 = r0_uncoupled_closed(h2, vec, j).value;
                const std::string at = "draw #" + std::to_string(d) + " (k=" + std::to_string(k) +
                                       ", j=" + std::to_string(j) + ")";
                if (k == j) equal.at_most(rel_err(spectral * spectral, r1 * r1 + r2 * r2), 1e-10, at);
                mixed.at_most(rel_err(spectral, std::sqrt(r1 * r1 + r2 * r2)), 1e-10, at);
            }
        }
    }
    return {equal, mixed};
}

PropertyList check_relapse_limit_chain(const VerifyOptions& opt) {
    PropertyResult main_step("relapse_limit_extrapolated", 7,
                             "alpha_{1,j} -> inf limit of R0^{j,j} against closed-form R0^{j-1,j}, j = 2..4; extrapolated error of the last two schedule points",
                             "<= 1e-8");
    PropertyResult raw("relapse_limit_raw", 7,
                       "raw error at the final schedule point t = 1e8 ||V||_inf", "<= 1e-6");
    PropertyResult rate("relapse_limit_fitted_rate", 7,
                        "least-squares exponent of the raw error", "in [0.8, 1.2]");
    PropertyResult chain("relapse_iterated_removal", 7,
                         "repeated removal j -> j-1 -> ... -> 1 reproduces R0^{k,j} at every step, j <= 4",
                         "extrapolated error <= 1e-8");
    PropertyResult exact("relapse_exact_removal", 7,
                         "r0 of the pair with the stage removed outright against closed-form R0^{k,j}",
                         "relative error <= 1e-10");
    auto rng = stream(opt, 7);
    for (Index j = 2; j <= 4; ++j) {
        for (std::size_t d = 0; d < 20; ++d) {
            const auto h1 = corpus::random_host(rng, j);
            const auto h2 = corpus::random_host(rng, j);
            const auto vec = corpus::random_vector(rng);
            const auto report = relapse_limit_experiment(h1, h2, vec, j, {}, Index{1});
            const std::string at = where("draw", d, j);
            const auto& first = report.steps.front();
            main_step.at_most(first.final_extrapolated_error(), 1e-8, at);
            raw.at_most(first.final_raw_error(), 1e-6, at);
            rate.within(first.report.fitted_rate.value_or(std::nan("")), 0.8, 1.2, at);
            for (const auto& step : report.steps) {
                const std::string st = at + " step " + std::to_string(step.stages_before);
                chain.at_most(step.final_extrapolated_error(), 1e-8, st);
                exact.at_most(rel_err(step.exact_removal, step.closed_form), 1e-10, st);
            }
        }
    }
    return {main_step, raw, rate, chain, exact};
}

PropertyList check_threshold_consistency(const VerifyOptions& opt) {
    PropertyResult consistent("threshold_consistency", 8,
                              "sign(R0 - 1) = sign(spectral abscissa of F - V) on relapse pairs with R0 in (0.2, 5)",
                              "consistent in every case (|x| < 1e-8 counts as zero)");
    PropertyResult span("threshold_r0_span", 8, "R0 values drawn for the consistency check",
                        "in (0.2, 5)");
    auto rng = stream(opt, 8);
    for (std::size_t d = 0; d < 200; ++d) {
        const bool coupled = d % 2 == 1;
        const Index j = corpus::uniform_index(rng, 1, 5);
        const Index k = corpus::uniform_index(rng, 1, 5);
        const auto h1 = corpus::random_host(rng, j);
        const auto h2 = corpus::random_host(rng, k);
        auto vec = corpus::random_vector(rng);
        const double target = std::exp(corpus::uniform(rng, std::log(0.2), std::log(5.0)));
        // R0 is proportional to the biting rate.
        const double base = coupled ? r0_coupled_closed(h1, h2, vec, j, k).value
                                    : r0_uncoupled_closed(h1, vec, j).value;
        vec.f *= target / base;
        const NGMPair pair = coupled ? build_coupled_ngm(h1, h2, vec, j, k)
                                     : build_uncoupled_ngm(h1, vec, j);
        const auto check = dfe_threshold_check(pair);
        const std::string at = where(coupled ? "coupled" : "uncoupled", d, pair.dim());
        consistent.require(check.consistent, at + " r0=" + fmt("%.6g", check.r0) +
                                                 " abscissa=" + fmt("%.6g", check.abscissa));
        span.within(check.r0, 0.2, 5.0, at);
    }
    return {consistent, span};
}

VerifyReport run_verify(const VerifyOptions& opt) {
    VerifyReport report;
    report.seed = opt.seed;
    using Check = PropertyList (*)(const VerifyOptions&);
    const Check checks[] = {check_dense_oracles,       check_spectrum_oracles,
                            check_affine_determinant,  check_minor_inverse_limit,
                            check_row_col_decay,       check_spectral_limit,
                            check_closed_form_ngm,     check_coupling,
                            check_relapse_limit_chain, check_threshold_consistency};
    for (const Check check : checks) {
        try {
            for (auto& p : check(opt)) report.properties.push_back(std::move(p));
        } catch (const std::exception& e) {
            PropertyResult broken("check_aborted", -1, "a property check threw", "no exception");
            broken.require(false, e.what());
            report.properties.push_back(std::move(broken));
        }
    }
    return report;
}

}  // namespace ngmlimit
