// ngmlimit: command-line driver.
//
//   ngmlimit verify [--seed N] [--out PATH]
//   ngmlimit r0     --config PATH
//   ngmlimit sweep  --config PATH [--schedule "t1,t2,..."] [--format csv|json]
//   ngmlimit ngm    --config PATH
//
// Exit codes: 0 success, 1 property failure, 2 config error, 3 numerical error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "ngmlimit/config.hpp"
#include "ngmlimit/minor_limit.hpp"
#include "ngmlimit/ngm.hpp"
#include "ngmlimit/relapse.hpp"
#include "ngmlimit/verify.hpp"

namespace {

using namespace ngmlimit;

enum ExitCode : int { kOk = 0, kPropertyFailure = 1, kConfigError = 2, kNumericalError = 3 };

struct Options {
    std::string config;
    std::uint64_t seed = 42;
    std::string schedule;
    std::string out;
    std::string format;
    double inject_fault = 0.0;
};

void emit(const Options& opt, const std::string& text) {
    if (opt.out.empty() || opt.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream file(opt.out);
    if (!file) throw ConfigError("--out", "cannot write " + opt.out);
    file << text;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

int cmd_verify(const Options& opt) {
    VerifyOptions vopt;
    vopt.seed = opt.seed;
    vopt.coupled_fault = opt.inject_fault;
    const VerifyReport report = run_verify(vopt);
    emit(opt, dump(to_json(report)));
    for (const auto& p : report.properties) {
        if (!p.passed) std::cerr << "FAILED " << p.name << "\n";
    }
    return report.all_passed() ? kOk : kPropertyFailure;
}

int cmd_r0(const Options& opt) {
    const ModelConfig cfg = parse_model(load_json(opt.config));
    const NGMPair pair = build_pair(cfg);
    const double spectral = r0(pair);
    const auto closed = closed_form_r0(cfg);
    json out;
    out["spectral"] = spectral;
    out["closed_form"] = closed ? json(*closed) : json(nullptr);
    out["relative_gap"] =
        closed ? json(std::abs(spectral - *closed) / std::max(std::abs(*closed), 1e-300)) : json(nullptr);
    out["labels"] = pair.labels();
    out["warnings"] = pair.warnings();
    emit(opt, dump(out));
    return kOk;
}

int cmd_sweep(const Options& opt) {
    SweepConfig cfg = parse_sweep(load_json(opt.config));
    if (!opt.schedule.empty()) cfg.schedule = parse_schedule(opt.schedule);

    ConvergenceReport<double> report;
    json extra;
    switch (cfg.kind) {
        case SweepKind::matrix: {
            const DiagonalRay<double> ray(cfg.matrix, cfg.index);
            auto result = cfg.schedule.empty() ? limit_minor_inverse(ray)
                                               : limit_minor_inverse(ray, cfg.schedule);
            extra["estimate"] = to_json(result.estimate);
            extra["target"] = to_json(exact_minor_inverse(ray));
            report = std::move(result.report);
            break;
        }
        case SweepKind::spectral: {
            const DiagonalRay<double> ray(cfg.matrix, cfg.index);
            auto result = cfg.schedule.empty() ? spectral_limit(cfg.f, ray)
                                               : spectral_limit(cfg.f, ray, cfg.schedule);
            extra["estimate"] = result.estimate;
            extra["target"] = reduced_spectral_radius(cfg.f, ray);
            report = std::move(result.report);
            break;
        }
        case SweepKind::relapse: {
            auto result = relapse_limit_experiment(cfg.model.host1, cfg.model.host2, cfg.model.vector,
                                                   cfg.index, cfg.schedule);
            auto& step = result.steps.front();
            extra["estimate"] = step.estimate;
            extra["target"] = step.closed_form;
            report = std::move(step.report);
            break;
        }
    }

    const std::string format = opt.format.empty() ? "csv" : opt.format;
    if (format == "csv") {
        emit(opt, sweep_csv(report));
    } else {
        json out = to_json(report);
        out["estimate"] = extra["estimate"];
        out["target"] = extra["target"];
        emit(opt, dump(out));
    }
    return kOk;
}

int cmd_ngm(const Options& opt) {
    const ModelConfig cfg = parse_model(load_json(opt.config));
    emit(opt, dump(ngm_dump(build_pair(cfg))));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Limit-based minor inverses and R0 of relapsing vector-borne disease models"};
    app.require_subcommand(1);
    Options opt;

    auto* verify = app.add_subcommand("verify", "run the property suite and print a JSON report");
    verify->add_option("--seed", opt.seed, "corpus seed")->capture_default_str();
    verify->add_option("--out", opt.out, "write the report here instead of stdout");
    verify->add_option("--inject-fault", opt.inject_fault,
                       "relative perturbation of coupled F blocks (exercises the failure path)")
        ->group("");

    auto* r0_cmd = app.add_subcommand("r0", "closed-form and spectral R0 of a model");
    auto* sweep = app.add_subcommand("sweep", "error along a limit schedule");
    auto* ngm = app.add_subcommand("ngm", "dump F, V, F V^-1 and its eigenvalues");
    for (auto* sub : {r0_cmd, sweep, ngm}) {
        sub->add_option("--config", opt.config, "JSON config path, '-' for stdin")->required();
        sub->add_option("--out", opt.out, "write output here instead of stdout");
        sub->add_option("--seed", opt.seed, "unused; accepted for uniformity");
    }
    sweep->add_option("--schedule", opt.schedule, "comma-separated increasing t values");
    sweep->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (verify->parsed()) return cmd_verify(opt);
        if (r0_cmd->parsed()) return cmd_r0(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
        if (ngm->parsed()) return cmd_ngm(opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const SingularMatrix& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const InvalidInput& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    return kConfigError;
}
