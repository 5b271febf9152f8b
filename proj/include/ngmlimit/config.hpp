#ifndef NGMLIMIT_CONFIG_HPP
#define NGMLIMIT_CONFIG_HPP

// JSON run configurations and report serialization for the CLI.
// The schema is documented in docs/config.md.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ngmlimit/minor_limit.hpp"
#include "ngmlimit/ngm.hpp"
#include "ngmlimit/relapse.hpp"
#include "ngmlimit/verify.hpp"

namespace ngmlimit {

using json = nlohmann::json;

/// Schema violation; the message starts with the offending field path.
class ConfigError : public InvalidInput {
public:
    ConfigError(const std::string& field, const std::string& what)
        : InvalidInput(field + ": " + what), field_(field) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Reads a JSON document from `path`, or from stdin when `path` is "-".
json load_json(const std::string& path);

/// "t1,t2,..." as a strictly increasing positive schedule.
std::vector<double> parse_schedule(const std::string& text);

enum class ModelMode { uncoupled, coupled, pair };

struct ModelConfig {
    ModelMode mode = ModelMode::uncoupled;
    HostParams host1;
    HostParams host2;
    VectorParams vector;
    Index stages1 = 0;
    Index stages2 = 0;
    std::optional<NGMPair> pair;  ///< set in pair mode
};

ModelConfig parse_model(const json& doc);
NGMPair build_pair(const ModelConfig& cfg);
/// Closed-form R0 of the model; empty in pair mode.
std::optional<double> closed_form_r0(const ModelConfig& cfg);

enum class SweepKind { matrix, spectral, relapse };

struct SweepConfig {
    SweepKind kind = SweepKind::matrix;
    MatrixXd matrix;  ///< base (matrix) or V (spectral)
    MatrixXd f;       ///< spectral only
    Index index = 0;  ///< 1-based; species-1 stage count j for relapse
    ModelConfig model;
    std::vector<double> schedule;  ///< empty: default geometric schedule
};

SweepConfig parse_sweep(const json& doc);

MatrixXd parse_matrix(const json& value, const std::string& field);
HostParams parse_host(const json& value, const std::string& field);
VectorParams parse_vector(const json& value, const std::string& field);

json to_json(const MatrixXd& m);
json to_json(const ConvergenceReport<double>& report);
json to_json(const VerifyReport& report);
/// F, V, F V^-1, eigenvalues and labels; re-ingestible through parse_model.
json ngm_dump(const NGMPair& pair);

/// t, raw_error, extrapolated_error, flagged. Singular points are listed
/// with empty error fields and flagged = 1.
std::string sweep_csv(const ConvergenceReport<double>& report);

/// %.17g
std::string format_double(double x);

}  // namespace ngmlimit

#endif  // NGMLIMIT_CONFIG_HPP
