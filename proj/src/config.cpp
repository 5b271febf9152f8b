#include "ngmlimit/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>

#include "ngmlimit/spectrum.hpp"

namespace ngmlimit {

namespace {

const json& require_field(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw ConfigError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(path + "." + key, "missing");
    return *it;
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

double as_number(const json& value, const std::string& field) {
    if (!value.is_number()) throw ConfigError(field, "expected a number");
    const double x = value.get<double>();
    if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
    return x;
}

double as_rate(const json& value, const std::string& field) {
    const double x = as_number(value, field);
    if (!(x > 0.0)) throw ConfigError(field, "must be positive, got " + format_double(x));
    return x;
}

Index as_index(const json& value, const std::string& field) {
    if (!value.is_number_integer()) throw ConfigError(field, "expected an integer");
    const auto i = value.get<long long>();
    if (i < 1) throw ConfigError(field, "must be at least 1");
    return static_cast<Index>(i);
}

std::vector<double> as_rates(const json& value, const std::string& field) {
    if (!value.is_array()) throw ConfigError(field, "expected an array of rates");
    std::vector<double> out;
    for (std::size_t k = 0; k < value.size(); ++k) {
        out.push_back(as_rate(value[k], field + "[" + std::to_string(k) + "]"));
    }
    return out;
}

std::string as_string(const json& value, const std::string& field) {
    if (!value.is_string()) throw ConfigError(field, "expected a string");
    return value.get<std::string>();
}

std::vector<double> as_schedule(const json& value, const std::string& field) {
    if (!value.is_array()) throw ConfigError(field, "expected an array");
    std::vector<double> out;
    for (std::size_t k = 0; k < value.size(); ++k) {
        out.push_back(as_number(value[k], field + "[" + std::to_string(k) + "]"));
    }
    try {
        validate_schedule(out);
    } catch (const InvalidInput& e) {
        throw ConfigError(field, e.what());
    }
    return out;
}

Index stage_count(const json& doc, const std::string& key, const HostParams& host) {
    auto it = doc.find(key);
    if (it == doc.end()) return host.stages();
    const Index n = as_index(*it, key);
    if (n > host.stages()) {
        throw ConfigError(key, std::to_string(n) + " stages requested, host provides " +
                                   std::to_string(host.stages()));
    }
    return n;
}

json complex_list(const std::vector<std::complex<double>>& values) {
    json out = json::array();
    for (const auto& z : values) out.push_back({{"re", z.real()}, {"im", z.imag()}});
    return out;
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json load_json(const std::string& path) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
        std::ifstream in(path);
        if (!in) throw ConfigError("--config", "cannot open " + path);
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
    }
}

std::vector<double> parse_schedule(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("--schedule", "not a number: '" + item + "'");
        }
        if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos) {
            throw ConfigError("--schedule", "not a number: '" + item + "'");
        }
        out.push_back(x);
    }
    try {
        validate_schedule(out);
    } catch (const InvalidInput& e) {
        throw ConfigError("--schedule", e.what());
    }
    return out;
}

MatrixXd parse_matrix(const json& value, const std::string& field) {
    if (!value.is_array() || value.empty()) throw ConfigError(field, "expected a non-empty array of rows");
    const std::size_t rows = value.size();
    if (!value[0].is_array() || value[0].empty()) throw ConfigError(field + "[0]", "expected a non-empty row");
    const std::size_t cols = value[0].size();
    MatrixXd out(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string row_field = field + "[" + std::to_string(r) + "]";
        if (!value[r].is_array() || value[r].size() != cols) {
            throw ConfigError(row_field, "expected a row of " + std::to_string(cols) + " numbers");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            out(static_cast<Index>(r), static_cast<Index>(c)) =
                as_number(value[r][c], row_field + "[" + std::to_string(c) + "]");
        }
    }
    return out;
}

HostParams parse_host(const json& value, const std::string& field) {
    HostParams h;
    h.c = as_rate(require_field(value, "c", field), join(field, "c"));
    h.S_bar = as_rate(require_field(value, "S_bar", field), join(field, "S_bar"));
    h.alpha = as_rates(require_field(value, "alpha", field), join(field, "alpha"));
    h.mu = as_rates(require_field(value, "mu", field), join(field, "mu"));
    if (h.mu.empty()) throw ConfigError(join(field, "mu"), "at least one stage required");
    if (h.alpha.size() != h.mu.size() + 1) {
        throw ConfigError(join(field, "alpha"), "length must be len(mu) + 1 = " +
                                                    std::to_string(h.mu.size() + 1));
    }
    return h;
}

VectorParams parse_vector(const json& value, const std::string& field) {
    VectorParams v;
    v.f = as_rate(require_field(value, "f", field), join(field, "f"));
    v.c_v = as_rate(require_field(value, "c_v", field), join(field, "c_v"));
    v.S_v_bar = as_rate(require_field(value, "S_v_bar", field), join(field, "S_v_bar"));
    v.mu_tilde = as_rate(require_field(value, "mu_tilde", field), join(field, "mu_tilde"));
    return v;
}

ModelConfig parse_model(const json& doc) {
    if (!doc.is_object()) throw ConfigError("(root)", "expected an object");
    ModelConfig cfg;
    const std::string mode = as_string(require_field(doc, "mode", ""), "mode");
    if (mode == "uncoupled") {
        cfg.mode = ModelMode::uncoupled;
        cfg.host1 = parse_host(require_field(doc, "host", ""), "host");
        cfg.vector = parse_vector(require_field(doc, "vector", ""), "vector");
        cfg.stages1 = stage_count(doc, "j", cfg.host1);
    } else if (mode == "coupled") {
        cfg.mode = ModelMode::coupled;
        cfg.host1 = parse_host(require_field(doc, "host1", ""), "host1");
        cfg.host2 = parse_host(require_field(doc, "host2", ""), "host2");
        cfg.vector = parse_vector(require_field(doc, "vector", ""), "vector");
        cfg.stages1 = stage_count(doc, "stages1", cfg.host1);
        cfg.stages2 = stage_count(doc, "stages2", cfg.host2);
    } else if (mode == "pair") {
        cfg.mode = ModelMode::pair;
        MatrixXd f = parse_matrix(require_field(doc, "F", ""), "F");
        MatrixXd v = parse_matrix(require_field(doc, "V", ""), "V");
        const json& labels_json = require_field(doc, "labels", "");
        if (!labels_json.is_array()) throw ConfigError("labels", "expected an array of strings");
        std::vector<std::string> labels;
        for (std::size_t k = 0; k < labels_json.size(); ++k) {
            labels.push_back(as_string(labels_json[k], "labels[" + std::to_string(k) + "]"));
        }
        try {
            cfg.pair.emplace(std::move(f), std::move(v), std::move(labels));
        } catch (const InvalidInput& e) {
            throw ConfigError("F/V", e.what());
        }
    } else {
        throw ConfigError("mode", "expected one of uncoupled, coupled, pair; got '" + mode + "'");
    }
    return cfg;
}

NGMPair build_pair(const ModelConfig& cfg) {
    switch (cfg.mode) {
        case ModelMode::uncoupled: return build_uncoupled_ngm(cfg.host1, cfg.vector, cfg.stages1);
        case ModelMode::coupled:
            return build_coupled_ngm(cfg.host1, cfg.host2, cfg.vector, cfg.stages1, cfg.stages2);
        case ModelMode::pair: return *cfg.pair;
    }
    throw InvalidInput("build_pair: unknown mode");
}

std::optional<double> closed_form_r0(const ModelConfig& cfg) {
    switch (cfg.mode) {
        case ModelMode::uncoupled: return r0_uncoupled_closed(cfg.host1, cfg.vector, cfg.stages1).value;
        case ModelMode::coupled:
            return r0_coupled_closed(cfg.host1, cfg.host2, cfg.vector, cfg.stages1, cfg.stages2).value;
        case ModelMode::pair: return std::nullopt;
    }
    return std::nullopt;
}

SweepConfig parse_sweep(const json& doc) {
    if (!doc.is_object()) throw ConfigError("(root)", "expected an object");
    SweepConfig cfg;
    const std::string kind = as_string(require_field(doc, "kind", ""), "kind");
    if (kind == "matrix") {
        cfg.kind = SweepKind::matrix;
        cfg.matrix = parse_matrix(require_field(doc, "matrix", ""), "matrix");
        cfg.index = as_index(require_field(doc, "i", ""), "i");
        if (cfg.matrix.rows() != cfg.matrix.cols() || cfg.matrix.rows() < 2) {
            throw ConfigError("matrix", "expected a square matrix of dimension >= 2");
        }
        if (cfg.index > cfg.matrix.rows()) throw ConfigError("i", "exceeds the matrix dimension");
    } else if (kind == "spectral") {
        cfg.kind = SweepKind::spectral;
        cfg.f = parse_matrix(require_field(doc, "F", ""), "F");
        cfg.matrix = parse_matrix(require_field(doc, "V", ""), "V");
        cfg.index = as_index(require_field(doc, "i", ""), "i");
        if (cfg.matrix.rows() != cfg.matrix.cols() || cfg.matrix.rows() < 2) {
            throw ConfigError("V", "expected a square matrix of dimension >= 2");
        }
        if (cfg.f.rows() != cfg.matrix.rows() || cfg.f.cols() != cfg.matrix.cols()) {
            throw ConfigError("F", "must have the dimension of V");
        }
        if (cfg.index > cfg.matrix.rows()) throw ConfigError("i", "exceeds the matrix dimension");
    } else if (kind == "relapse") {
        cfg.kind = SweepKind::relapse;
        cfg.model.mode = ModelMode::coupled;
        cfg.model.host1 = parse_host(require_field(doc, "host1", ""), "host1");
        cfg.model.host2 = parse_host(require_field(doc, "host2", ""), "host2");
        cfg.model.vector = parse_vector(require_field(doc, "vector", ""), "vector");
        cfg.index = as_index(require_field(doc, "j", ""), "j");
        if (cfg.index < 2) throw ConfigError("j", "must be at least 2");
        if (cfg.index > cfg.model.host1.stages() || cfg.index > cfg.model.host2.stages()) {
            throw ConfigError("j", "both hosts must provide j stages");
        }
        cfg.model.stages1 = cfg.index;
        cfg.model.stages2 = cfg.index;
    } else {
        throw ConfigError("kind", "expected one of matrix, spectral, relapse; got '" + kind + "'");
    }
    if (auto it = doc.find("schedule"); it != doc.end()) cfg.schedule = as_schedule(*it, "schedule");
    return cfg;
}

json to_json(const MatrixXd& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const ConvergenceReport<double>& report) {
    json out;
    out["schedule"] = report.schedule;
    out["errors"] = report.errors;
    out["extrapolated_errors"] = report.extrapolated_errors;
    std::vector<bool> flagged = report.flagged;
    out["flagged"] = flagged;
    out["skipped"] = report.skipped;
    out["fitted_rate"] = report.fitted_rate ? json(*report.fitted_rate) : json(nullptr);
    return out;
}

json to_json(const VerifyReport& report) {
    json props = json::array();
    for (const auto& p : report.properties) {
        json item;
        item["name"] = p.name;
        item["criterion"] = p.criterion;
        item["description"] = p.description;
        item["bound"] = p.bound;
        item["passed"] = p.passed;
        item["cases"] = p.cases;
        const bool observed = p.observed_min <= p.observed_max;
        item["observed_min"] = observed ? json(p.observed_min) : json(nullptr);
        item["observed_max"] = observed ? json(p.observed_max) : json(nullptr);
        item["failures"] = p.failures;
        props.push_back(std::move(item));
    }
    json out;
    out["seed"] = report.seed;
    out["passed"] = report.all_passed();
    out["properties"] = std::move(props);
    return out;
}

json ngm_dump(const NGMPair& pair) {
    json out;
    out["mode"] = "pair";
    out["labels"] = pair.labels();
    out["F"] = to_json(pair.F());
    out["V"] = to_json(pair.V());
    const MatrixXd k = pair.next_generation();
    out["FVinv"] = to_json(k);
    out["eigenvalues"] = complex_list(eigenvalues(k).values);
    out["r0"] = r0(pair);
    out["warnings"] = pair.warnings();
    return out;
}

std::string sweep_csv(const ConvergenceReport<double>& report) {
    std::map<double, std::string> rows;
    for (std::size_t k = 0; k < report.size(); ++k) {
        std::string line = format_double(report.schedule[k]) + "," + format_double(report.errors[k]) + ",";
        if (k > 0) line += format_double(report.extrapolated_errors[k - 1]);
        line += report.flagged[k] ? ",1" : ",0";
        rows.emplace(report.schedule[k], std::move(line));
    }
    for (const double t : report.skipped) rows.emplace(t, format_double(t) + ",,,1");
    std::string out = "t,raw_error,extrapolated_error,flagged\n";
    for (const auto& [t, line] : rows) out += line + "\n";
    return out;
}

}  // namespace ngmlimit
