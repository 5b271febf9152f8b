#include "doctest.h"

#include "ngmlimit/config.hpp"
#include "test_util.hpp"

using namespace ngmlimit;
using testutil::mat;

namespace {

json unit_host_json(double c = 1.0) {
    return {{"c", c}, {"S_bar", 1.0}, {"alpha", {2.0, 1.0}}, {"mu", {1.0}}};
}

json unit_vector_json() { return {{"f", 1.0}, {"c_v", 1.0}, {"S_v_bar", 1.0}, {"mu_tilde", 1.0}}; }

std::string field_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<no error>";
}

}  // namespace

TEST_CASE("parse_model") {
    const json uncoupled = {{"mode", "uncoupled"}, {"host", unit_host_json()}, {"vector", unit_vector_json()}};
    const ModelConfig cfg = parse_model(uncoupled);
    CHECK(cfg.mode == ModelMode::uncoupled);
    CHECK(cfg.stages1 == 1);
    CHECK(*closed_form_r0(cfg) == doctest::Approx(1.0));
    CHECK(r0(build_pair(cfg)) == doctest::Approx(1.0));

    const json coupled = {{"mode", "coupled"},
                          {"host1", unit_host_json(0.36)},
                          {"host2", unit_host_json(0.64)},
                          {"vector", unit_vector_json()}};
    CHECK(*closed_form_r0(parse_model(coupled)) == doctest::Approx(1.0));

    const json pair = {{"mode", "pair"}, {"F", {{0, 2}, {8, 0}}}, {"V", {{1, 0}, {0, 1}}}, {"labels", {"h", "v"}}};
    const ModelConfig pcfg = parse_model(pair);
    CHECK_FALSE(closed_form_r0(pcfg).has_value());
    CHECK(r0(build_pair(pcfg)) == doctest::Approx(4.0));
}

TEST_CASE("config errors name the field") {
    json doc = {{"mode", "uncoupled"}, {"host", unit_host_json()}, {"vector", unit_vector_json()}};
    doc["host"]["mu"][0] = -1.0;
    CHECK(field_of([&] { parse_model(doc); }) == "host.mu[0]");

    doc = {{"mode", "uncoupled"}, {"host", unit_host_json()}, {"vector", unit_vector_json()}};
    doc["vector"].erase("f");
    CHECK(field_of([&] { parse_model(doc); }) == "vector.f");

    doc = {{"mode", "uncoupled"}, {"host", unit_host_json()}, {"vector", unit_vector_json()}, {"j", 3}};
    CHECK(field_of([&] { parse_model(doc); }) == "j");

    doc = {{"mode", "uncoupled"}, {"host", unit_host_json()}, {"vector", unit_vector_json()}};
    doc["host"]["alpha"] = {1.0};
    CHECK(field_of([&] { parse_model(doc); }) == "host.alpha");

    CHECK(field_of([&] { parse_model(json{{"mode", "bogus"}}); }) == "mode");
    CHECK(field_of([&] { parse_model(json::array()); }) == "(root)");
    CHECK(field_of([&] {
              parse_model(json{{"mode", "pair"}, {"F", {{1, 2}, {3}}}, {"V", {{1}}}, {"labels", {"a"}}});
          }) == "F[1]");
    CHECK(field_of([&] {
              parse_model(json{{"mode", "pair"}, {"F", {{-1}}}, {"V", {{1}}}, {"labels", {"a"}}});
          }) == "F/V");
}

TEST_CASE("parse_sweep") {
    SweepConfig cfg = parse_sweep(json{{"kind", "matrix"}, {"matrix", {{2, 1}, {1, 3}}}, {"i", 1}});
    CHECK(cfg.kind == SweepKind::matrix);
    CHECK(cfg.index == 1);
    CHECK(cfg.schedule.empty());

    cfg = parse_sweep(json{{"kind", "spectral"},
                           {"F", {{0, 1}, {1, 0}}},
                           {"V", {{1, 0}, {0, 1}}},
                           {"i", 2},
                           {"schedule", {10, 100}}});
    CHECK(cfg.schedule == std::vector<double>{10, 100});

    json rel = {{"kind", "relapse"}, {"host1", unit_host_json()}, {"host2", unit_host_json()},
                {"vector", unit_vector_json()}, {"j", 2}};
    CHECK(field_of([&] { parse_sweep(rel); }) == "j");
    rel["j"] = 1;
    CHECK(field_of([&] { parse_sweep(rel); }) == "j");

    CHECK(field_of([&] { parse_sweep(json{{"kind", "matrix"}, {"matrix", {{1, 0}, {0, 1}}}, {"i", 3}}); }) == "i");
    CHECK(field_of([&] {
              parse_sweep(json{{"kind", "matrix"}, {"matrix", {{1, 0}, {0, 1}}}, {"i", 1}, {"schedule", {2, 1}}});
          }) == "schedule");
}

TEST_CASE("parse_schedule") {
    CHECK(parse_schedule("1,10,1e3") == std::vector<double>{1, 10, 1000});
    CHECK(parse_schedule(" 2, 4") == std::vector<double>{2, 4});
    CHECK_THROWS_AS(parse_schedule("1,x"), ConfigError);
    CHECK_THROWS_AS(parse_schedule("1,2abc"), ConfigError);
    CHECK_THROWS_AS(parse_schedule("3,2"), ConfigError);
    CHECK_THROWS_AS(parse_schedule(""), ConfigError);
    CHECK_THROWS_AS(parse_schedule("0,1"), ConfigError);
}

TEST_CASE("ngm_dump round-trips through parse_model") {
    HostParams h1 = testutil::unit_host(2);
    h1.alpha = {0.7, 1.3, 0.4};
    h1.mu = {0.2, 0.5};
    const NGMPair pair = build_coupled_ngm(h1, testutil::unit_host(3, 0.5), testutil::unit_vector(), 2, 3);
    const json dumped = ngm_dump(pair);
    CHECK(dumped["labels"] == json(pair.labels()));
    CHECK(dumped["eigenvalues"].size() == 6);

    const json reparsed_text = json::parse(dumped.dump());
    const NGMPair back = build_pair(parse_model(reparsed_text));
    CHECK(limit_error(back.F(), pair.F()) <= 1e-12);
    CHECK(limit_error(back.V(), pair.V()) <= 1e-12);
    CHECK(back.labels() == pair.labels());
    CHECK(std::abs(r0(back) - dumped["r0"].get<double>()) <= 1e-12);
}

TEST_CASE("sweep_csv") {
    ConvergenceReport<double> report;
    report.schedule = {2.0, 4.0};
    report.errors = {0.5, 0.25};
    report.extrapolated_errors = {0.0};
    report.flagged = {false, true};
    report.skipped = {1.0};
    const std::string expected =
        "t,raw_error,extrapolated_error,flagged\n"
        "1,,,1\n"
        "2,0.5,,0\n"
        "4,0.25,0,1\n";
    CHECK(sweep_csv(report) == expected);
    CHECK(format_double(0.1) == "0.10000000000000001");

    const json j = to_json(report);
    CHECK(j["skipped"] == json({1.0}));
    CHECK(j["fitted_rate"].is_null());
}

TEST_CASE("load_json") {
    CHECK_THROWS_AS(load_json("/nonexistent/path.json"), ConfigError);
}
