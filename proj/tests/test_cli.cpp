#include "doctest.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args, const std::string& stdin_text = "") {
    std::string cmd = std::string(NGMLIMIT_CLI) + " " + args + " 2>/dev/null";
    fs::path input;
    if (!stdin_text.empty()) {
        input = fs::temp_directory_path() / ("ngmlimit_stdin_" + std::to_string(::getpid()) + ".json");
        std::ofstream(input) << stdin_text;
        cmd += " < " + input.string();
    }
    Run r{0, ""};
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (!input.empty()) fs::remove(input);
    return r;
}

const char* kUnitHost = R"({"c": 1, "S_bar": 1, "alpha": [2, 1], "mu": [1]})";
const char* kUnitVector = R"({"f": 1, "c_v": 1, "S_v_bar": 1, "mu_tilde": 1})";

std::string uncoupled(const std::string& host = kUnitHost) {
    return std::string(R"({"mode": "uncoupled", "host": )") + host + R"(, "vector": )" + kUnitVector + "}";
}

}  // namespace

TEST_CASE("r0 subcommand") {
    Run r = run("r0 --config -", uncoupled());
    REQUIRE(r.code == 0);
    json out = json::parse(r.out);
    CHECK(out["spectral"].get<double>() == doctest::Approx(1.0));
    CHECK(out["closed_form"].get<double>() == doctest::Approx(1.0));
    CHECK(out["relative_gap"].get<double>() <= 1e-12);

    const std::string coupled =
        std::string(R"({"mode": "coupled", "host1": {"c": 0.36, "S_bar": 1, "alpha": [2, 1], "mu": [1]},)") +
        R"("host2": {"c": 0.64, "S_bar": 1, "alpha": [2, 1], "mu": [1]}, "vector": )" + kUnitVector + "}";
    r = run("r0 --config -", coupled);
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["closed_form"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("config errors exit 2") {
    CHECK(run("r0 --config -", uncoupled(R"({"c": 1, "S_bar": 1, "alpha": [2, 1], "mu": [-1]})")).code == 2);
    CHECK(run("r0 --config -", "{not json").code == 2);
    CHECK(run("r0 --config /nonexistent.json").code == 2);
    CHECK(run("r0").code == 2);
    CHECK(run("bogus").code == 2);
    CHECK(run("sweep --config - --format xml", R"({"kind": "matrix", "matrix": [[1,0],[0,1]], "i": 1})").code == 2);
    CHECK(run("sweep --config - --schedule 3,2", R"({"kind": "matrix", "matrix": [[1,0],[0,1]], "i": 1})").code == 2);
}

TEST_CASE("numerical errors exit 3") {
    CHECK(run("sweep --config -", R"({"kind": "matrix", "matrix": [[1,1],[1,0]], "i": 1})").code == 3);
    CHECK(run("sweep --config - --schedule 1", R"({"kind": "matrix", "matrix": [[0,1],[1,1]], "i": 1})").code == 3);
}

TEST_CASE("sweep output") {
    const std::string cfg = R"({"kind": "matrix", "matrix": [[2,1,0],[1,3,1],[0,1,4]], "i": 2})";
    Run r = run("sweep --config - --schedule 100,1000,10000", cfg);
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("t,raw_error,extrapolated_error,flagged\n100,", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);

    r = run("sweep --config - --format json", cfg);
    REQUIRE(r.code == 0);
    json out = json::parse(r.out);
    CHECK(out["schedule"].size() == 8);
    CHECK(out["estimate"][0][0].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("ngm subcommand") {
    Run r = run("ngm --config -", uncoupled());
    REQUIRE(r.code == 0);
    json out = json::parse(r.out);
    CHECK(out["labels"] == json({"I1", "Iv"}));
    CHECK(out["r0"].get<double>() == doctest::Approx(1.0));

    // The dump is itself a valid pair config.
    r = run("r0 --config -", out.dump());
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["spectral"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("verify reports an injected fault") {
    const Run r = run("verify --seed 7 --inject-fault 1e-3");
    CHECK(r.code != 0);
    const json out = json::parse(r.out);
    bool named = false;
    for (const auto& p : out["properties"]) {
        if (p["name"] == "coupling_pythagorean") named = !p["passed"].get<bool>();
    }
    CHECK(named);
}
