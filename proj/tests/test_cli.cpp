#include "hole_energy/cli.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

using doctest::Approx;
using Json = nlohmann::json;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    Json json() const { return Json::parse(out); }
};

Outcome invoke(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"hole-energy"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    const int code = hole::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str()};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("hole_energy_cli_" + name);
}

}  // namespace

TEST_CASE("flat command reproduces the closed form") {
    const auto o = invoke({"flat", "--alpha", "1", "--r", "0.1"});
    REQUIRE(o.code == 0);
    const auto j = o.json();
    CHECK(j["command"] == "flat");
    CHECK(j["config"]["r"].get<double>() == 0.1);
    const auto& res = j["result"];
    CHECK(res["min_energy"].get<double>() == Approx(7.2927e-3).epsilon(1e-4));
    CHECK(res["min_energy"].get<double>() ==
          Approx(res["closed_form"]["min_energy"].get<double>()).epsilon(1e-8));
    CHECK_FALSE(res["potential"].contains("samples"));
}

TEST_CASE("equal inputs give byte-identical output") {
    const auto a = invoke({"flat", "--alpha", "0.5", "--r", "0.2"});
    const auto b = invoke({"flat", "--alpha", "0.5", "--r", "0.2"});
    CHECK(a.out == b.out);
    const auto c = invoke({"mc-hole", "--n", "3", "--rho", "0.5", "--samples", "2000", "--seed", "9", "--jobs", "1"});
    const auto d = invoke({"mc-hole", "--n", "3", "--rho", "0.5", "--samples", "2000", "--seed", "9", "--jobs", "2"});
    CHECK(c.out == d.out);
}

TEST_CASE("equa-r at zero perturbation") {
    const auto o = invoke({"equa-r", "--eps", "0", "--r", "1"});
    REQUIRE(o.code == 0);
    CHECK(o.json()["result"]["R"].get<double>() == Approx(1.6487213).epsilon(1e-7));
}

TEST_CASE("mc-hole degree one at rho = 1") {
    const auto o = invoke({"mc-hole", "--n", "1", "--rho", "1", "--samples", "10000", "--seed", "42"});
    REQUIRE(o.code == 0);
    const auto est = o.json()["result"]["estimate"];
    CHECK(est["interval"][0].get<double>() <= 0.5);
    CHECK(est["interval"][1].get<double>() >= 0.5);
}

TEST_CASE("config file with flag override and full JSON output") {
    const auto cfg = temp_file("cfg.json");
    const auto full = temp_file("full.json");
    const auto csv = temp_file("potential.csv");
    {
        std::ofstream f(cfg);
        f << R"({"alpha": 0.5, "r": 0.3})";
    }
    const auto o = invoke({"flat", "--config", cfg.c_str(), "--r", "0.1", "--json", full.c_str(), "--csv", csv.c_str()});
    REQUIRE(o.code == 0);
    const auto j = o.json();
    CHECK(j["config"]["alpha"].get<double>() == 0.5);
    CHECK(j["config"]["r"].get<double>() == 0.1);
    std::ifstream f(full);
    const auto written = Json::parse(f);
    CHECK(written["result"]["potential"].contains("samples"));
    CHECK(written["result"]["min_energy"] == j["result"]["min_energy"]);
    std::ifstream c(csv);
    std::string header;
    std::getline(c, header);
    CHECK_FALSE(header.empty());
    std::filesystem::remove(cfg);
    std::filesystem::remove(full);
    std::filesystem::remove(csv);
}

TEST_CASE("configuration errors exit with 2") {
    CHECK(invoke({"flat", "--alpha", "1"}).code == 2);
    CHECK(invoke({"flat", "--r", "x"}).code == 2);
    CHECK(invoke({"nonsense"}).code == 2);
    CHECK(invoke({"grid", "--r", "0.1", "--M", "100"}).code == 2);
    CHECK(invoke({"mc-hole", "--n", "2", "--rho", "1", "--samples", "10"}).code == 2);
    CHECK(invoke({"flat", "--config", "/nonexistent/cfg.json"}).code == 2);
    const auto o = invoke({"flat", "--alpha", "-1", "--r", "0.1"});
    CHECK(o.code == 2);
    CHECK(o.json()["error"]["exit_code"] == 2);
}

TEST_CASE("non-convergence exits with 3") {
    const auto o = invoke({"grid", "--alpha", "1", "--r", "0.1", "--M", "64", "--max_sweeps", "3"});
    CHECK(o.code == 3);
    CHECK(o.json()["error"]["kind"] == "convergence");
}

TEST_CASE("domain errors exit with 4") {
    const auto o = invoke({"mc-hole", "--n", "2", "--r_geodesic", "5", "--samples", "100"});
    CHECK(o.code == 4);
    CHECK(o.json()["error"]["kind"] == "domain");
    CHECK(invoke({"psi2", "--alpha", "1", "--r", "0.1", "--eps", "0.7"}).code != 0);
}

TEST_CASE("exit code mapping") {
    using hole::ErrorKind;
    using hole::cli::exit_code_for;
    CHECK(exit_code_for(ErrorKind::config) == 2);
    CHECK(exit_code_for(ErrorKind::invalid_input) == 2);
    CHECK(exit_code_for(ErrorKind::convergence) == 3);
    CHECK(exit_code_for(ErrorKind::radius_too_large) == 4);
    CHECK(exit_code_for(ErrorKind::no_free_boundary) == 4);
    CHECK(exit_code_for(ErrorKind::contour) == 5);
    CHECK(exit_code_for(ErrorKind::estimation_failed) == 5);
}

TEST_CASE("installed binary runs") {
    const char* exe = std::getenv("HOLE_ENERGY_CLI");
    if (exe == nullptr) return;
    const auto out = temp_file("stdout.json");
    const std::string cmd = std::string(exe) + " equa-r --eps 0 --r 1 > " + out.string();
    CHECK(std::system(cmd.c_str()) == 0);
    std::ifstream f(out);
    CHECK(Json::parse(f)["result"]["R"].get<double>() == Approx(1.6487213).epsilon(1e-7));
    std::filesystem::remove(out);
}
