#include "hole_energy/cli.hpp"

#include "hole_energy/acceptance.hpp"
#include "hole_energy/energy.hpp"
#include "hole_energy/grid_solver.hpp"
#include "hole_energy/montecarlo.hpp"
#include "hole_energy/radial_solver.hpp"
#include "hole_energy/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace hole::cli {

namespace {

using report::Json;
using Config = nlohmann::json;  // sorted keys keep embedded configs canonical

constexpr double pi = std::numbers::pi;
constexpr double e = std::numbers::e;

struct Outputs {
    std::string json_path;
    std::string csv_path;
    std::string binary_path;
    std::string config_path;
    int jobs = 0;
};

Error config_error(const std::string& msg) { return Error(ErrorKind::config, msg); }

double number(const Config& cfg, const std::string& key) {
    if (!cfg.contains(key)) throw config_error("missing required field '" + key + "'");
    if (!cfg.at(key).is_number()) throw config_error("field '" + key + "' must be a number");
    return cfg.at(key).get<double>();
}

double number_or(const Config& cfg, const std::string& key, double fallback) {
    return cfg.contains(key) ? number(cfg, key) : fallback;
}

long long integer_or(const Config& cfg, const std::string& key, long long fallback) {
    if (!cfg.contains(key)) return fallback;
    if (!cfg.at(key).is_number_integer()) throw config_error("field '" + key + "' must be an integer");
    return cfg.at(key).get<long long>();
}

double positive(const Config& cfg, const std::string& key) {
    const double v = number(cfg, key);
    if (!(v > 0.0) || !std::isfinite(v)) throw config_error("field '" + key + "' must be positive");
    return v;
}

template <class T>
std::vector<T> list(const Config& cfg, const std::string& key, std::vector<T> fallback) {
    if (!cfg.contains(key)) return fallback;
    try {
        return cfg.at(key).get<std::vector<T>>();
    } catch (const nlohmann::json::exception&) {
        throw config_error("field '" + key + "' must be a list of numbers");
    }
}

/// Metric from either an object under `key` or the flat keys kind/alpha/coefficients/extent.
ChartMetric metric_of(const Config& cfg, const std::string& key, const std::string& alpha_key,
                      const std::string& extent_key) {
    if (cfg.contains(key) && cfg.at(key).is_object()) return report::metric_from_json(Json::parse(cfg.at(key).dump()));
    Json j;
    j["kind"] = cfg.contains(key) ? cfg.at(key).get<std::string>() : std::string("flat");
    if (cfg.contains(alpha_key)) j["alpha"] = number(cfg, alpha_key);
    if (cfg.contains("coefficients") && key == "metric") j["coefficients"] = list<double>(cfg, "coefficients", {});
    if (cfg.contains(extent_key)) j["extent"] = number(cfg, extent_key);
    return report::metric_from_json(j);
}

ChartMetric omega_of(const Config& cfg) { return metric_of(cfg, "metric", "alpha", "extent"); }

ChartMetric omega0_of(const Config& cfg) {
    if (!cfg.contains("metric0") && !cfg.contains("beta")) return omega_of(cfg);
    Config c = cfg;
    if (!c.contains("metric0")) c["metric0"] = "flat";
    return metric_of(c, "metric0", "beta", "extent0");
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot write '" + path + "'");
    f << text;
}

template <class F>
void write_csv(const Outputs& o, F&& fill) {
    if (o.csv_path.empty()) return;
    std::ostringstream s;
    fill(s);
    write_file(o.csv_path, s.str());
}

/// Drops per-node arrays so the console copy stays short.
Json summary(Json j) {
    if (j.is_object()) {
        j.erase("samples");
        for (auto& [k, v] : j.items()) v = summary(v);
    } else if (j.is_array()) {
        for (auto& v : j) v = summary(v);
    }
    return j;
}

Json run_flat(const Config& cfg, const Outputs& o) {
    const double alpha = positive(cfg.contains("alpha") ? cfg : Config{{"alpha", 1.0}}, "alpha");
    const double r = positive(cfg, "r");
    const RadialWeight w(ChartMetric::flat(alpha, number_or(cfg, "extent", 10.0)));
    const auto u = flat_minimizer(alpha, r, static_cast<int>(integer_or(cfg, "intervals", 4096)));
    const auto mu = measure_from_potential(u, w);
    const auto rep = energy(u, mu);
    const double unit = alpha * alpha * pi * pi * std::pow(r, 4);
    Json j;
    j["min_energy"] = rep.total;
    j["energy"] = report::energy_to_json(rep);
    j["gamma"] = u.gamma();
    j["free_radius"] = u.free_radius();
    j["boundary_charge"] = u.boundary_charge();
    j["closed_form"] = Json{{"min_energy", e * e * unit},
                            {"integral_against_omega", (e * e - 2.0 * e) * unit},
                            {"integral_against_mu", 2.0 * e * unit},
                            {"gamma", -alpha * pi * r * r},
                            {"free_radius", std::sqrt(e) * r},
                            {"boundary_charge", 2.0 * alpha * pi * e * r * r}};
    j["measure"] = report::measure_to_json(mu);
    j["potential"] = report::potential_to_json(u, true);
    write_csv(o, [&](std::ostream& s) { report::potential_csv(u, s); });
    return j;
}

Json run_radial(const Config& cfg, const Outputs& o) {
    const auto metric = omega_of(cfg);
    MinEnergyOptions opts;
    opts.intervals = static_cast<int>(integer_or(cfg, "intervals", 4096));
    const auto res = cfg.contains("r_geodesic") ? min_energy(metric, omega0_of(cfg), positive(cfg, "r_geodesic"), opts)
                                                : min_energy_chart(metric, positive(cfg, "r"), opts);
    Json j = report::min_energy_to_json(res, true);
    if (res.potential) {
        j["measure"] = report::measure_to_json(measure_from_potential(*res.potential, RadialWeight(metric)));
        write_csv(o, [&](std::ostream& s) { report::potential_csv(*res.potential, s); });
    }
    return j;
}

int resolution_of(const Config& cfg) {
    const long long M = integer_or(cfg, "M", 512);
    if (M < 64 || M > 4096 || (M & (M - 1)) != 0)
        throw config_error("grid resolution must be a power of two between 64 and 4096");
    return static_cast<int>(M);
}

Json run_grid(const Config& cfg, const Outputs& o) {
    const auto metric = omega_of(cfg);
    const double r = positive(cfg, "r");
    const int M = resolution_of(cfg);
    const std::string mode = cfg.value("mode", std::string("free"));
    if (mode != "free" && mode != "envelope") throw config_error("grid mode must be 'free' or 'envelope'");
    EnvelopeProblem problem = mode == "free" ? EnvelopeProblem::free(metric, r) : [&] {
        const double gamma = number(cfg, "gamma");
        if (!(gamma < 0.0)) throw config_error("boundary data 'gamma' must be negative");
        return EnvelopeProblem::constant_data(metric, r, gamma);
    }();
    if (cfg.contains("half_width")) problem.half_width = positive(cfg, "half_width");
    SolverOptions opts;
    opts.tolerance = number_or(cfg, "tolerance", 1e-9);
    opts.max_sweeps = integer_or(cfg, "max_sweeps", 200000);
    const GridField g = envelope_grid(problem, M, opts);
    Json j;
    j["grid"] = report::grid_to_json(g);
    j["energy"] = grid_energy(g);
    j["maximality_violations"] = maximality_violations(g, 100, 1);
    write_csv(o, [&](std::ostream& s) { write_csv(g, s); });
    if (!o.binary_path.empty()) {
        std::ostringstream s;
        write_binary(g, s);
        write_file(o.binary_path, s.str());
    }
    return j;
}

Json run_sweep(const Config& cfg, const Outputs& o) {
    const auto radii = list<double>(cfg, "radii", {});
    if (radii.empty()) throw config_error("missing required field 'radii'");
    for (double r : radii)
        if (!(r > 0.0)) throw config_error("radii must be positive");
    SweepOptions opts;
    opts.jobs = o.jobs;
    opts.fit_limit = number_or(cfg, "fit_limit", 0.1);
    opts.solve.intervals = static_cast<int>(integer_or(cfg, "intervals", 4096));
    const auto s = scaling_sweep(omega_of(cfg), omega0_of(cfg), radii, opts);
    write_csv(o, [&](std::ostream& out) { report::sweep_csv(s, out); });
    return report::sweep_to_json(s);
}

Json run_equa_r(const Config& cfg, const Outputs&) {
    const double r = positive(cfg, "r");
    Json j;
    if (cfg.contains("kappa")) {
        const auto k = solve_kappa_R(number(cfg, "kappa"), r);
        j["equation"] = "kappa";
        j["R"] = k.R;
        j["R_over_r"] = k.R / r;
        j["below_two_r"] = k.below_two_r;
    } else {
        const double R = solve_equa_R(number_or(cfg, "eps", 0.0), r);
        j["equation"] = "epsilon";
        j["R"] = R;
        j["R_over_r"] = R / r;
    }
    return j;
}

Json run_psi2(const Config& cfg, const Outputs& o) {
    const double alpha = cfg.contains("alpha") ? positive(cfg, "alpha") : 1.0;
    const double r = positive(cfg, "r");
    const int intervals = static_cast<int>(integer_or(cfg, "intervals", 4096));
    const auto p = cfg.contains("rho") ? psi2_energy(alpha, number(cfg, "rho"), r, intervals)
                                       : psi2_energy_eps(alpha, number_or(cfg, "eps", 0.0), r, intervals);
    write_csv(o, [&](std::ostream& s) { report::potential_csv(p.construction.profile, s); });
    return report::psi2_to_json(p, true);
}

std::uint64_t seed_of(const Config& cfg) {
    const long long s = integer_or(cfg, "seed", 1);
    if (s < 0) throw config_error("seed must be nonnegative");
    return static_cast<std::uint64_t>(s);
}

std::size_t samples_of(const Config& cfg, long long fallback) {
    const long long s = integer_or(cfg, "samples", fallback);
    if (s < 100) throw config_error("samples must be at least 100");
    return static_cast<std::size_t>(s);
}

Json run_mc_hole(const Config& cfg, const Outputs& o) {
    const long long n = integer_or(cfg, "n", -1);
    if (n < 0) throw config_error("missing or negative field 'n'");
    const auto spec = EnsembleSpec::su2(static_cast<int>(n), seed_of(cfg), samples_of(cfg, 10000));
    HoleEstimate est;
    if (cfg.contains("rho")) {
        est = hole_probability_chart(spec, number(cfg, "rho"), o.jobs);
        est.r_geodesic = chart_to_geodesic(est.r_chart, ChartMetric::fubini_study());
    } else {
        est = hole_probability(spec, positive(cfg, "r_geodesic"), ChartMetric::fubini_study(), o.jobs);
    }
    write_csv(o, [&](std::ostream& s) { report::estimate_csv(est, s); });
    return Json{{"ensemble", "su2"}, {"estimate", report::estimate_to_json(est)}};
}

Json run_rate_trend(const Config& cfg, const Outputs& o) {
    RateTrendOptions opts;
    opts.target = number_or(cfg, "target", 1.0);
    if (cfg.contains("r_geodesic")) opts.r_geodesic = positive(cfg, "r_geodesic");
    opts.samples = samples_of(cfg, 100000);
    opts.seed = seed_of(cfg);
    opts.jobs = o.jobs;
    const auto ns = list<int>(cfg, "ns", {5, 10, 20, 40});
    const auto t = rate_trend(ns, opts);
    write_csv(o, [&](std::ostream& s) { report::rate_trend_csv(t, s); });
    return report::rate_trend_to_json(t);
}

int run_verify(const Config& cfg, const Outputs& o, std::ostream& out) {
    acceptance::Options opts;
    opts.jobs = o.jobs;
    if (cfg.contains("samples")) opts.trend_samples = samples_of(cfg, 100000);
    if (cfg.contains("seed")) opts.seed = seed_of(cfg);
    Json rows = Json::array();
    bool all = true;
    const auto results = acceptance::run_all(opts, [&](const acceptance::CriterionResult& r) {
        char line[128];
        std::snprintf(line, sizeof line, "%-4s %-24s %8.2fs  ", r.passed ? "PASS" : "FAIL", r.id.c_str(), r.seconds);
        out << line << r.detail << '\n' << std::flush;
    });
    for (const auto& r : results) {
        all = all && r.passed;
        rows.push_back(Json{{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
    }
    out << (all ? "all criteria passed\n" : "some criteria failed\n");
    if (!o.json_path.empty())
        write_file(o.json_path, report::dump(Json{{"command", "verify"}, {"config", Json::parse(cfg.dump())}, {"results", rows}}));
    return all ? exit_ok : exit_failed_check;
}

void print_error(std::ostream& out, const std::string& kind, const std::string& message, int code, const Config* cfg) {
    Json j;
    j["error"] = Json{{"kind", kind}, {"message", message}, {"exit_code", code}};
    if (cfg) j["config"] = Json::parse(cfg->dump());
    out << report::dump(j);
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::config:
        case ErrorKind::invalid_input: return exit_config;
        case ErrorKind::convergence: return exit_convergence;
        case ErrorKind::contour:
        case ErrorKind::estimation_failed: return exit_estimation;
        case ErrorKind::domain:
        case ErrorKind::unsupported_configuration:
        case ErrorKind::radius_too_large:
        case ErrorKind::not_subharmonic:
        case ErrorKind::inconsistent_pair:
        case ErrorKind::no_free_boundary:
        case ErrorKind::not_localized: return exit_domain;
    }
    return exit_domain;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Minimal energies of hole events and their Monte Carlo counterparts", "hole-energy"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "hole-energy 0.1.0");

    Config flags;
    Outputs outputs;
    using Runner = std::function<Json(const Config&, const Outputs&)>;
    std::map<std::string, Runner> runners;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", outputs.config_path, "JSON config file; flags override its fields");
        sub->add_option("--json", outputs.json_path, "Write the full JSON report here");
        sub->add_option("--csv", outputs.csv_path, "Write the CSV projection here");
        sub->add_option("--jobs", outputs.jobs, "Worker threads (default: HOLE_ENERGY_JOBS or all cores)")
            ->check(CLI::NonNegativeNumber);
    };
    auto num = [&](CLI::App* sub, const std::string& name, const std::string& help) {
        const std::string key = name;
        sub->add_option_function<double>("--" + name, [&flags, key](const double& v) { flags[key] = v; }, help);
    };
    auto integer = [&](CLI::App* sub, const std::string& name, const std::string& help) {
        const std::string key = name;
        sub->add_option_function<long long>("--" + name, [&flags, key](const long long& v) { flags[key] = v; }, help);
    };
    auto text = [&](CLI::App* sub, const std::string& name, const std::string& help) {
        const std::string key = name;
        sub->add_option_function<std::string>("--" + name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
    };
    auto numbers = [&](CLI::App* sub, const std::string& name, const std::string& help) {
        const std::string key = name;
        sub->add_option_function<std::vector<double>>(
               "--" + name, [&flags, key](const std::vector<double>& v) { flags[key] = v; }, help)
            ->delimiter(',');
    };
    auto integers = [&](CLI::App* sub, const std::string& name, const std::string& help) {
        const std::string key = name;
        sub->add_option_function<std::vector<long long>>(
               "--" + name, [&flags, key](const std::vector<long long>& v) { flags[key] = v; }, help)
            ->delimiter(',');
    };
    auto metric_flags = [&](CLI::App* sub) {
        text(sub, "metric", "flat | fubini_study | polynomial");
        num(sub, "alpha", "Constant density of a flat metric");
        numbers(sub, "coefficients", "Polynomial density coefficients c0,c1,...");
        num(sub, "extent", "Chart radius");
    };

    auto* flat = app.add_subcommand("flat", "Closed-form minimizer for a constant density");
    num(flat, "alpha", "Constant density");
    num(flat, "r", "Hole radius in chart units");
    integer(flat, "intervals", "Radial intervals");
    add_common(flat);
    runners["flat"] = run_flat;

    auto* radial = app.add_subcommand("radial", "Shooting solver for a rotation-invariant density");
    metric_flags(radial);
    num(radial, "r", "Hole radius in chart units");
    num(radial, "r_geodesic", "Hole radius as a geodesic radius under metric0");
    text(radial, "metric0", "Reference metric kind");
    num(radial, "beta", "Constant density of a flat reference metric");
    integer(radial, "intervals", "Radial intervals");
    add_common(radial);
    runners["radial"] = run_radial;

    auto* grid = app.add_subcommand("grid", "Two-dimensional obstacle solver");
    metric_flags(grid);
    num(grid, "r", "Hole radius in chart units");
    integer(grid, "M", "Grid resolution, a power of two in [64, 4096]");
    text(grid, "mode", "free | envelope");
    num(grid, "gamma", "Constant boundary data for envelope mode");
    num(grid, "half_width", "Half width T of the box");
    num(grid, "tolerance", "Residual tolerance");
    integer(grid, "max_sweeps", "Sweep cap");
    grid->add_option("--binary", outputs.binary_path, "Write the binary grid dump here");
    add_common(grid);
    runners["grid"] = run_grid;

    auto* sweep = app.add_subcommand("sweep", "Minimal energy over a list of geodesic radii and r^4 fit");
    metric_flags(sweep);
    text(sweep, "metric0", "Reference metric kind (default: same as metric)");
    num(sweep, "beta", "Constant density of a flat reference metric");
    num(sweep, "extent0", "Reference chart radius");
    numbers(sweep, "radii", "Geodesic radii, ascending");
    num(sweep, "fit_limit", "Fit only radii with r * varrho below this");
    integer(sweep, "intervals", "Radial intervals");
    add_common(sweep);
    runners["sweep"] = run_sweep;

    auto* equa = app.add_subcommand("equa-r", "Free radius of the perturbed comparison profile");
    num(equa, "eps", "Density perturbation in [0, 1)");
    num(equa, "kappa", "Solve the kappa equation instead (kappa > 3)");
    num(equa, "r", "Hole radius");
    add_common(equa);
    runners["equa-r"] = run_equa_r;

    auto* psi2 = app.add_subcommand("psi2", "Energy of the comparison profile");
    num(psi2, "alpha", "Density at the center");
    num(psi2, "r", "Hole radius");
    num(psi2, "eps", "Density perturbation in [0, 1/2)");
    num(psi2, "rho", "Lipschitz constant; eps = 2 rho r");
    integer(psi2, "intervals", "Radial intervals");
    add_common(psi2);
    runners["psi2"] = run_psi2;

    auto* mc = app.add_subcommand("mc-hole", "Monte Carlo hole probability for SU(2) polynomials");
    integer(mc, "n", "Degree");
    num(mc, "rho", "Chart radius of the disc");
    num(mc, "r_geodesic", "Geodesic radius of the disc");
    integer(mc, "samples", "Number of samples");
    integer(mc, "seed", "Seed");
    add_common(mc);
    runners["mc-hole"] = run_mc_hole;

    auto* trend = app.add_subcommand("rate-trend", "Empirical hole rates against the minimal energy");
    integers(trend, "ns", "Degrees, e.g. 5,10,20,40");
    num(trend, "target", "n^2 times the minimal energy for each row");
    num(trend, "r_geodesic", "Fixed geodesic radius instead of a target");
    integer(trend, "samples", "Samples per degree");
    integer(trend, "seed", "Seed");
    add_common(trend);
    runners["rate-trend"] = run_rate_trend;

    auto* verify = app.add_subcommand("verify", "Run every acceptance check and print a pass/fail table");
    integer(verify, "samples", "Samples per degree in the rate check");
    integer(verify, "seed", "Seed");
    add_common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        print_error(out, "config", e.what(), exit_config, nullptr);
        return exit_config;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    Config cfg = Config::object();
    try {
        if (!outputs.config_path.empty()) {
            std::ifstream f(outputs.config_path);
            if (!f) throw config_error("cannot read config '" + outputs.config_path + "'");
            try {
                cfg = Config::parse(f);
            } catch (const nlohmann::json::exception& e) {
                throw config_error(std::string("config is not valid JSON: ") + e.what());
            }
            if (!cfg.is_object()) throw config_error("config must be a JSON object");
            if (cfg.contains("command") && cfg["command"] != command)
                throw config_error("config is for command '" + cfg["command"].get<std::string>() + "'");
            if (cfg.contains("jobs") && outputs.jobs == 0) outputs.jobs = static_cast<int>(integer_or(cfg, "jobs", 0));
            cfg.erase("jobs");
        }
        for (auto& [k, v] : flags.items()) cfg[k] = v;
        cfg["command"] = command;

        if (command == "verify") return run_verify(cfg, outputs, out);
        Json result = runners.at(command)(cfg, outputs);
        Json doc;
        doc["command"] = command;
        doc["config"] = Json::parse(cfg.dump());
        doc["result"] = std::move(result);
        if (!outputs.json_path.empty()) write_file(outputs.json_path, report::dump(doc));
        out << report::dump(summary(doc));
        return exit_ok;
    } catch (const Error& e) {
        const int code = exit_code_for(e.kind());
        print_error(out, std::string(to_string(e.kind())), e.what(), code, &cfg);
        return code;
    } catch (const std::exception& e) {
        print_error(out, "internal", e.what(), exit_failed_check, &cfg);
        return exit_failed_check;
    }
}

}  // namespace hole::cli
