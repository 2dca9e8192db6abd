#include "hole_energy/energy.hpp"
#include "hole_energy/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

using namespace hole;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double e = std::numbers::e;

template <class F>
double bisect(F f, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        ((f(mid) > 0.0) == (f(hi) > 0.0) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& err) {
        return err.kind();
    }
    FAIL("expected an error");
    return ErrorKind::config;
}
}  // namespace

TEST_CASE("flat minimal energy through geodesic radii") {
    const auto res = min_energy(ChartMetric::flat(1.0), ChartMetric::flat(0.5), 0.1);
    CHECK(res.method == "radial");
    CHECK(res.report.total == Approx(e * e * pi * pi * 1e-4).epsilon(1e-8));
    const auto small = min_energy(ChartMetric::flat(1.0), ChartMetric::flat(0.5), 0.01);
    CHECK(small.report.total / (e * e * pi * pi * 1e-8) == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Fubini-Study minimal energy sits within 5r of a quarter") {
    const auto fs = ChartMetric::fubini_study();
    const double r = 0.05;
    const auto res = min_energy(fs, fs, r);
    const double quarter = 0.25 * e * e * pi * pi * std::pow(r, 4);
    CHECK(std::abs(res.report.total / quarter - 1.0) <= 5.0 * r);
}

TEST_CASE("grid path for non-radial and forced solves") {
    const auto planar = ChartMetric::planar([](Complex) { return 1.0; }, 10.0);
    const auto g = min_energy_chart(planar, 0.1);
    CHECK(g.method == "grid");
    CHECK(g.report.total == Approx(e * e * pi * pi * 1e-4).epsilon(1e-2));
    MinEnergyOptions forced;
    forced.force_grid = true;
    forced.grid_resolution = 256;
    const auto fs = ChartMetric::fubini_study();
    const double radial = min_energy_chart(fs, 0.1).report.total;
    CHECK(min_energy_chart(fs, 0.1, forced).report.total == Approx(radial).epsilon(1e-2));
}

TEST_CASE("free radius equation") {
    CHECK(solve_equa_R(0.0, 1.0) == Approx(std::sqrt(e)).epsilon(1e-12));
    const double want = bisect([](double u) { return u * u * (std::log(u) - 0.5) - 0.1 / 0.9; }, 1.0, 3.0);
    CHECK(solve_equa_R(0.1, 1.0) == Approx(want).epsilon(1e-10));
    CHECK(solve_equa_R(0.1, 1.0) == Approx(1.7123).epsilon(1e-4));
    const double gap = solve_equa_R(0.01, 0.1) / 0.1 - std::sqrt(e);
    CHECK(gap > 0.0);
    CHECK(gap < 10.0 * 0.01);
    CHECK(kind_of([] { (void)solve_equa_R(1.0, 1.0); }) == ErrorKind::domain);
}

TEST_CASE("kappa free radius equation") {
    CHECK(std::abs(solve_kappa_R(1e6, 1.0).R - std::sqrt(e)) < 1e-5);
    const double want = bisect([](double R) { return 16.0 * R * R * std::log(R) - 3.0 - 8.0 * R * R; }, 1.0, 10.0);
    CHECK(solve_kappa_R(10.0, 1.0).R == Approx(want).epsilon(1e-10));
    const auto k4 = solve_kappa_R(4.0, 1.0);
    CHECK(k4.below_two_r == (k4.R < 2.0));
    CHECK(k4.R > std::sqrt(e));
    CHECK(kind_of([] { (void)solve_kappa_R(3.0, 1.0); }) == ErrorKind::domain);
}

TEST_CASE("comparison profile at zero perturbation is the flat minimizer") {
    const auto p = psi2_energy(1.0, 0.0, 0.05);
    CHECK(p.value == Approx(e * e * pi * pi * std::pow(0.05, 4)).epsilon(1e-10));
    CHECK(p.construction.R == Approx(std::sqrt(e) * 0.05).epsilon(1e-12));
}

TEST_CASE("comparison profile bound") {
    const auto p = psi2_energy(1.0, 1.0, 0.05);
    CHECK(p.construction.epsilon == Approx(0.1));
    const double R = solve_equa_R(0.1, 0.05);
    CHECK(p.closed_form == Approx(pi * pi * 0.99 * std::pow(R, 4)).epsilon(1e-12));
    CHECK(p.value <= p.closed_form + 1e-8);
    CHECK(p.value >= p.flat_value);
    CHECK(p.chain_bound >= p.value);
    CHECK(p.chain_bound == Approx(p.chain_closed_form).epsilon(1e-8));
}

TEST_CASE("flat value sits below the bound on a fine epsilon grid") {
    for (int i = 0; i < 50; ++i) {
        const double eps = 0.3 * i / 49.0;
        const auto p = psi2_energy_eps(0.5, eps, 0.05, 1024);
        CHECK(p.flat_value <= p.value);
        CHECK(p.value <= p.closed_form + 1e-8);
    }
}

TEST_CASE("bound minus flat is fifth order") {
    double ratios[3];
    int k = 0;
    for (double r : {0.1, 0.05, 0.025}) {
        const auto p = psi2_energy(1.0, 1.0, r);
        ratios[k++] = (p.closed_form - p.flat_value) / std::pow(r, 5);
    }
    CHECK(ratios[2] / ratios[0] < 2.0);
    CHECK(ratios[2] > 0.0);
    CHECK(kind_of([] { (void)psi2_energy_eps(1.0, 0.5, 0.05); }) == ErrorKind::domain);
}

TEST_CASE("flat sweeps are exact") {
    const std::vector<double> radii{0.02, 0.04, 0.06, 0.08, 0.1};
    for (double alpha : {0.25, 1.0}) {
        const auto s = scaling_sweep(ChartMetric::flat(alpha), ChartMetric::flat(0.5), radii);
        REQUIRE(s.fitted);
        CHECK(s.exponent == Approx(4.0).epsilon(1e-6));
        CHECK(s.c_fit == Approx(alpha * alpha).epsilon(1e-6));
        CHECK(s.c_formula == Approx(alpha * alpha).epsilon(1e-15));
        CHECK(s.c_relation == Approx(s.c_formula).epsilon(1e-15));
        CHECK(s.monotone);
        for (const auto& row : s.rows) CHECK(std::abs(row.relative_to_formula) < 1e-8);
    }
}

TEST_CASE("Fubini-Study sweep recovers a quarter") {
    const auto fs = ChartMetric::fubini_study();
    const auto s = scaling_sweep(fs, fs, {0.02, 0.04, 0.06, 0.08, 0.1});
    CHECK(s.fitted);
    CHECK(std::abs(s.exponent - 4.0) <= 0.1);
    CHECK(s.c_fit >= 0.225);
    CHECK(s.c_fit <= 0.275);
    CHECK(s.c_formula == Approx(0.25));
    CHECK(s.monotone);
}

TEST_CASE("sweep edge cases") {
    const auto fs = ChartMetric::fubini_study();
    const auto one = scaling_sweep(fs, fs, {0.05});
    CHECK_FALSE(one.fitted);
    CHECK(one.rows.size() == 1);
    CHECK_FALSE(one.note.empty());
    CHECK(kind_of([&] { (void)scaling_sweep(fs, fs, {0.05, 0.02}); }) == ErrorKind::invalid_input);
    try {
        (void)scaling_sweep(ChartMetric::flat(1.0), ChartMetric::flat(0.5), {0.1, 0.5});
        FAIL("expected the large radius to fail");
    } catch (const Error& err) {
        CHECK(std::string(err.what()).find("0.5") != std::string::npos);
    }
}

TEST_CASE("sweeps do not depend on the worker count") {
    const auto fs = ChartMetric::fubini_study();
    SweepOptions one, three;
    one.jobs = 1;
    three.jobs = 3;
    const auto a = scaling_sweep(fs, fs, {0.02, 0.05, 0.08}, one);
    const auto b = scaling_sweep(fs, fs, {0.02, 0.05, 0.08}, three);
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].min_energy == b.rows[i].min_energy);
    CHECK(a.exponent == b.exponent);
}

TEST_CASE("sandwich radii bracket the minimal energy") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coef(-0.3, 0.3);
    const auto fs = ChartMetric::fubini_study();
    const double r = 0.05;
    for (int i = 0; i < 20; ++i) {
        const auto omega0 = ChartMetric::radial_polynomial({0.5, coef(rng), coef(rng)}, 1.0);
        const double varrho = density_lipschitz_bound(omega0, 0.5);
        const auto b = sandwich_bounds(r, omega0, varrho);
        const double exact = min_energy(fs, omega0, r).report.total;
        CHECK(min_energy_chart(fs, b.inner).report.total <= exact);
        CHECK(exact <= min_energy_chart(fs, b.outer).report.total);
    }
}

TEST_CASE("worker count resolution") {
    CHECK(resolve_jobs(3) == 3);
    setenv("HOLE_ENERGY_JOBS", "2", 1);
    CHECK(resolve_jobs(0) == 2);
    unsetenv("HOLE_ENERGY_JOBS");
    CHECK(resolve_jobs(0) >= 1);
}
