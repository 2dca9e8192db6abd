#include "hole_energy/errors.hpp"
#include "hole_energy/grid_solver.hpp"
#include "hole_energy/potential.hpp"
#include "hole_energy/radial_solver.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace hole;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
const double sqrt_e = std::sqrt(std::numbers::e);

double closed_form(double alpha, double r, double t) {
    if (t <= r) return -alpha * pi * t * t;
    if (t <= sqrt_e * r) return alpha * pi * (2.0 * std::numbers::e * r * r * std::log(t / r) - t * t);
    return 0.0;
}

double sup_error(const GridField& g, const std::function<double(double)>& u) {
    double sup = 0.0;
    for (int j = 0; j < g.side(); ++j)
        for (int i = 0; i < g.side(); ++i)
            sup = std::max(sup, std::abs(g.values[g.index(i, j)] - u(std::abs(g.node(i, j)))));
    return sup;
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

TEST_CASE("flat minimizer closed form") {
    const auto u = flat_minimizer(1.0, 0.1);
    CHECK(u.gamma() == Approx(-0.031415927).epsilon(1e-8));
    CHECK(u.free_radius() == Approx(0.164872127).epsilon(1e-8));
    CHECK(u.boundary_charge() == Approx(0.170794684).epsilon(1e-8));
    CHECK(u.value_at(0.0) == 0.0);
    CHECK(std::abs(u.value_at(sqrt_e * 0.1)) < 1e-15);
    CHECK(std::abs(u.flux_at(sqrt_e * 0.1, Side::left)) < 1e-14);
    for (double t : {0.02, 0.07, 0.1, 0.12, 0.16, 0.3}) CHECK(u.value_at(t) == Approx(closed_form(1.0, 0.1, t)).epsilon(1e-12).scale(1e-12));
}

TEST_CASE("shooting reproduces the flat minimizer") {
    for (double alpha : {0.25, 1.0}) {
        const RadialWeight w(ChartMetric::flat(alpha));
        ShootingDiagnostics diag;
        const auto u = radial_minimizer(w, 0.1, default_radial_intervals, &diag);
        CHECK(u.free_radius() / 0.1 == Approx(sqrt_e).epsilon(1e-10));
        double sup = 0.0;
        for (const auto& p : u.pieces())
            for (double t : p.t) sup = std::max(sup, std::abs(u.value_at(t) - closed_form(alpha, 0.1, t)));
        CHECK(sup < 1e-10);
        CHECK(diag.bracket_lo <= u.free_radius());
        CHECK(u.free_radius() <= diag.bracket_hi);
        CHECK(diag.residual < 1e-12);
    }
}

TEST_CASE("smooth fit at the free boundary") {
    for (const auto& m : {ChartMetric::fubini_study(), ChartMetric::radial_polynomial({1.0, 1.0}, 2.0)}) {
        const RadialWeight w(m);
        const auto u = radial_minimizer(w, 0.05);
        const double R = u.free_radius();
        CHECK(std::abs(u.value_at(R)) <= 1e-12);
        CHECK(std::abs(u.flux_at(R, Side::left) / R) <= 1e-8);
        CHECK(measure_from_potential(u, w).total_mass() == Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("Fubini-Study minimal energy near the flat formula") {
    const RadialWeight w(ChartMetric::fubini_study());
    const double r = 0.05;
    const double total = energy(radial_minimizer(w, r), w).total;
    const double flat = std::exp(2.0) * std::pow(r, 4) / 4.0;
    CHECK(std::abs(total / flat - 1.0) <= 5.0 * r);
}

TEST_CASE("increasing density shrinks the free radius") {
    const RadialWeight w(ChartMetric::radial_polynomial({1.0, 1.0}, 2.0));
    const double r = 0.05;
    const double R = solve_free_radius(w, r);
    CHECK(R < sqrt_e * r);
    CHECK(R > r);
    // Monotone decreasing shooting function around the root.
    double prev = shooting_function(w, r, 0.9 * R);
    for (double f = 0.95; f <= 1.1; f += 0.05) {
        const double cur = shooting_function(w, r, f * R);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(shooting_function(w, r, 0.95 * R) > 0.0);
    CHECK(shooting_function(w, r, 1.05 * R) < 0.0);
}

TEST_CASE("hole too large for a probability measure") {
    const RadialWeight w(ChartMetric::flat(1.0));
    CHECK(kind_of([&] { (void)radial_minimizer(w, 0.3); }) == ErrorKind::no_free_boundary);
    CHECK(kind_of([&] { (void)flat_minimizer(1.0, 0.3); }) == ErrorKind::no_free_boundary);
}

TEST_CASE("envelope with the minimizer's boundary value reproduces it") {
    const double alpha = 1.0, r = 0.1;
    const auto g = envelope_grid(EnvelopeProblem::constant_data(ChartMetric::flat(alpha), r, -alpha * pi * r * r), 512);
    CHECK(sup_error(g, [&](double t) { return closed_form(alpha, r, t); }) <= 5e-3 * alpha * pi * r * r);
    CHECK(g.residual < 1e-9);
    CHECK(g.max_value() <= 0.0);
    CHECK(maximality_violations(g, 100, 7) == 0);
}

TEST_CASE("very negative boundary data: the hole interior is never active") {
    const double alpha = 1.0, r = 0.1, u = -1e6;
    const auto g = envelope_grid(EnvelopeProblem::constant_data(ChartMetric::flat(alpha), r, u), 64);
    CHECK(g.max_value() <= 0.0);
    const int c = g.resolution() / 2;
    CHECK(g.values[g.index(c, c)] == Approx(u + alpha * pi * r * r).epsilon(1e-12));
    for (std::size_t k = 0; k < g.values.size(); ++k)
        if (g.masks[k] & mask::inside_hole) CHECK(g.values[k] >= u);
}

TEST_CASE("free minimizer on the grid") {
    const double r = 0.1;
    const RadialWeight w(ChartMetric::flat(1.0));
    const auto oracle = flat_minimizer(1.0, r);
    const auto g = envelope_grid(EnvelopeProblem::free(ChartMetric::flat(1.0), r), 512);
    CHECK(grid_energy(g) == Approx(energy(oracle, w).total).epsilon(1e-2));
    CHECK(g.gamma == Approx(oracle.gamma()).epsilon(5e-3));
    CHECK(sup_error(g, [&](double t) { return oracle.value_at(t); }) <= 5e-3 * std::abs(oracle.gamma()));
    CHECK(maximality_violations(g, 100, 3) == 0);
}

TEST_CASE("grid minimal energy grows with the hole") {
    double prev = 0.0;
    for (double r : {0.06, 0.08, 0.1}) {
        const double cur = grid_energy(envelope_grid(EnvelopeProblem::free(ChartMetric::fubini_study(), r), 128));
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("sweep cap raises a convergence error") {
    SolverOptions opts;
    opts.max_sweeps = 3;
    CHECK(kind_of([&] { (void)envelope_grid(EnvelopeProblem::free(ChartMetric::flat(1.0), 0.1), 128, opts); }) ==
          ErrorKind::convergence);
}

TEST_CASE("box beyond the chart is a domain error") {
    CHECK(kind_of([] { (void)envelope_grid(EnvelopeProblem::free(ChartMetric::flat(1.0, 0.5), 0.1), 64); }) ==
          ErrorKind::domain);
}

TEST_CASE("grid dumps round trip") {
    const auto g = envelope_grid(EnvelopeProblem::free(ChartMetric::flat(1.0), 0.1), 64);
    std::stringstream bin;
    write_binary(g, bin);
    CHECK(bin.str().size() == 3 * sizeof(double) + g.values.size() * sizeof(double));
    const auto back = read_binary(bin, ChartMetric::flat(1.0));
    CHECK(back.resolution() == 64);
    CHECK(back.half_width() == g.half_width());
    CHECK(back.values == g.values);
    std::stringstream csv;
    write_csv(g, csv);
    int lines = 0;
    for (std::string line; std::getline(csv, line);) ++lines;
    CHECK(lines == g.side());
}
