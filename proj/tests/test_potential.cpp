#include "hole_energy/errors.hpp"
#include "hole_energy/potential.hpp"
#include "hole_energy/radial_solver.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace hole;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double e = std::numbers::e;

RadialPotential constant(double c, double outer = 1.0) {
    return RadialPotential::sample({0.0, outer}, 64, [c](double, std::size_t) { return c; },
                                   [](double, std::size_t) { return 0.0; }, 0.0, 0.0);
}

double sup_gap(const RadialPotential& a, const RadialPotential& b) {
    double gap = 0.0;
    for (const auto& p : a.pieces())
        for (double t : p.t) gap = std::max(gap, std::abs(a.value_at(t) - b.value_at(t)));
    return gap;
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

TEST_CASE("star normalization of constants is zero") {
    const RadialWeight w(ChartMetric::flat(1.0));
    CHECK(star_normalize(constant(0.0), w).max_value() == Approx(0.0));
    const auto shifted = star_normalize(constant(-5.0), w);
    CHECK(std::abs(shifted.max_value()) < 1e-12);
    CHECK(std::abs(shifted.min_value()) < 1e-12);
}

TEST_CASE("star normalization lifts the flat minimizer by its omega integral") {
    const RadialWeight w(ChartMetric::flat(1.0));
    const auto u = flat_minimizer(1.0, 0.1);
    const auto s = star_normalize(u, w);
    const double lift = (e * e - 2.0 * e) * pi * pi * 1e-4;
    for (double t : {0.0, 0.05, 0.1, 0.15, 0.3})
        CHECK(s.value_at(t) - u.value_at(t) == Approx(lift).epsilon(1e-9));
    CHECK(max_normalize(s).max_value() == Approx(0.0).scale(1e-12));
    CHECK(sup_gap(max_normalize(s), u) < 1e-14);
}

TEST_CASE("non-finite samples are invalid input") {
    CHECK(kind_of([] { (void)constant(std::numeric_limits<double>::quiet_NaN()); }) == ErrorKind::invalid_input);
}

TEST_CASE("measure of the flat minimizer") {
    const RadialWeight w(ChartMetric::flat(1.0));
    const auto mu = measure_from_potential(flat_minimizer(1.0, 0.1), w);
    REQUIRE(mu.atoms().size() == 1);
    CHECK(mu.atoms()[0].radius == Approx(0.1).epsilon(1e-15));
    CHECK(mu.atoms()[0].mass == Approx(0.170794684).epsilon(1e-8));
    CHECK(std::abs(mu.ac_density(0.05)) < 1e-8);
    CHECK(std::abs(mu.ac_density(0.15)) < 1e-8);
    CHECK(mu.ac_density(0.2) == Approx(1.0));
    CHECK(mu.total_mass() == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero potential has measure omega") {
    const RadialWeight w(ChartMetric::fubini_study());
    const auto mu = measure_from_potential(constant(0.0), w);
    CHECK(mu.atoms().empty());
    for (std::size_t i = 1; i < mu.pieces()[0].t.size(); i += 7) {
        const double t = mu.pieces()[0].t[i];
        CHECK(mu.ac_density(t) == Approx(w.alpha(t)).epsilon(1e-12));
    }
    CHECK(mu.total_mass() == Approx(1.0).epsilon(1e-7));
}

TEST_CASE("logarithmic kink carries its Lelong mass") {
    // U = c log(max(t, rho)/T) on [0, T]: flux c on (rho, T), so an atom c at rho
    // and c less mass beyond the sampled disc.
    const RadialWeight w(ChartMetric::flat(1.0));
    const double c = 0.05, rho = 0.1, T = 0.3;
    const auto u = RadialPotential::sample(
        {0.0, rho, T}, 512, [&](double t, std::size_t) { return c * std::log(std::max(t, rho) / T); },
        [&](double, std::size_t k) { return k == 0 ? 0.0 : c; }, rho, T);
    const auto mu = measure_from_potential(u, w);
    REQUIRE(mu.atoms().size() == 1);
    CHECK(mu.atoms()[0].radius == Approx(rho));
    CHECK(mu.atoms()[0].mass == Approx(c).epsilon(1e-10));
    CHECK(mu.exterior_mass() == Approx(1.0 - w.mass(T) - c).epsilon(1e-10));
    CHECK(mu.ac_density(0.2) == Approx(1.0).epsilon(1e-8));
    CHECK(mu.total_mass() == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("a too steep potential is not omega-subharmonic") {
    const RadialWeight w(ChartMetric::flat(1.0));
    const auto doubled = flat_minimizer(1.0, 0.1).scaled(2.0);
    CHECK(kind_of([&] { (void)measure_from_potential(doubled, w); }) == ErrorKind::not_subharmonic);
}

TEST_CASE("flat energy components") {
    const RadialWeight w(ChartMetric::flat(1.0));
    const auto rep = energy(flat_minimizer(1.0, 0.1), w);
    CHECK(rep.integral_against_omega == Approx((e * e - 2.0 * e) * pi * pi * 1e-4).epsilon(1e-8));
    CHECK(rep.integral_against_mu == Approx(2.0 * e * pi * pi * 1e-4).epsilon(1e-8));
    CHECK(rep.total == Approx(e * e * pi * pi * 1e-4).epsilon(1e-8));
    CHECK(rep.total == Approx(7.29270e-3).epsilon(1e-5));
    CHECK(rep.total == rep.integral_against_omega + rep.integral_against_mu);
}

TEST_CASE("zero potential has zero energy") {
    const RadialWeight w(ChartMetric::flat(1.0));
    const auto rep = energy(constant(0.0, 0.3), w);
    CHECK(rep.integral_against_omega == 0.0);
    CHECK(rep.integral_against_mu == 0.0);
    CHECK(rep.total == 0.0);
}

TEST_CASE("energy of a scaled potential is quadratic in the scale") {
    // mu_s = omega + s dd^c U gives I(sU) = (2s - s^2) A + s^2 M with A = -int U omega, M = -int U dmu.
    const RadialWeight w(ChartMetric::flat(1.0));
    const auto u = flat_minimizer(1.0, 0.1);
    const auto base = energy(u, w);
    const double A = base.integral_against_omega, M = base.integral_against_mu;
    for (double s : {0.25, 0.5, 0.75}) {
        const auto rep = energy(u.scaled(s), w);
        CHECK(rep.total == Approx((2.0 * s - s * s) * A + s * s * M).epsilon(1e-9));
    }
}

TEST_CASE("mismatched pair is rejected") {
    const RadialWeight w(ChartMetric::flat(1.0));
    const auto mu = measure_from_potential(constant(0.0, 0.35), w);
    CHECK(kind_of([&] { (void)energy(flat_minimizer(1.0, 0.1), mu); }) == ErrorKind::inconsistent_pair);
    CHECK(kind_of([&] { (void)energy(flat_minimizer(1.0, 0.1).shifted(-0.01), w); }) == ErrorKind::inconsistent_pair);
}

TEST_CASE("ordering certificates") {
    const RadialWeight w(ChartMetric::flat(1.0));
    const auto u = flat_minimizer(1.0, 0.1);
    auto cert = compare_energies(u, constant(0.0, 0.3), w);
    CHECK(cert.status == Ordering::ordered_holds);
    CHECK(cert.energy_eta == 0.0);
    cert = compare_energies(u, u.scaled(0.5), w);
    CHECK(cert.status == Ordering::ordered_holds);
    CHECK(cert.energy_eta < cert.energy_sigma);
    cert = compare_energies(u.scaled(0.5), flat_minimizer(1.0, 0.07), w);
    CHECK(cert.status == Ordering::incomparable);
    CHECK(cert.max_violation > 0.0);
}

TEST_CASE("measure recovery inverts the potential") {
    for (const auto& m : {ChartMetric::flat(0.4), ChartMetric::fubini_study()}) {
        const RadialWeight w(m);
        const auto u = radial_minimizer(w, 0.08);
        const auto back = potential_from_measure(measure_from_potential(u, w));
        CHECK(sup_gap(u, back) < 1e-8);
        CHECK(back.free_radius() == Approx(u.free_radius()).epsilon(1e-3));
    }
}

TEST_CASE("combination is linear") {
    const auto a = flat_minimizer(1.0, 0.1);
    const auto b = flat_minimizer(1.0, 0.05);
    const auto c = combine({{0.3, a}, {0.7, b}});
    for (double t : {0.0, 0.03, 0.07, 0.1, 0.13, 0.2})
        CHECK(c.value_at(t) == Approx(0.3 * a.value_at(t) + 0.7 * b.value_at(t)).epsilon(1e-10).scale(1e-8));
}
