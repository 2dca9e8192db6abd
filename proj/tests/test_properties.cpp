#include "hole_energy/potential.hpp"
#include "hole_energy/properties.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace hole;
using namespace hole::properties;
using doctest::Approx;

TEST_CASE("random measures are probability measures") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 40; ++i) {
        const auto w = random_weight(rng);
        const auto mu = random_measure(w, rng);
        CHECK(mu.total_mass() == Approx(1.0).epsilon(1e-9));
        CHECK(mu.exterior_mass() >= 0.0);
        for (const auto& a : mu.atoms()) CHECK(a.mass >= 0.0);
    }
}

TEST_CASE("truncation from below dominates the original potential") {
    std::mt19937_64 rng(3);
    const auto w = random_weight(rng);
    const auto u = potential_from_measure(random_measure(w, rng));
    const double c = 0.5 * u.min_value();
    const auto v = truncate_below(u, c);
    for (int k = 0; k <= 400; ++k) {
        const double t = u.outer_radius() * k / 400.0;
        CHECK(v.value_at(t) >= std::max(u.value_at(t), c) - 1e-9);
        CHECK(v.value_at(t) <= std::max(u.value_at(t), c) + 1e-9);
    }
}

TEST_CASE("random localized fields vanish past the cutoff") {
    std::mt19937_64 rng(8);
    const auto field = random_localized_field(ChartMetric::flat(1.0), 0.2, 64, rng);
    double inner_min = 0.0;
    for (int i = 0; i <= field.resolution(); ++i)
        for (int j = 0; j <= field.resolution(); ++j) {
            const double v = field.values[field.index(i, j)];
            CHECK(v <= 0.0);
            if (std::abs(field.node(i, j)) >= 0.2) CHECK(v == 0.0);
            inner_min = std::min(inner_min, v);
        }
    CHECK(inner_min < 0.0);
}

TEST_CASE("ordering suite") {
    const auto r = ordering_suite(25, 1);
    CHECK(r.cases == 25);
    CHECK(r.violations == 0);
}

TEST_CASE("convexity suite") {
    const auto r = convexity_suite(15, 2);
    CHECK(r.cases == 15);
    CHECK(r.violations == 0);
}

TEST_CASE("symmetrization suite") {
    const auto r = symmetrization_suite(10, 3);
    CHECK(r.violations == 0);
}

TEST_CASE("measure totals suite") {
    const auto r = measure_total_suite(12, 4);
    CHECK(r.violations == 0);
    CHECK(r.worst <= 0.0);
}
