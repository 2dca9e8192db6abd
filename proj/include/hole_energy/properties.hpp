#pragma once

#include "hole_energy/geometry.hpp"
#include "hole_energy/grid_solver.hpp"
#include "hole_energy/potential.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace hole::properties {

/// Outcome of a randomized invariant check. `worst` is the largest excess
/// over the allowed bound (negative when every case holds with room).
struct SuiteReport {
    std::string name;
    int cases = 0;
    int violations = 0;
    double worst = 0.0;
};

/// Flat with alpha in [0.25, 1] or Fubini-Study, chosen at random.
[[nodiscard]] RadialWeight random_weight(std::mt19937_64& rng);

/// Probability measure equal to omega past a random radius b, with a fraction
/// of the inner mass moved onto one to three circles inside b.
[[nodiscard]] MeasureDecomposition random_measure(const RadialWeight& weight, std::mt19937_64& rng,
                                                  int intervals = 256);

/// max(U, c), resampled with breakpoints at the crossings.
[[nodiscard]] RadialPotential truncate_below(const RadialPotential& u, double c, int intervals = 1024);

/// Random field on [-T, T]^2 made of smooth negative bumps inside |z| < 0.95 cutoff.
[[nodiscard]] GridField random_localized_field(const ChartMetric& metric, double cutoff, int M,
                                               std::mt19937_64& rng);

/// U_sigma <= U_eta built as s max(U_sigma, c); checks I(eta) <= I(sigma) + 1e-9.
[[nodiscard]] SuiteReport ordering_suite(int pairs, std::uint64_t seed);
/// I(s mu1 + (1 - s) mu0) <= s I(mu1) + (1 - s) I(mu0) + 1e-9 for s in {1/4, 1/2, 3/4}.
[[nodiscard]] SuiteReport convexity_suite(int mixtures, std::uint64_t seed);
/// Circular averaging never raises the polar energy of a localized field.
[[nodiscard]] SuiteReport symmetrization_suite(int fields, std::uint64_t seed);
/// Measures recovered from random potentials and from minimizers have mass 1 within 1e-6.
[[nodiscard]] SuiteReport measure_total_suite(int measures, std::uint64_t seed);

}  // namespace hole::properties
