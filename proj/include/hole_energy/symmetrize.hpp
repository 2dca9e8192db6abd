#pragma once

#include "hole_energy/geometry.hpp"
#include "hole_energy/grid_solver.hpp"
#include "hole_energy/potential.hpp"

#include <functional>

namespace hole {

/// Polar sampling t_k = k dt (k <= K), theta_j = 2 pi j / N shared by a field
/// and its circular average.
struct PolarGrid {
    double cutoff = 0.0;
    int radial_intervals = 0;  // K, even
    int angles = 0;            // N
};

/// Resolution matched to a grid field: dt = h/2, about four angles per h of arc at the cutoff.
[[nodiscard]] PolarGrid polar_grid_for(const GridField& field, double cutoff);

/// Circular average about the chart origin of a field supported in |z| <= cutoff.
/// Throws not_localized if the field is nonzero beyond the cutoff.
[[nodiscard]] RadialPotential symmetrize(const GridField& u, const ChartMetric& metric, double cutoff,
                                         double tolerance = 1e-12);
[[nodiscard]] RadialPotential symmetrize(const GridField& u, const ChartMetric& metric,
                                         const PolarGrid& polar, double tolerance = 1e-12);

/// -2 int f omega + (1/2pi) int |grad f|^2 on the polar sampling, with radial
/// and angular differences. For rotation-invariant omega, averaging over
/// theta cannot increase it.
[[nodiscard]] double polar_energy(const std::function<double(double, double)>& f,
                                  const ChartMetric& metric, const PolarGrid& polar);
[[nodiscard]] double polar_energy(const GridField& u, const ChartMetric& metric, const PolarGrid& polar);
[[nodiscard]] double polar_energy(const RadialPotential& u, const ChartMetric& metric,
                                  const PolarGrid& polar);

}  // namespace hole
