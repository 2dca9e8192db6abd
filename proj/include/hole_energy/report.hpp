#pragma once

#include "hole_energy/energy.hpp"
#include "hole_energy/geometry.hpp"
#include "hole_energy/grid_solver.hpp"
#include "hole_energy/montecarlo.hpp"
#include "hole_energy/potential.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace hole::report {

using Json = nlohmann::ordered_json;

/// Deterministic text: two-space indent, doubles with 17 significant digits,
/// non-finite numbers as null.
[[nodiscard]] std::string dump(const Json& j);

/// {"kind": "flat" | "fubini_study" | "polynomial", "alpha", "coefficients", "extent"}.
[[nodiscard]] Json metric_to_json(const ChartMetric& metric);
/// Throws ErrorKind::config on unknown kinds or missing parameters.
[[nodiscard]] ChartMetric metric_from_json(const Json& j);

[[nodiscard]] Json energy_to_json(const EnergyReport& e);
/// {grid, samples, atoms, hole_radius, free_radius, ...}; samples only when asked.
[[nodiscard]] Json potential_to_json(const RadialPotential& u, bool samples);
[[nodiscard]] Json measure_to_json(const MeasureDecomposition& mu);
[[nodiscard]] Json min_energy_to_json(const MinEnergyResult& result, bool samples);
[[nodiscard]] Json grid_to_json(const GridField& field);
[[nodiscard]] Json psi2_to_json(const Psi2Report& r, bool samples);
[[nodiscard]] Json sweep_to_json(const SweepResult& s);
[[nodiscard]] Json estimate_to_json(const HoleEstimate& e);
[[nodiscard]] Json rate_trend_to_json(const RateTrend& t);

/// t, U, tU' per node.
void potential_csv(const RadialPotential& u, std::ostream& out);
void sweep_csv(const SweepResult& s, std::ostream& out);
void rate_trend_csv(const RateTrend& t, std::ostream& out);
void estimate_csv(const HoleEstimate& e, std::ostream& out);

}  // namespace hole::report
