#pragma once

#include "hole_energy/geometry.hpp"
#include "hole_energy/grid_solver.hpp"
#include "hole_energy/potential.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hole {

struct MinEnergyOptions {
    int intervals = 4096;
    int grid_resolution = 512;
    bool force_grid = false;
};

struct MinEnergyResult {
    double geodesic_radius = 0.0;
    double chart_radius = 0.0;
    EnergyReport report;
    double gamma = 0.0;
    double free_radius = 0.0;
    double boundary_charge = 0.0;
    std::string method;  // "radial" or "grid"
    std::optional<RadialPotential> potential;
    std::optional<GridField> grid;
};

/// Minimal energy for the geodesic disc of radius r about the chart origin.
/// Radial metrics use the shooting solver, anything else the grid solver.
[[nodiscard]] MinEnergyResult min_energy(const ChartMetric& omega, const ChartMetric& omega0, double r,
                                         const MinEnergyOptions& options = {});
/// Same, with the hole given directly in chart units.
[[nodiscard]] MinEnergyResult min_energy_chart(const ChartMetric& omega, double chart_radius,
                                               const MinEnergyOptions& options = {});

/// R with (R/r)^2 (log(R/r) - 1/2) = eps/(1 - eps).
[[nodiscard]] double solve_equa_R(double epsilon, double r);

struct KappaRoot {
    double R = 0.0;
    bool below_two_r = false;
};

/// R with 2 (kappa - 2) R^2 log(R/r) = 3 r^2 + (kappa - 2) R^2.
[[nodiscard]] KappaRoot solve_kappa_R(double kappa, double r);

struct PerturbationProfile {
    double alpha = 0.0;
    double epsilon = 0.0;
    double hole_radius = 0.0;
    double R = 0.0;
    RadialPotential profile;
};

struct Psi2Report {
    PerturbationProfile construction;
    double omega_part = 0.0;      // -int Psi2 omega_2
    double measure_part = 0.0;    // -int Psi2 (dd^c Psi2 + omega_1)
    double value = 0.0;           // their sum
    double closed_form = 0.0;     // alpha^2 pi^2 (1 - eps^2) R^4
    double chain_bound = 0.0;     // (1 + 2 eps/(1 + eps)) omega_part + measure_part
    double chain_closed_form = 0.0;
    double flat_value = 0.0;      // alpha^2 e^2 pi^2 r^4
};

/// Comparison profile for a density within a factor (1 +- eps) of alpha on
/// the disc of radius 2r, eps = 2 rho r. Throws domain unless 0 <= eps < 1/2.
[[nodiscard]] Psi2Report psi2_energy(double alpha, double rho, double r, int intervals = 4096);
[[nodiscard]] Psi2Report psi2_energy_eps(double alpha, double epsilon, double r, int intervals = 4096);

struct SweepRow {
    double r_geodesic = 0.0;
    double r_chart = 0.0;
    double min_energy = 0.0;
    double free_radius = 0.0;
    double gamma = 0.0;
    double residual = 0.0;        // log-space residual of the fit, zero when not fitted
    double relative_to_formula = 0.0;  // min_energy / (C_formula e^2 pi^2 r^4) - 1
    bool used_in_fit = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    bool fitted = false;
    double exponent = 0.0;
    double fitted_constant = 0.0;  // exp(intercept)
    double c_fit = 0.0;            // fitted_constant / (e^2 pi^2)
    double c_formula = 0.0;        // alpha(0)^2 / (4 beta^2)
    double c_relation = 0.0;       // (alpha(0) / (2 beta))^2
    double varrho = 0.0;
    bool monotone = true;
    std::string note;
};

struct SweepOptions {
    MinEnergyOptions solve;
    int jobs = 0;  // 0 = hardware concurrency
    double fit_limit = 0.1;  // keep radii with r varrho below this
};

[[nodiscard]] SweepResult scaling_sweep(const ChartMetric& omega, const ChartMetric& omega0,
                                        const std::vector<double>& radii, const SweepOptions& options = {});

/// Workers for parallel loops: explicit value, else HOLE_ENERGY_JOBS, else hardware.
[[nodiscard]] int resolve_jobs(int requested);

}  // namespace hole
