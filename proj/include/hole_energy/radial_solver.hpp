#pragma once

#include "hole_energy/geometry.hpp"
#include "hole_energy/potential.hpp"

namespace hole {

inline constexpr int default_radial_intervals = 4096;

/// Closed-form minimizer for constant density alpha and hole radius r:
/// -alpha pi t^2 inside, alpha pi (2 e r^2 log(t/r) - t^2) up to sqrt(e) r, zero beyond.
[[nodiscard]] RadialPotential flat_minimizer(double alpha, double r,
                                             int intervals = default_radial_intervals);

struct ShootingDiagnostics {
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int bisection_steps = 0;
    int newton_steps = 0;
    double residual = 0.0;  // |F(R)| at the returned root
};

/// F(R) = int_0^r m(s)/s ds - int_r^R (m(R) - m(s))/s ds, i.e. U(0) for the
/// profile that fits smoothly to zero at R. Strictly decreasing in R.
[[nodiscard]] double shooting_function(const RadialWeight& weight, double r, double R);

/// Root of the shooting function; throws no_free_boundary without a sign change.
[[nodiscard]] double solve_free_radius(const RadialWeight& weight, double r,
                                       ShootingDiagnostics* diagnostics = nullptr);

/// Constrained minimizer for a rotation-invariant weight by shooting on the free radius.
[[nodiscard]] RadialPotential radial_minimizer(const RadialWeight& weight, double r,
                                               int intervals = default_radial_intervals,
                                               ShootingDiagnostics* diagnostics = nullptr);

}  // namespace hole
