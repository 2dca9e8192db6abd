#pragma once

#include "hole_energy/geometry.hpp"

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace hole {

/// One smooth stretch of a radial potential. `flux` holds t U'(t), the
/// dd^c-mass of the disc of radius t; it may jump between pieces.
struct RadialPiece {
    std::vector<double> t;
    std::vector<double> weight;  // Simpson weights in t
    std::vector<double> value;
    std::vector<double> flux;
};

enum class Side { left, right };

/// Sampled rotation-invariant potential U(t) on [0, outer_radius]; constant beyond.
class RadialPotential {
public:
    using Profile = std::function<double(double t, std::size_t piece)>;

    RadialPotential() = default;
    RadialPotential(std::vector<RadialPiece> pieces, double hole_radius, double free_radius);

    /// Graded Simpson pieces between consecutive breakpoints, filled from
    /// closed-form value and flux profiles.
    static RadialPotential sample(const std::vector<double>& breakpoints, int intervals,
                                  const Profile& value, const Profile& flux, double hole_radius,
                                  double free_radius);

    [[nodiscard]] const std::vector<RadialPiece>& pieces() const noexcept { return pieces_; }
    [[nodiscard]] double hole_radius() const noexcept { return hole_radius_; }
    [[nodiscard]] double free_radius() const noexcept { return free_radius_; }
    [[nodiscard]] double outer_radius() const;
    [[nodiscard]] std::vector<double> breakpoints() const;
    [[nodiscard]] std::size_t node_count() const;

    [[nodiscard]] std::size_t piece_index(double t, Side side = Side::right) const;
    [[nodiscard]] double value_at(double t) const;
    [[nodiscard]] double flux_at(double t, Side side = Side::right) const;
    /// Evaluation restricted to one piece, used when resampling onto a finer partition.
    [[nodiscard]] double value_in(std::size_t piece, double t) const;
    [[nodiscard]] double flux_in(std::size_t piece, double t) const;

    /// U(r), the constant value on the hole boundary for radial minimizers.
    [[nodiscard]] double gamma() const { return value_at(hole_radius_); }
    /// Jump of t U'(t) across the hole boundary.
    [[nodiscard]] double boundary_charge() const;
    [[nodiscard]] double exterior_value() const;
    [[nodiscard]] double max_value() const;
    [[nodiscard]] double min_value() const;

    [[nodiscard]] RadialPotential shifted(double c) const;
    [[nodiscard]] RadialPotential scaled(double s) const;

private:
    std::vector<RadialPiece> pieces_;
    double hole_radius_ = 0.0;
    double free_radius_ = 0.0;
};

/// sum_k w_k U_k resampled on the union of all kinks.
[[nodiscard]] RadialPotential combine(const std::vector<std::pair<double, RadialPotential>>& terms,
                                      int intervals = 4096);

struct CircleAtom {
    double radius = 0.0;
    double mass = 0.0;
};

/// Density of the absolutely continuous part on one piece, relative to i dz ^ dzbar.
struct AcPiece {
    std::vector<double> t;
    std::vector<double> weight;
    std::vector<double> density;
};

/// mu = (ac part) + (mass on circles) + (mass outside the sampled disc).
class MeasureDecomposition {
public:
    MeasureDecomposition(RadialWeight weight, std::vector<AcPiece> pieces,
                         std::vector<CircleAtom> atoms, double exterior_mass);

    [[nodiscard]] const RadialWeight& weight() const noexcept { return weight_; }
    [[nodiscard]] const std::vector<AcPiece>& pieces() const noexcept { return pieces_; }
    [[nodiscard]] const std::vector<CircleAtom>& atoms() const noexcept { return atoms_; }
    [[nodiscard]] double exterior_mass() const noexcept { return exterior_mass_; }
    [[nodiscard]] double outer_radius() const;

    /// Beyond the sampled disc the measure coincides with omega.
    [[nodiscard]] double ac_density(double t) const;
    [[nodiscard]] double ac_mass() const;
    [[nodiscard]] double atom_mass() const;
    [[nodiscard]] double total_mass() const;

private:
    RadialWeight weight_;
    std::vector<AcPiece> pieces_;
    std::vector<CircleAtom> atoms_;
    double exterior_mass_ = 0.0;
};

struct EnergyReport {
    double integral_against_omega = 0.0;  // -int U omega
    double integral_against_mu = 0.0;     // -int U dmu
    double total = 0.0;
};

inline constexpr double default_tolerance = 1e-10;

/// int U omega, with the region past the sampled disc carrying U's exterior value.
[[nodiscard]] double omega_integral(const RadialPotential& u, const RadialWeight& weight);

/// int U dmu over the ac part, the circles and the exterior.
[[nodiscard]] double measure_integral(const RadialPotential& u, const MeasureDecomposition& mu);

/// U - int U omega; throws invalid_input on non-finite samples.
[[nodiscard]] RadialPotential star_normalize(const RadialPotential& u, const RadialWeight& weight);
/// U - max U.
[[nodiscard]] RadialPotential max_normalize(const RadialPotential& u);

/// mu = omega + dd^c U. Throws not_subharmonic if any part is negative beyond `tolerance`.
[[nodiscard]] MeasureDecomposition measure_from_potential(const RadialPotential& u,
                                                          const RadialWeight& weight,
                                                          double tolerance = default_tolerance);

/// Radial Poisson solve: flux from the cumulative mass, then max-normalized.
[[nodiscard]] RadialPotential potential_from_measure(const MeasureDecomposition& mu);

/// Both integrals of the energy functional. Throws inconsistent_pair unless
/// U is the max-normalized potential of mu.
[[nodiscard]] EnergyReport energy(const RadialPotential& u, const MeasureDecomposition& mu);
[[nodiscard]] EnergyReport energy(const RadialPotential& u, const RadialWeight& weight);

enum class Ordering { ordered_holds, ordered_violated, incomparable };

struct OrderingCertificate {
    Ordering status = Ordering::incomparable;
    double energy_sigma = 0.0;
    double energy_eta = 0.0;
    double max_violation = 0.0;  // sup (U_sigma - U_eta), positive when not ordered
};

/// If U_sigma <= U_eta everywhere, energy(eta) <= energy(sigma) must hold.
[[nodiscard]] OrderingCertificate compare_energies(const RadialPotential& u_sigma,
                                                   const RadialPotential& u_eta,
                                                   const RadialWeight& weight,
                                                   double tolerance = 1e-9);

}  // namespace hole
