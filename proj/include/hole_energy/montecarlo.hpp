#pragma once

#include "hole_energy/geometry.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace hole {

/// Gaussian sections of O(n) on P^1: s = sum_k a_k norms_k z^k with a_k iid
/// standard complex Gaussians (E|a_k|^2 = 1).
struct EnsembleSpec {
    int n = 0;
    std::vector<double> basis_norms;
    std::uint64_t seed = 0;
    std::size_t samples = 0;

    /// norms_k = sqrt((n + 1) binom(n, k)), orthonormal for the Fubini-Study inner product.
    static EnsembleSpec su2(int n, std::uint64_t seed, std::size_t samples);
};

/// Standard complex Gaussians a_0..a_n for one sample; depends only on (seed, index).
[[nodiscard]] std::vector<std::complex<double>> sample_gaussians(const EnsembleSpec& spec, std::uint64_t index);
/// Monomial coefficients a_k norms_k of the sampled section.
[[nodiscard]] std::vector<std::complex<double>> sample_section(const EnsembleSpec& spec, std::uint64_t index);

/// Zeros of sum_k c_k z^k in |z| < rho, counted with multiplicity, by the
/// winding number along the circle. Refines until every phase step is below
/// pi/2; near-contour zeros trigger up to three radius jitters of 1e-6,
/// after which a contour error is raised.
[[nodiscard]] int count_zeros_in_disc(const std::vector<std::complex<double>>& coeffs, double rho);

/// Cauchy bound: every root lies in |z| < 1 + max_k |c_k / c_deg|.
[[nodiscard]] double root_bound(const std::vector<std::complex<double>>& coeffs);

struct HoleEstimate {
    int n = 0;
    double r_geodesic = 0.0;
    double r_chart = 0.0;
    std::size_t hits = 0;       // samples with at least one zero in the disc
    std::size_t samples = 0;    // samples that produced a count
    std::size_t discarded = 0;  // contour failures
    double p_hat = 1.0;
    double wilson_lo = 1.0;
    double wilson_hi = 1.0;
    double rate = 0.0;  // -log(p_hat)/n^2, NaN for n = 0
    std::uint64_t seed = 0;
};

struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};

[[nodiscard]] WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

/// Hole probability of the chart disc |z| < rho about the origin.
[[nodiscard]] HoleEstimate hole_probability_chart(const EnsembleSpec& spec, double rho, int jobs = 0);
/// Same with the radius given as a geodesic radius under omega0.
[[nodiscard]] HoleEstimate hole_probability(const EnsembleSpec& spec, double r_geodesic, const ChartMetric& omega0,
                                            int jobs = 0);

struct RateTrendOptions {
    double target = 1.0;                // n^2 min I per row when no fixed radius is given
    std::optional<double> r_geodesic;   // fixed radius for every n
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    int jobs = 0;
};

struct RateTrendRow {
    int n = 0;
    double r_geodesic = 0.0;
    double r_chart = 0.0;
    HoleEstimate estimate;
    double rate = 0.0;
    double min_energy = 0.0;
    double ratio = 0.0;     // rate / min_energy
    double ratio_se = 0.0;  // delta-method standard error
    bool flagged = false;   // p_hat outside [1e-3, 0.99]
};

struct RateTrend {
    std::vector<RateTrendRow> rows;
    bool within_factor_three = true;
    bool drifts_toward = true;
};

/// Fubini-Study ensemble on both sides. The drift check asks |ratio - 1| to be
/// nonincreasing up to two combined standard errors and strictly smaller at
/// the largest n than at the smallest.
[[nodiscard]] RateTrend rate_trend(const std::vector<int>& ns, const RateTrendOptions& options = {});

/// Geodesic radius whose Fubini-Study minimal energy equals `energy`.
[[nodiscard]] double radius_for_energy(double energy);

}  // namespace hole
