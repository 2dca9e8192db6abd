#pragma once

#include <complex>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace hole::acceptance {

struct CriterionResult {
    std::string id;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    int jobs = 0;
    std::size_t mc_samples = 10000;
    std::size_t trend_samples = 100000;
    std::uint64_t seed = 20240611;
};

/// Zeros in |z| < rho from the eigenvalues of the companion matrix.
[[nodiscard]] int companion_zero_count(const std::vector<std::complex<double>>& coeffs, double rho);

[[nodiscard]] CriterionResult flat_closed_form();
[[nodiscard]] CriterionResult energy_decomposition();
[[nodiscard]] CriterionResult grid_oracle_equivalence();
[[nodiscard]] CriterionResult scaling_law(int jobs = 0);
[[nodiscard]] CriterionResult free_radius_equations();
[[nodiscard]] CriterionResult upper_bound_coherence();
[[nodiscard]] CriterionResult property_suites(std::uint64_t seed, int jobs = 0);
[[nodiscard]] CriterionResult monte_carlo(const Options& options);
[[nodiscard]] CriterionResult rate_trend_check(const Options& options);

/// Every criterion in order. `progress` sees each result as it completes.
[[nodiscard]] std::vector<CriterionResult> run_all(const Options& options,
                                                   const std::function<void(const CriterionResult&)>& progress = {});

}  // namespace hole::acceptance
