#include "hole_energy/acceptance.hpp"

#include "hole_energy/energy.hpp"
#include "hole_energy/errors.hpp"
#include "hole_energy/grid_solver.hpp"
#include "hole_energy/montecarlo.hpp"
#include "hole_energy/properties.hpp"
#include "hole_energy/radial_solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>

namespace hole::acceptance {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double e = std::numbers::e;

std::string format(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

/// Runs body, catching library errors as failures, and stamps the wall time.
CriterionResult timed(std::string id, std::string title, double limit_seconds,
                      const std::function<void(CriterionResult&)>& body) {
    CriterionResult out;
    out.id = std::move(id);
    out.title = std::move(title);
    const auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& err) {
        out.passed = false;
        out.detail = std::string("error: ") + err.what();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_seconds > 0.0 && out.seconds > limit_seconds) {
        out.passed = false;
        out.detail += format("; runtime %.1f s over the %.0f s budget", out.seconds, limit_seconds);
    }
    return out;
}

const double flat_alphas[3] = {0.25, 1.0 / (2.0 * std::numbers::pi), 1.0};
const double flat_radii[2] = {0.05, 0.1};

}  // namespace

int companion_zero_count(const std::vector<std::complex<double>>& coeffs, double rho) {
    std::size_t deg = coeffs.size();
    while (deg > 0 && coeffs[deg - 1] == 0.0) --deg;
    if (deg == 0) throw Error(ErrorKind::contour, "the zero section vanishes everywhere");
    const int n = static_cast<int>(deg) - 1;
    if (n == 0) return 0;
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -coeffs[static_cast<std::size_t>(i)] / coeffs[deg - 1];
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    int count = 0;
    for (int i = 0; i < n; ++i)
        if (std::abs(solver.eigenvalues()[i]) < rho) ++count;
    return count;
}

CriterionResult flat_closed_form() {
    return timed("flat_closed_form", "flat minimizer matches the closed form", 1.0, [](CriterionResult& out) {
        double worst = 0.0;
        for (double alpha : flat_alphas)
            for (double r : flat_radii) {
                const RadialWeight w(ChartMetric::flat(alpha));
                const auto u = radial_minimizer(w, r);
                const double total = energy(u, w).total;
                worst = std::max({worst, rel(total, alpha * alpha * e * e * pi * pi * std::pow(r, 4)),
                                  rel(u.gamma(), -alpha * pi * r * r), rel(u.free_radius(), std::sqrt(e) * r),
                                  rel(u.boundary_charge(), 2.0 * alpha * pi * e * r * r)});
            }
        out.passed = worst <= 1e-8;
        out.detail = format("worst relative error %.3g over 6 cases", worst);
    });
}

CriterionResult energy_decomposition() {
    return timed("energy_decomposition", "both energy integrals match their closed forms", 0.0,
                 [](CriterionResult& out) {
                     double worst = 0.0;
                     for (double alpha : flat_alphas)
                         for (double r : flat_radii) {
                             const RadialWeight w(ChartMetric::flat(alpha));
                             const auto rep = energy(radial_minimizer(w, r), w);
                             const double unit = alpha * alpha * pi * pi * std::pow(r, 4);
                             worst = std::max({worst, rel(rep.integral_against_omega, (e * e - 2.0 * e) * unit),
                                               rel(rep.integral_against_mu, 2.0 * e * unit)});
                         }
                     out.passed = worst <= 1e-8;
                     out.detail = format("worst relative error %.3g over 6 cases", worst);
                 });
}

CriterionResult grid_oracle_equivalence() {
    return timed("grid_oracle_equivalence", "grid free minimizer agrees with the radial solver", 120.0,
                 [](CriterionResult& out) {
                     const double r = 0.1;
                     const int Ms[4] = {128, 256, 512, 1024};
                     out.passed = true;
                     for (const auto& metric : {ChartMetric::flat(1.0), ChartMetric::fubini_study()}) {
                         const RadialWeight w(metric);
                         const auto oracle = radial_minimizer(w, r);
                         const double e_oracle = energy(oracle, w).total;
                         const double scale = std::abs(oracle.gamma());
                         double errs[4];
                         double e_errs[4];
                         std::optional<GridField> previous;
                         for (int k = 0; k < 4; ++k) {
                             SolverOptions opts;
                             if (previous) opts.initial = &*previous;
                             GridField g = envelope_grid(EnvelopeProblem::free(metric, r), Ms[k], opts);
                             double sup = 0.0;
                             for (int j = 0; j < g.side(); ++j)
                                 for (int i = 0; i < g.side(); ++i)
                                     sup = std::max(sup, std::abs(g.values[g.index(i, j)] -
                                                                  oracle.value_at(std::abs(g.node(i, j)))));
                             errs[k] = sup / scale;
                             e_errs[k] = std::abs(grid_energy(g) - e_oracle) / e_oracle;
                             previous = std::move(g);
                         }
                         // Least-squares slope of log error against log h.
                         double sx = 0, sy = 0, sxx = 0, sxy = 0;
                         for (int k = 0; k < 4; ++k) {
                             const double x = -std::log(static_cast<double>(Ms[k]));
                             const double y = std::log(errs[k]);
                             sx += x;
                             sy += y;
                             sxx += x * x;
                             sxy += x * y;
                         }
                         const double order = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
                         const bool ok = errs[2] <= 5e-3 && e_errs[2] <= 1e-2 && order >= 0.9;
                         out.passed = out.passed && ok;
                         out.detail += format("%s%s: sup/|gamma| %.3g, energy %.3g at M=512, order %.2f",
                                              out.detail.empty() ? "" : "; ",
                                              metric.kind() == MetricKind::flat ? "flat" : "fubini_study",
                                              errs[2], e_errs[2], order);
                     }
                 });
}

CriterionResult scaling_law(int jobs) {
    return timed("scaling_law", "sweeps recover the r^4 law and its constant", 300.0, [jobs](CriterionResult& out) {
        const std::vector<double> radii{0.02, 0.04, 0.06, 0.08, 0.1};
        SweepOptions opts;
        opts.jobs = jobs;
        const auto fs = ChartMetric::fubini_study();
        const auto s = scaling_sweep(fs, fs, radii, opts);
        out.passed = s.fitted && std::abs(s.exponent - 4.0) <= 0.1 && s.c_fit >= 0.225 && s.c_fit <= 0.275;
        out.detail = format("fubini_study: exponent %.6f, C_fit %.6f", s.exponent, s.c_fit);
        const auto flat0 = ChartMetric::flat(0.5);
        for (double alpha : {0.25, 1.0}) {
            const auto f = scaling_sweep(ChartMetric::flat(alpha), flat0, radii, opts);
            const bool ok = f.fitted && std::abs(f.exponent - 4.0) <= 1e-6 && std::abs(f.c_fit - alpha * alpha) <= 1e-6;
            out.passed = out.passed && ok;
            out.detail += format("; flat alpha=%g: exponent %.9f, C_fit %.9f", alpha, f.exponent, f.c_fit);
        }
    });
}

CriterionResult free_radius_equations() {
    return timed("free_radius_equations", "free-radius equations have the limiting roots", 0.0,
                 [](CriterionResult& out) {
                     const double r = 1.0;
                     const double eq = std::abs(solve_equa_R(0.0, r) - std::sqrt(e) * r);
                     const auto k = solve_kappa_R(1e6, r);
                     const double kappa_gap = std::abs(k.R / r - std::sqrt(e));
                     out.passed = eq <= 1e-10 && kappa_gap < 1e-5;
                     out.detail = format("|R - sqrt(e) r| = %.3g at eps = 0; |R/r - sqrt(e)| = %.3g at kappa = 1e6",
                                         eq, kappa_gap);
                 });
}

CriterionResult upper_bound_coherence() {
    return timed("upper_bound_coherence", "comparison profile brackets the minimal energy", 0.0,
                 [](CriterionResult& out) {
                     bool ok = true;
                     double worst_below = 0.0;
                     double worst_above = -1.0;
                     for (double alpha : {1.0, 1.0 / (2.0 * pi)})
                         for (int i = 0; i <= 6; ++i) {
                             const double eps = 0.05 * i;
                             const auto p = psi2_energy_eps(alpha, eps, 0.05);
                             worst_below = std::min(worst_below, p.value - p.flat_value);
                             worst_above = std::max(worst_above, p.value - p.closed_form - 1e-8);
                         }
                     ok = worst_below >= 0.0 && worst_above <= 0.0;
                     // (bound - flat)/r^5 at fixed varrho: an O(r^4) gap would grow fourfold over the range.
                     double lo = INFINITY;
                     double hi = 0.0;
                     for (double r : {0.1, 0.05, 0.025}) {
                         const auto p = psi2_energy(1.0, 1.0, r);
                         const double ratio = (p.closed_form - p.flat_value) / std::pow(r, 5);
                         lo = std::min(lo, ratio);
                         hi = std::max(hi, ratio);
                     }
                     const bool bounded = std::isfinite(hi) && lo > 0.0 && hi / lo < 2.0;
                     out.passed = ok && bounded;
                     out.detail = format("min(value - flat) %.3g, max(value - bound) %.3g; (bound - flat)/r^5 in [%.4g, %.4g]",
                                         worst_below, worst_above + 1e-8, lo, hi);
                 });
}

CriterionResult property_suites(std::uint64_t seed, int jobs) {
    return timed("property_suites", "ordering, convexity, symmetrization, mass and monotonicity", 0.0,
                 [seed, jobs](CriterionResult& out) {
                     const properties::SuiteReport suites[4] = {
                         properties::ordering_suite(200, seed), properties::convexity_suite(100, seed + 1),
                         properties::symmetrization_suite(100, seed + 2), properties::measure_total_suite(100, seed + 3)};
                     out.passed = true;
                     for (const auto& s : suites) {
                         out.passed = out.passed && s.violations == 0;
                         out.detail += format("%s %d/%d (margin %.3g); ", s.name.c_str(), s.cases - s.violations,
                                              s.cases, -s.worst);
                     }
                     const std::vector<double> radii{0.02, 0.04, 0.06, 0.08, 0.1};
                     SweepOptions opts;
                     opts.jobs = jobs;
                     int monotone = 0;
                     const auto fs = ChartMetric::fubini_study();
                     const auto half = ChartMetric::flat(0.5);
                     const SweepResult sweeps[3] = {scaling_sweep(fs, fs, radii, opts),
                                                    scaling_sweep(ChartMetric::flat(0.25), half, radii, opts),
                                                    scaling_sweep(ChartMetric::flat(1.0), half, radii, opts)};
                     for (const auto& s : sweeps) monotone += s.monotone ? 1 : 0;
                     out.passed = out.passed && monotone == 3;
                     out.detail += format("monotone sweeps %d/3", monotone);
                 });
}

CriterionResult monte_carlo(const Options& options) {
    return timed("monte_carlo", "zero counting and hole probability estimator", 60.0, [&options](CriterionResult& out) {
        std::mt19937_64 rng(options.seed);
        int mismatches = 0;
        for (int i = 0; i < 1000; ++i) {
            const int n = 2 + static_cast<int>(rng() % 11);
            const auto spec = EnsembleSpec::su2(n, options.seed + 17, 1);
            const auto coeffs = sample_section(spec, static_cast<std::uint64_t>(i));
            const double rho = std::exp(std::uniform_real_distribution<double>(-2.0, 2.0)(rng));
            if (count_zeros_in_disc(coeffs, rho) != companion_zero_count(coeffs, rho)) ++mismatches;
        }
        const auto one = hole_probability_chart(EnsembleSpec::su2(1, 42, options.mc_samples), 1.0, options.jobs);
        const auto zero = hole_probability_chart(EnsembleSpec::su2(0, 42, options.mc_samples), 1.0, options.jobs);
        const bool covers = one.wilson_lo <= 0.5 && 0.5 <= one.wilson_hi;
        out.passed = mismatches == 0 && covers && zero.p_hat == 1.0;
        out.detail = format("companion mismatches %d/1000; n=1 p_hat %.4f in [%.4f, %.4f]; n=0 p_hat %.17g",
                            mismatches, one.p_hat, one.wilson_lo, one.wilson_hi, zero.p_hat);
    });
}

CriterionResult rate_trend_check(const Options& options) {
    return timed("rate_trend", "empirical rates approach the minimal energy", 600.0, [&options](CriterionResult& out) {
        RateTrendOptions opts;
        opts.target = 1.0;
        opts.samples = options.trend_samples;
        opts.seed = options.seed;
        opts.jobs = options.jobs;
        const auto t = rate_trend({5, 10, 20, 40}, opts);
        bool in_band = true;
        for (const auto& row : t.rows) {
            const double scaled = row.n * row.n * row.min_energy;
            in_band = in_band && scaled >= 1.0 - 1e-9 && scaled <= 5.0;
            out.detail += format("n=%d ratio %.4f +- %.4f; ", row.n, row.ratio, row.ratio_se);
        }
        out.passed = in_band && t.within_factor_three && t.drifts_toward;
        out.detail += format("factor three %s, drift %s", t.within_factor_three ? "yes" : "no",
                             t.drifts_toward ? "yes" : "no");
    });
}

std::vector<CriterionResult> run_all(const Options& options, const std::function<void(const CriterionResult&)>& progress) {
    std::vector<CriterionResult> out;
    auto add = [&](CriterionResult r) {
        if (progress) progress(r);
        out.push_back(std::move(r));
    };
    add(flat_closed_form());
    add(energy_decomposition());
    add(grid_oracle_equivalence());
    add(scaling_law(options.jobs));
    add(free_radius_equations());
    add(upper_bound_coherence());
    add(property_suites(options.seed, options.jobs));
    add(monte_carlo(options));
    add(rate_trend_check(options));
    return out;
}

}  // namespace hole::acceptance
