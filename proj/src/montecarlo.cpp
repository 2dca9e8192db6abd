#include "hole_energy/montecarlo.hpp"

#include "hole_energy/energy.hpp"
#include "hole_energy/errors.hpp"
#include "hole_energy/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace hole {

namespace {

constexpr double pi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double unit_open_closed(std::mt19937_64& rng) {
    // (0, 1] with 53 random bits.
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

enum class Winding { ok, near_zero, unresolved };

Winding winding_on(const std::vector<std::complex<double>>& c, double rho, double scale, int& count) {
    for (std::size_t N = 256; N <= (std::size_t{1} << 22); N *= 2) {
        std::vector<std::complex<double>> vals(N);
        double min_mod = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < N; ++j) {
            const std::complex<double> z = std::polar(rho, 2.0 * pi * static_cast<double>(j) / static_cast<double>(N));
            std::complex<double> acc = c.back();
            for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * z + c[k];
            vals[j] = acc;
            min_mod = std::min(min_mod, std::abs(acc));
        }
        if (min_mod < 1e-12 * scale) return Winding::near_zero;
        double total = 0.0;
        double worst = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            const double inc = std::arg(vals[(j + 1) % N] / vals[j]);
            total += inc;
            worst = std::max(worst, std::abs(inc));
        }
        if (worst < 0.5 * pi) {
            count = static_cast<int>(std::lround(total / (2.0 * pi)));
            return Winding::ok;
        }
    }
    return Winding::unresolved;
}

}  // namespace

EnsembleSpec EnsembleSpec::su2(int n, std::uint64_t seed, std::size_t samples) {
    if (n < 0) throw Error(ErrorKind::invalid_input, "degree must be nonnegative");
    EnsembleSpec s;
    s.n = n;
    s.seed = seed;
    s.samples = samples;
    s.basis_norms.resize(static_cast<std::size_t>(n) + 1);
    double binom = 1.0;
    for (int k = 0; k <= n; ++k) {
        s.basis_norms[static_cast<std::size_t>(k)] = std::sqrt((n + 1) * binom);
        binom = binom * (n - k) / (k + 1);
    }
    return s;
}

std::vector<std::complex<double>> sample_gaussians(const EnsembleSpec& spec, std::uint64_t index) {
    std::mt19937_64 rng(splitmix64(splitmix64(spec.seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
    std::vector<std::complex<double>> a(static_cast<std::size_t>(spec.n) + 1);
    for (auto& x : a) {
        // |a|^2 ~ Exp(1) with uniform phase.
        const double radius = std::sqrt(-std::log(unit_open_closed(rng)));
        const double phase = 2.0 * pi * unit_open_closed(rng);
        x = std::polar(radius, phase);
    }
    return a;
}

std::vector<std::complex<double>> sample_section(const EnsembleSpec& spec, std::uint64_t index) {
    if (spec.basis_norms.size() != static_cast<std::size_t>(spec.n) + 1)
        throw Error(ErrorKind::invalid_input, "basis norms must have n + 1 entries");
    auto a = sample_gaussians(spec, index);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] *= spec.basis_norms[k];
    return a;
}

double root_bound(const std::vector<std::complex<double>>& coeffs) {
    std::size_t deg = coeffs.size();
    while (deg > 0 && coeffs[deg - 1] == 0.0) --deg;
    if (deg <= 1) return 1.0;
    const double lead = std::abs(coeffs[deg - 1]);
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < deg; ++k) m = std::max(m, std::abs(coeffs[k]) / lead);
    return 1.0 + m;
}

int count_zeros_in_disc(const std::vector<std::complex<double>>& coeffs, double rho) {
    if (!(rho >= 0.0)) throw Error(ErrorKind::invalid_input, "disc radius must be nonnegative");
    std::vector<std::complex<double>> c(coeffs);
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    if (c.empty()) throw Error(ErrorKind::contour, "the zero section vanishes everywhere");
    if (rho == 0.0 || c.size() == 1) return 0;
    const double attempts[4] = {rho, rho + 1e-6, rho - 1e-6, rho + 2e-6};
    for (double radius : attempts) {
        if (!(radius > 0.0)) continue;
        double scale = 0.0;
        double power = 1.0;
        for (const auto& ck : c) {
            scale += std::abs(ck) * power;
            power *= radius;
        }
        int count = 0;
        if (winding_on(c, radius, scale, count) == Winding::ok) return count;
    }
    throw Error(ErrorKind::contour, "zero on the contour after three radius jitters");
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {successes == 0 ? 0.0 : std::max(0.0, center - half),
            successes == trials ? 1.0 : std::min(1.0, center + half)};
}

HoleEstimate hole_probability_chart(const EnsembleSpec& spec, double rho, int jobs) {
    if (spec.samples < 100) throw Error(ErrorKind::invalid_input, "at least 100 samples are required");
    if (!(rho >= 0.0)) throw Error(ErrorKind::invalid_input, "disc radius must be nonnegative");
    HoleEstimate est;
    est.n = spec.n;
    est.r_chart = rho;
    est.seed = spec.seed;
    if (spec.n == 0 || rho == 0.0) {
        est.samples = spec.samples;
    } else {
        constexpr std::size_t block = 1024;
        const std::size_t blocks = (spec.samples + block - 1) / block;
        std::vector<std::size_t> hits(blocks, 0), discarded(blocks, 0);
        parallel_for(blocks, resolve_jobs(jobs), [&](std::size_t b) {
            const std::size_t end = std::min(spec.samples, (b + 1) * block);
            for (std::size_t i = b * block; i < end; ++i) {
                try {
                    if (count_zeros_in_disc(sample_section(spec, i), rho) > 0) ++hits[b];
                } catch (const Error& err) {
                    if (err.kind() != ErrorKind::contour) throw;
                    ++discarded[b];
                }
            }
        });
        for (std::size_t b = 0; b < blocks; ++b) {
            est.hits += hits[b];
            est.discarded += discarded[b];
        }
        est.samples = spec.samples - est.discarded;
        if (est.samples == 0) throw Error(ErrorKind::estimation_failed, "every sample hit a contour failure");
    }
    const std::size_t holes = est.samples - est.hits;
    est.p_hat = static_cast<double>(holes) / static_cast<double>(est.samples);
    const auto wi = wilson_interval(holes, est.samples);
    est.wilson_lo = std::min(wi.lo, est.p_hat);
    est.wilson_hi = std::max(wi.hi, est.p_hat);
    est.rate = spec.n == 0 ? std::numeric_limits<double>::quiet_NaN()
                           : -std::log(est.p_hat) / (static_cast<double>(spec.n) * spec.n);
    return est;
}

HoleEstimate hole_probability(const EnsembleSpec& spec, double r_geodesic, const ChartMetric& omega0, int jobs) {
    const double rho = geodesic_to_chart(r_geodesic, omega0);
    HoleEstimate est = hole_probability_chart(spec, rho, jobs);
    est.r_geodesic = r_geodesic;
    return est;
}

double radius_for_energy(double target) {
    if (!(target > 0.0)) throw Error(ErrorKind::invalid_input, "target energy must be positive");
    const auto fs = ChartMetric::fubini_study();
    // Radii past the solver's range count as too large.
    auto energy_at = [&](double r) {
        try {
            return min_energy(fs, fs, r).report.total;
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    const double e = std::numbers::e;
    double guess = std::pow(4.0 * target / (e * e * pi * pi), 0.25);
    double lo = 0.5 * guess;
    double hi = std::min(2.0 * guess, 0.5);
    if (!(hi > lo) || energy_at(hi) < target || !(energy_at(lo) < std::numeric_limits<double>::infinity()))
        throw Error(ErrorKind::domain, "target energy needs a hole beyond the solver's range");
    while (energy_at(lo) > target) lo *= 0.5;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (energy_at(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

RateTrend rate_trend(const std::vector<int>& ns, const RateTrendOptions& options) {
    RateTrend out;
    const auto fs = ChartMetric::fubini_study();
    for (int n : ns) {
        if (n < 1) throw Error(ErrorKind::invalid_input, "rate rows need n >= 1");
        RateTrendRow row;
        row.n = n;
        row.r_geodesic = options.r_geodesic ? *options.r_geodesic
                                            : radius_for_energy(options.target / (static_cast<double>(n) * n));
        const auto res = min_energy(fs, fs, row.r_geodesic);
        row.r_chart = res.chart_radius;
        row.min_energy = res.report.total;
        const auto spec = EnsembleSpec::su2(n, splitmix64(options.seed + static_cast<std::uint64_t>(n)), options.samples);
        row.estimate = hole_probability(spec, row.r_geodesic, fs, options.jobs);
        row.rate = row.estimate.rate;
        row.ratio = row.rate / row.min_energy;
        const double p = row.estimate.p_hat;
        const double N = static_cast<double>(row.estimate.samples);
        row.ratio_se = (p > 0.0 && p < 1.0) ? std::sqrt((1.0 - p) / (p * N)) / (static_cast<double>(n) * n) / row.min_energy
                                            : std::numeric_limits<double>::infinity();
        row.flagged = p < 1e-3 || p > 0.99;
        out.rows.push_back(row);
    }
    for (const auto& row : out.rows)
        if (!(row.ratio >= 1.0 / 3.0 && row.ratio <= 3.0)) out.within_factor_three = false;
    if (out.rows.size() >= 2) {
        for (std::size_t i = 1; i < out.rows.size(); ++i) {
            const auto& a = out.rows[i - 1];
            const auto& b = out.rows[i];
            const double slack = 2.0 * std::hypot(a.ratio_se, b.ratio_se);
            if (!(std::abs(b.ratio - 1.0) <= std::abs(a.ratio - 1.0) + slack)) out.drifts_toward = false;
        }
        if (!(std::abs(out.rows.back().ratio - 1.0) < std::abs(out.rows.front().ratio - 1.0)))
            out.drifts_toward = false;
    }
    return out;
}

}  // namespace hole
