#include "hole_energy/properties.hpp"

#include "hole_energy/errors.hpp"
#include "hole_energy/radial_grid.hpp"
#include "hole_energy/radial_solver.hpp"
#include "hole_energy/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hole::properties {

namespace {

double uniform(std::mt19937_64& rng, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
}

void record(SuiteReport& report, double excess) {
    ++report.cases;
    if (excess > 0.0) ++report.violations;
    report.worst = report.cases == 1 ? excess : std::max(report.worst, excess);
}

RadialPotential random_potential(const RadialWeight& weight, std::mt19937_64& rng) {
    return potential_from_measure(random_measure(weight, rng));
}

}  // namespace

RadialWeight random_weight(std::mt19937_64& rng) {
    if (uniform(rng, 0.0, 1.0) < 0.5) return RadialWeight(ChartMetric::flat(uniform(rng, 0.25, 1.0)));
    return RadialWeight(ChartMetric::fubini_study());
}

MeasureDecomposition random_measure(const RadialWeight& weight, std::mt19937_64& rng, int intervals) {
    // Outer radius where the inner part carries at most a third of the mass.
    double b_max = 0.3;
    while (weight.mass(b_max) > 1.0 / 3.0) b_max *= 0.8;
    const double b = uniform(rng, 0.2, 1.0) * b_max;
    const double inner = weight.mass(b);
    const double keep = uniform(rng, 0.0, 0.9);
    const int count = 1 + static_cast<int>(uniform(rng, 0.0, 3.0));

    std::vector<double> radii;
    for (int i = 0; i < count; ++i) radii.push_back(uniform(rng, 0.1, 0.95) * b);
    std::sort(radii.begin(), radii.end());
    std::vector<double> shares;
    double share_sum = 0.0;
    for (int i = 0; i < count; ++i) {
        shares.push_back(uniform(rng, 0.1, 1.0));
        share_sum += shares.back();
    }

    std::vector<double> bps{0.0};
    for (double r : radii)
        if (r - bps.back() > 1e-6 * b) bps.push_back(r);
    bps.push_back(b);
    const auto counts = radial::allocate_intervals(bps, intervals, 32);
    std::vector<AcPiece> pieces;
    for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
        auto nodes = radial::graded_nodes(bps[k], bps[k + 1], counts[k]);
        AcPiece piece{nodes.t, nodes.weight, std::vector<double>(nodes.t.size())};
        for (std::size_t i = 0; i < nodes.t.size(); ++i) piece.density[i] = keep * weight.alpha(nodes.t[i]);
        pieces.push_back(std::move(piece));
    }
    std::vector<CircleAtom> atoms;
    for (int i = 0; i < count; ++i) {
        const double mass = (1.0 - keep) * inner * shares[static_cast<std::size_t>(i)] / share_sum;
        // Merge atoms that fell on the same breakpoint.
        auto it = std::min_element(bps.begin() + 1, bps.end() - 1, [&](double x, double y) {
            return std::abs(x - radii[static_cast<std::size_t>(i)]) < std::abs(y - radii[static_cast<std::size_t>(i)]);
        });
        auto same = std::find_if(atoms.begin(), atoms.end(), [&](const CircleAtom& a) { return a.radius == *it; });
        if (same != atoms.end()) same->mass += mass;
        else atoms.push_back({*it, mass});
    }
    return MeasureDecomposition(weight, std::move(pieces), std::move(atoms), 1.0 - inner);
}

RadialPotential truncate_below(const RadialPotential& u, double c, int intervals) {
    std::vector<double> bps = u.breakpoints();
    for (const auto& p : u.pieces()) {
        for (std::size_t i = 0; i + 1 < p.t.size(); ++i) {
            double lo = p.t[i];
            double hi = p.t[i + 1];
            const double flo = p.value[i] - c;
            const double fhi = p.value[i + 1] - c;
            if ((flo < 0.0) == (fhi < 0.0)) continue;
            for (int it = 0; it < 100 && hi - lo > 1e-15 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                ((u.value_at(mid) - c < 0.0) == (flo < 0.0) ? lo : hi) = mid;
            }
            bps.push_back(0.5 * (lo + hi));
        }
    }
    std::sort(bps.begin(), bps.end());
    std::vector<double> merged;
    for (double b : bps)
        if (merged.empty() || b - merged.back() > 1e-12 * bps.back()) merged.push_back(b);
    auto below = [&](std::size_t k) {
        const double mid = 0.5 * (merged[k] + merged[k + 1]);
        return std::pair<bool, std::size_t>{u.value_at(mid) < c, u.piece_index(mid)};
    };
    auto value = [&](double t, std::size_t k) {
        const auto [low, j] = below(k);
        return low ? c : u.value_in(j, t);
    };
    auto flux = [&](double t, std::size_t k) {
        const auto [low, j] = below(k);
        return low ? 0.0 : u.flux_in(j, t);
    };
    return RadialPotential::sample(merged, intervals, value, flux, u.hole_radius(), u.free_radius());
}

GridField random_localized_field(const ChartMetric& metric, double cutoff, int M, std::mt19937_64& rng) {
    struct Bump {
        Complex center;
        double radius;
        double depth;
    };
    std::vector<Bump> bumps;
    const int count = 1 + static_cast<int>(uniform(rng, 0.0, 4.0));
    for (int i = 0; i < count; ++i) {
        const double radius = uniform(rng, 0.2, 0.6) * cutoff;
        const double offset = uniform(rng, 0.0, 0.95 * cutoff - radius);
        const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        bumps.push_back({std::polar(offset, angle), radius, uniform(rng, 0.1, 1.0) * cutoff * cutoff});
    }
    return GridField::sample(metric, M, 1.25 * cutoff, [&](Complex z) {
        double acc = 0.0;
        for (const auto& b : bumps) {
            const double s = 1.0 - std::norm(z - b.center) / (b.radius * b.radius);
            if (s > 0.0) acc -= b.depth * s * s * s;
        }
        return acc;
    });
}

SuiteReport ordering_suite(int pairs, std::uint64_t seed) {
    SuiteReport report{"ordering"};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < pairs; ++i) {
        const auto weight = random_weight(rng);
        const auto sigma = random_potential(weight, rng);
        const double c = uniform(rng, 0.05, 0.95) * sigma.min_value();
        const double s = uniform(rng, 0.3, 1.0);
        const auto eta = truncate_below(sigma, c).scaled(s);
        const auto cert = compare_energies(sigma, eta, weight);
        if (cert.status == Ordering::incomparable)
            throw Error(ErrorKind::invalid_input, "generated pair is not ordered");
        record(report, cert.energy_eta - cert.energy_sigma - 1e-9);
    }
    return report;
}

SuiteReport convexity_suite(int mixtures, std::uint64_t seed) {
    SuiteReport report{"convexity"};
    std::mt19937_64 rng(seed);
    const double weights[3] = {0.25, 0.5, 0.75};
    for (int i = 0; i < mixtures; ++i) {
        const auto weight = random_weight(rng);
        const auto u0 = random_potential(weight, rng);
        const auto u1 = random_potential(weight, rng);
        const double s = weights[i % 3];
        const double e0 = energy(u0, weight).total;
        const double e1 = energy(u1, weight).total;
        const auto mix = max_normalize(combine({{1.0 - s, star_normalize(u0, weight)}, {s, star_normalize(u1, weight)}}));
        const double em = energy(mix, weight).total;
        record(report, em - (s * e1 + (1.0 - s) * e0) - 1e-9);
    }
    return report;
}

SuiteReport symmetrization_suite(int fields, std::uint64_t seed) {
    SuiteReport report{"symmetrization"};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < fields; ++i) {
        const auto metric = uniform(rng, 0.0, 1.0) < 0.5 ? ChartMetric::flat(uniform(rng, 0.25, 1.0))
                                                         : ChartMetric::fubini_study();
        const double cutoff = 2.0 * uniform(rng, 0.05, 0.15);
        const auto field = random_localized_field(metric, cutoff, 96, rng);
        const auto polar = polar_grid_for(field, cutoff);
        const auto sym = symmetrize(field, metric, polar);
        const double before = polar_energy(field, metric, polar);
        const double after = polar_energy(sym, metric, polar);
        record(report, after - before - 1e-12 * std::max(1.0, std::abs(before)));
    }
    return report;
}

SuiteReport measure_total_suite(int measures, std::uint64_t seed) {
    SuiteReport report{"measure_totals"};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < measures; ++i) {
        const auto weight = random_weight(rng);
        const auto u = i % 4 == 0 ? radial_minimizer(weight, uniform(rng, 0.02, 0.1), 1024)
                                  : random_potential(weight, rng);
        const auto mu = measure_from_potential(u, weight);
        record(report, std::abs(mu.total_mass() - 1.0) - 1e-6);
    }
    return report;
}

}  // namespace hole::properties
