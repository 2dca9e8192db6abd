#include "hole_energy/energy.hpp"

#include "hole_energy/errors.hpp"
#include "hole_energy/parallel.hpp"
#include "hole_energy/radial_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <thread>

namespace hole {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double e = std::numbers::e;

template <class G>
double bisect(G&& g, double lo, double hi) {
    // g(lo) < 0 < g(hi); runs until the bracket stops shrinking.
    for (int i = 0; i < 300; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

MinEnergyResult grid_path(const ChartMetric& omega, double rc, const MinEnergyOptions& options) {
    GridField g = envelope_grid(EnvelopeProblem::free(omega, rc), options.grid_resolution);
    MinEnergyResult out;
    out.chart_radius = rc;
    out.method = "grid";
    const double total = grid_energy(g);
    const double h = g.spacing();
    double omega_int = 0.0;
    double charge = 0.0;
    double reach = 0.0;
    for (int j = 1; j < g.side() - 1; ++j)
        for (int i = 1; i < g.side() - 1; ++i) {
            const std::size_t k = g.index(i, j);
            const Complex z = g.node(i, j);
            const double a = omega.density(z) * 2.0 * h * h;
            omega_int += g.values[k] * a;
            if (g.values[k] < 0.0 || (g.masks[k] & mask::inside_hole)) {
                charge += a;
                reach = std::max(reach, std::abs(z));
            }
        }
    out.report.integral_against_omega = -omega_int;
    out.report.integral_against_mu = total + omega_int;
    out.report.total = total;
    out.gamma = g.gamma;
    out.free_radius = reach;
    out.boundary_charge = charge;
    out.grid = std::move(g);
    return out;
}

}  // namespace

int resolve_jobs(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HOLE_ENERGY_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<int>(v);
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

MinEnergyResult min_energy_chart(const ChartMetric& omega, double rc, const MinEnergyOptions& options) {
    if (!(rc > 0.0)) throw Error(ErrorKind::invalid_input, "hole radius must be positive");
    if (!omega.is_radial() || options.force_grid) return grid_path(omega, rc, options);
    RadialWeight w(omega);
    RadialPotential u = radial_minimizer(w, rc, options.intervals);
    const MeasureDecomposition mu = measure_from_potential(u, w);
    MinEnergyResult out;
    out.chart_radius = rc;
    out.method = "radial";
    out.report = energy(u, mu);
    out.gamma = u.gamma();
    out.free_radius = u.free_radius();
    out.boundary_charge = u.boundary_charge();
    out.potential = std::move(u);
    return out;
}

MinEnergyResult min_energy(const ChartMetric& omega, const ChartMetric& omega0, double r,
                           const MinEnergyOptions& options) {
    if (!(r > 0.0)) throw Error(ErrorKind::invalid_input, "geodesic radius must be positive");
    const double rc = geodesic_to_chart(r, omega0);
    MinEnergyResult out = min_energy_chart(omega, rc, options);
    out.geodesic_radius = r;
    return out;
}

double solve_equa_R(double epsilon, double r) {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw Error(ErrorKind::domain, "epsilon must lie in [0, 1)");
    if (!(r > 0.0)) throw Error(ErrorKind::invalid_input, "hole radius must be positive");
    const double target = epsilon / (1.0 - epsilon);
    if (target == 0.0) return std::sqrt(e) * r;
    auto g = [&](double u) { return u * u * (std::log(u) - 0.5) - target; };
    double lo = std::sqrt(e);
    double hi = 2.0;
    while (g(hi) < 0.0) hi *= 2.0;
    return r * bisect(g, lo, hi);
}

KappaRoot solve_kappa_R(double kappa, double r) {
    if (!(kappa > 3.0)) throw Error(ErrorKind::domain, "kappa must exceed 3");
    if (!(r > 0.0)) throw Error(ErrorKind::invalid_input, "hole radius must be positive");
    auto g = [&](double u) { return (kappa - 2.0) * u * u * (2.0 * std::log(u) - 1.0) - 3.0; };
    if (!(g(10.0) > 0.0)) throw Error(ErrorKind::domain, "no root in (r, 10 r)");
    const double u = bisect(g, 1.0, 10.0);
    return KappaRoot{r * u, u < 2.0};
}

Psi2Report psi2_energy(double alpha, double rho, double r, int intervals) {
    if (!(rho >= 0.0)) throw Error(ErrorKind::domain, "rho must be nonnegative");
    return psi2_energy_eps(alpha, 2.0 * rho * r, r, intervals);
}

Psi2Report psi2_energy_eps(double alpha, double eps, double r, int intervals) {
    if (!(alpha > 0.0)) throw Error(ErrorKind::invalid_input, "alpha must be positive");
    if (!(eps >= 0.0 && eps < 0.5)) throw Error(ErrorKind::domain, "epsilon must lie in [0, 1/2)");
    const double R = solve_equa_R(eps, r);
    const double ap = alpha * pi;
    const double unit = 1.0 / std::sqrt(2.0 * pi * (1.0 - eps) * alpha);
    const double outer = std::min(2.0 * R, unit);
    if (!(outer > R)) throw Error(ErrorKind::domain, "comparison profile does not fit a probability measure");
    auto value = [=](double t, std::size_t k) {
        if (k == 0) return ap * (-2.0 * eps * r * r - (1.0 - eps) * t * t);
        if (k == 1) return ap * (2.0 * (1.0 - eps) * R * R * std::log(t / r) - 2.0 * eps * r * r - (1.0 - eps) * t * t);
        return 0.0;
    };
    auto flux = [=](double t, std::size_t k) {
        if (k == 0) return -2.0 * ap * (1.0 - eps) * t * t;
        if (k == 1) return 2.0 * ap * (1.0 - eps) * (R * R - t * t);
        return 0.0;
    };
    Psi2Report rep;
    rep.construction = {alpha, eps, r, R,
                        RadialPotential::sample({0.0, r, R, outer}, intervals, value, flux, r, R)};
    const auto& psi = rep.construction.profile;
    const RadialWeight omega2(ChartMetric::flat(alpha * (1.0 + eps)));
    const RadialWeight omega1(ChartMetric::flat(alpha * (1.0 - eps)));
    rep.omega_part = -omega_integral(psi, omega2);
    rep.measure_part = -measure_integral(psi, measure_from_potential(psi, omega1));
    rep.value = rep.omega_part + rep.measure_part;
    rep.chain_bound = (1.0 + 2.0 * eps / (1.0 + eps)) * rep.omega_part + rep.measure_part;
    const double a2p2 = alpha * alpha * pi * pi;
    rep.closed_form = a2p2 * (1.0 - eps * eps) * std::pow(R, 4);
    rep.chain_closed_form = a2p2 * (1.0 - eps) * ((1.0 + 3.0 * eps) * std::pow(R, 4) - 4.0 * eps * r * r * R * R);
    rep.flat_value = a2p2 * e * e * std::pow(r, 4);
    return rep;
}

SweepResult scaling_sweep(const ChartMetric& omega, const ChartMetric& omega0, const std::vector<double>& radii,
                          const SweepOptions& options) {
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw Error(ErrorKind::invalid_input, "sweep radii must be positive");
        if (i > 0 && !(radii[i] > radii[i - 1]))
            throw Error(ErrorKind::invalid_input, "sweep radii must be strictly ascending");
    }
    SweepResult out;
    const double alpha0 = omega.density(Complex{0.0, 0.0});
    const double beta = omega0.center_density();
    out.c_formula = alpha0 * alpha0 / (4.0 * beta * beta);
    out.c_relation = std::pow(alpha0 / (2.0 * beta), 2);
    if (radii.empty()) {
        out.note = "no radii";
        return out;
    }
    out.rows.resize(radii.size());
    parallel_for(radii.size(), resolve_jobs(options.jobs), [&](std::size_t i) {
        try {
            const MinEnergyResult res = min_energy(omega, omega0, radii[i], options.solve);
            SweepRow& row = out.rows[i];
            row.r_geodesic = radii[i];
            row.r_chart = res.chart_radius;
            row.min_energy = res.report.total;
            row.free_radius = res.free_radius;
            row.gamma = res.gamma;
        } catch (const Error& err) {
            throw Error(err.kind(), "radius " + std::to_string(radii[i]) + ": " + err.what());
        }
    });
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        auto& row = out.rows[i];
        row.relative_to_formula = row.min_energy / (out.c_formula * e * e * pi * pi * std::pow(row.r_geodesic, 4)) - 1.0;
        if (!(row.min_energy > 0.0)) out.monotone = false;
        if (i > 0 && !(row.min_energy > out.rows[i - 1].min_energy)) out.monotone = false;
    }
    out.varrho = omega0.is_radial() ? density_lipschitz_bound(omega0, 2.0 * out.rows.back().r_chart) : 0.0;

    std::vector<std::size_t> used;
    for (std::size_t i = 0; i < out.rows.size(); ++i)
        if (out.rows[i].r_geodesic * out.varrho < options.fit_limit) used.push_back(i);
    if (used.size() < 2) {
        out.note = "fit refused: fewer than two radii within the fit window";
        return out;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(used.size());
    for (std::size_t i : used) {
        const double x = std::log(out.rows[i].r_geodesic);
        const double y = std::log(out.rows[i].min_energy);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - out.exponent * sx) / n;
    out.fitted_constant = std::exp(intercept);
    out.c_fit = out.fitted_constant / (e * e * pi * pi);
    out.fitted = true;
    for (std::size_t i : used) {
        auto& row = out.rows[i];
        row.used_in_fit = true;
        row.residual = std::log(row.min_energy) - (intercept + out.exponent * std::log(row.r_geodesic));
    }
    return out;
}

}  // namespace hole
