#include "hole_energy/radial_solver.hpp"

#include "hole_energy/errors.hpp"
#include "hole_energy/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hole {

namespace {

constexpr double pi = std::numbers::pi;

template <class F>
double panel(F&& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 20>::integrate(std::forward<F>(f), a, b);
}

// Largest radius up to `limit` whose disc carries at most unit mass.
double probability_cutoff(const RadialWeight& w, double from, double limit) {
    if (w.mass(limit) <= 1.0) return limit;
    double lo = from;
    double hi = limit;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (w.mass(mid) <= 1.0 ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

RadialPotential flat_minimizer(double alpha, double r, int intervals) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw Error(ErrorKind::invalid_input, "alpha must be positive");
    if (!(r > 0.0) || !std::isfinite(r))
        throw Error(ErrorKind::invalid_input, "hole radius must be positive");
    const double e = std::numbers::e;
    const double R = std::sqrt(e) * r;
    if (2.0 * alpha * pi * e * r * r >= 1.0)
        throw Error(ErrorKind::no_free_boundary, "boundary charge would exceed the total mass");
    const double unit_mass_radius = 1.0 / std::sqrt(2.0 * alpha * pi);
    const double outer = std::min(2.0 * R, unit_mass_radius);
    const double ap = alpha * pi;
    auto value = [=](double t, std::size_t k) {
        if (k == 0) return -ap * t * t;
        if (k == 1) return ap * (2.0 * e * r * r * std::log(t / r) - t * t);
        return 0.0;
    };
    auto flux = [=](double t, std::size_t k) {
        if (k == 0) return -2.0 * ap * t * t;
        if (k == 1) return 2.0 * ap * (e * r * r - t * t);
        return 0.0;
    };
    return RadialPotential::sample({0.0, r, R, outer}, intervals, value, flux, r, R);
}

double shooting_function(const RadialWeight& weight, double r, double R) {
    const double mR = weight.mass(R);
    const double inner = integrate([&](double s) { return s > 0.0 ? weight.mass(s) / s : 0.0; }, 0.0, r);
    const double outer = integrate([&](double s) { return (mR - weight.mass(s)) / s; }, r, R);
    return inner - outer;
}

double solve_free_radius(const RadialWeight& weight, double r, ShootingDiagnostics* diagnostics) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw Error(ErrorKind::invalid_input, "hole radius must be positive");
    if (r >= weight.extent())
        throw Error(ErrorKind::no_free_boundary, "hole radius reaches the chart edge");
    double lo = 1.1 * r;
    double hi = std::min(5.0 * r, 0.5 * weight.extent());
    ShootingDiagnostics diag;
    diag.bracket_lo = lo;
    diag.bracket_hi = hi;
    if (!(hi > lo))
        throw Error(ErrorKind::no_free_boundary, "no room for a free boundary inside the chart");
    const double f_lo = shooting_function(weight, r, lo);
    const double f_hi = shooting_function(weight, r, hi);
    if (!(f_lo > 0.0 && f_hi < 0.0))
        throw Error(ErrorKind::no_free_boundary,
                    "shooting function has no sign change on [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
    while (hi - lo > 1e-3 * lo) {
        const double mid = 0.5 * (lo + hi);
        (shooting_function(weight, r, mid) > 0.0 ? lo : hi) = mid;
        ++diag.bisection_steps;
    }
    // Newton with the analytic slope F'(R) = -m'(R) log(R/r), kept inside the bracket.
    double R = 0.5 * (lo + hi);
    for (int iter = 0; iter < 60; ++iter) {
        const double f = shooting_function(weight, r, R);
        if (f > 0.0) lo = R; else hi = R;
        const double slope = -weight.mass_derivative(R) * std::log(R / r);
        double next = R - f / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        ++diag.newton_steps;
        const bool done = std::abs(next - R) <= 1e-13 * R;
        R = next;
        if (done) break;
    }
    diag.residual = std::abs(shooting_function(weight, r, R));
    if (diagnostics) *diagnostics = diag;
    return R;
}

RadialPotential radial_minimizer(const RadialWeight& weight, double r, int intervals,
                                 ShootingDiagnostics* diagnostics) {
    const double R = solve_free_radius(weight, r, diagnostics);
    const double mR = weight.mass(R);
    if (mR >= 1.0)
        throw Error(ErrorKind::no_free_boundary, "boundary charge would exceed the total mass");
    const double outer = probability_cutoff(weight, R, std::min(weight.extent(), 2.0 * R));
    if (!(outer > R))
        throw Error(ErrorKind::no_free_boundary, "free boundary reaches the chart edge");

    auto inner_integrand = [&](double s) { return weight.mass(s) / s; };
    auto outer_integrand = [&](double s) { return (mR - weight.mass(s)) / s; };

    auto flux = [&](double t, std::size_t k) {
        if (k == 0) return -weight.mass(t);
        if (k == 1) return mR - weight.mass(t);
        return 0.0;
    };
    // Values are integrated panel by panel from the right end of each piece.
    RadialPotential shape =
        RadialPotential::sample({0.0, r, R, outer}, intervals, [](double, std::size_t) { return 0.0; },
                                flux, r, R);
    auto pieces = shape.pieces();
    auto& annulus = pieces[1];
    const std::size_t na = annulus.t.size();
    annulus.value[na - 1] = 0.0;
    for (std::size_t i = na - 1; i-- > 0;)
        annulus.value[i] = annulus.value[i + 1] - panel(outer_integrand, annulus.t[i], annulus.t[i + 1]);
    const double gamma = annulus.value[0];
    auto& disc = pieces[0];
    const std::size_t nd = disc.t.size();
    disc.value[nd - 1] = gamma;
    for (std::size_t i = nd - 1; i-- > 0;)
        disc.value[i] = disc.value[i + 1] + panel(inner_integrand, disc.t[i], disc.t[i + 1]);
    return RadialPotential(std::move(pieces), r, R);
}

}  // namespace hole
