#include "hole_energy/geometry.hpp"

#include "hole_energy/errors.hpp"
#include "hole_energy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hole {

namespace {

constexpr double pi = std::numbers::pi;

double horner(const std::vector<double>& c, double t) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
}

void check_extent(double extent) {
    if (!(extent > 0.0) || !std::isfinite(extent))
        throw Error(ErrorKind::invalid_input, "chart extent must be positive and finite");
}

}  // namespace

ChartMetric ChartMetric::flat(double alpha, double extent) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw Error(ErrorKind::invalid_input, "flat density must be positive");
    check_extent(extent);
    ChartMetric m;
    m.kind_ = MetricKind::flat;
    m.alpha_ = alpha;
    m.extent_ = extent;
    return m;
}

ChartMetric ChartMetric::fubini_study(double extent) {
    check_extent(extent);
    ChartMetric m;
    m.kind_ = MetricKind::fubini_study;
    m.alpha_ = 1.0 / (2.0 * pi);
    m.extent_ = extent;
    return m;
}

ChartMetric ChartMetric::radial_polynomial(std::vector<double> coefficients, double extent) {
    check_extent(extent);
    if (coefficients.empty())
        throw Error(ErrorKind::invalid_input, "custom density needs at least one coefficient");
    for (int k = 0; k <= 256; ++k) {
        const double v = horner(coefficients, extent * k / 256.0);
        if (!(v > 0.0))
            throw Error(ErrorKind::invalid_input, "custom density must be positive on the chart");
    }
    ChartMetric m;
    m.kind_ = MetricKind::custom;
    m.coefficients_ = std::move(coefficients);
    m.alpha_ = m.coefficients_.front();
    m.extent_ = extent;
    return m;
}

ChartMetric ChartMetric::radial(RadialDensity alpha, double extent) {
    check_extent(extent);
    if (!alpha) throw Error(ErrorKind::invalid_input, "empty radial density");
    ChartMetric m;
    m.kind_ = MetricKind::custom;
    m.radial_ = std::move(alpha);
    m.alpha_ = m.radial_(0.0);
    m.extent_ = extent;
    if (!(m.alpha_ > 0.0))
        throw Error(ErrorKind::invalid_input, "custom density must be positive at the center");
    return m;
}

ChartMetric ChartMetric::planar(PlanarDensity alpha, double extent) {
    check_extent(extent);
    if (!alpha) throw Error(ErrorKind::invalid_input, "empty planar density");
    ChartMetric m;
    m.kind_ = MetricKind::custom;
    m.planar_ = std::move(alpha);
    m.alpha_ = m.planar_(Complex{0.0, 0.0});
    m.extent_ = extent;
    return m;
}

bool ChartMetric::is_serializable() const noexcept {
    return kind_ != MetricKind::custom || (!radial_ && !planar_);
}

double ChartMetric::center_density() const { return alpha_; }

ChartMetric ChartMetric::with_extent(double extent) const {
    check_extent(extent);
    ChartMetric copy = *this;
    copy.extent_ = extent;
    return copy;
}

void ChartMetric::require_radial(const char* what) const {
    if (planar_)
        throw Error(ErrorKind::unsupported_configuration,
                    std::string(what) + " requires a radial metric");
}

void ChartMetric::require_in_chart(double t) const {
    if (t > extent_ * (1.0 + 1e-12))
        throw Error(ErrorKind::domain, "point outside the chart (|z| = " + std::to_string(t) +
                                           " > extent " + std::to_string(extent_) + ")");
}

double ChartMetric::density(Complex z) const {
    const double t = std::abs(z);
    require_in_chart(t);
    if (planar_) return planar_(z);
    return radial_density(t);
}

double ChartMetric::radial_density(double t) const {
    require_radial("radial_density");
    switch (kind_) {
        case MetricKind::flat: return alpha_;
        case MetricKind::fubini_study: {
            const double s = 1.0 + t * t;
            return 1.0 / (2.0 * pi * s * s);
        }
        case MetricKind::custom:
            return radial_ ? radial_(t) : horner(coefficients_, t);
    }
    return alpha_;
}

double ChartMetric::disc_mass(double t) const {
    require_radial("disc_mass");
    switch (kind_) {
        case MetricKind::flat: return 2.0 * alpha_ * pi * t * t;
        case MetricKind::fubini_study: return t * t / (1.0 + t * t);
        case MetricKind::custom:
            if (radial_) return integrated_disc_mass(t);
            {
                double acc = 0.0;
                double power = t * t;
                for (std::size_t k = 0; k < coefficients_.size(); ++k) {
                    acc += coefficients_[k] * power / static_cast<double>(k + 2);
                    power *= t;
                }
                return 4.0 * pi * acc;
            }
    }
    return 0.0;
}

double ChartMetric::integrated_disc_mass(double t) const {
    require_radial("integrated_disc_mass");
    return 4.0 * pi * integrate([this](double s) { return radial_density(s) * s; }, 0.0, t);
}

double ChartMetric::cap_mass() const {
    if (kind_ == MetricKind::fubini_study) return 1.0 / (1.0 + extent_ * extent_);
    return 1.0 - disc_mass(extent_);
}

RadialWeight::RadialWeight(ChartMetric metric) : metric_(std::move(metric)) {
    if (!metric_.is_radial())
        throw Error(ErrorKind::unsupported_configuration, "radial weight from a non-radial metric");
}

double RadialWeight::mass_derivative(double t) const { return 4.0 * pi * alpha(t) * t; }

double ddc_gap(const std::function<double(Complex)>& u, const ChartMetric& metric, Complex z,
               double step) {
    const double alpha = metric.density(z);
    const double h = step > 0.0 ? step : 1e-3 * std::clamp(metric.extent(), 1e-2, 1.0);
    const double center = u(z);
    auto laplacian = [&](double s) {
        const double sum = u(z + s) + u(z - s) + u(z + Complex{0.0, s}) + u(z - Complex{0.0, s});
        return (sum - 4.0 * center) / (s * s);
    };
    const double lap = (4.0 * laplacian(0.5 * h) - laplacian(h)) / 3.0;
    return lap / (4.0 * pi) + alpha;
}

double chart_to_geodesic(double rho, const ChartMetric& omega0) {
    if (!omega0.is_radial())
        throw Error(ErrorKind::unsupported_configuration,
                    "geodesic distance needs a radial reference metric");
    if (!(rho >= 0.0)) throw Error(ErrorKind::invalid_input, "chart radius must be nonnegative");
    if (rho > omega0.extent() * (1.0 + 1e-12))
        throw Error(ErrorKind::domain, "chart radius beyond the chart extent");
    switch (omega0.kind()) {
        case MetricKind::flat: return rho * std::sqrt(2.0 * omega0.center_density());
        case MetricKind::fubini_study: return std::atan(rho) / std::sqrt(pi);
        case MetricKind::custom: break;
    }
    return integrate([&](double s) { return std::sqrt(2.0 * omega0.radial_density(s)); }, 0.0, rho);
}

double geodesic_to_chart(double r, const ChartMetric& omega0) {
    if (!omega0.is_radial())
        throw Error(ErrorKind::unsupported_configuration,
                    "geodesic distance needs a radial reference metric");
    if (!(r >= 0.0)) throw Error(ErrorKind::invalid_input, "geodesic radius must be nonnegative");
    if (r == 0.0) return 0.0;
    const double max_r = chart_to_geodesic(omega0.extent(), omega0);
    if (r > max_r * (1.0 + 1e-12))
        throw Error(ErrorKind::domain, "geodesic radius reaches beyond the chart");
    switch (omega0.kind()) {
        case MetricKind::flat: return r / std::sqrt(2.0 * omega0.center_density());
        case MetricKind::fubini_study: return std::tan(std::sqrt(pi) * r);
        case MetricKind::custom: break;
    }
    // Safeguarded Newton on g(rho) = chart_to_geodesic(rho) - r; g' = sqrt(2 alpha_0(rho)) > 0.
    double lo = 0.0;
    double hi = omega0.extent();
    double rho = std::min(hi, r / std::sqrt(2.0 * omega0.center_density()));
    for (int iter = 0; iter < 200; ++iter) {
        const double g = chart_to_geodesic(rho, omega0) - r;
        if (g > 0.0) hi = rho; else lo = rho;
        const double step = g / std::sqrt(2.0 * omega0.radial_density(rho));
        double next = rho - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - rho) <= 1e-15 * std::max(rho, 1e-300)) return next;
        rho = next;
    }
    return rho;
}

RadiusPair convert_geodesic(double r, const ChartMetric& omega0) {
    return RadiusPair{geodesic_to_chart(r, omega0), r};
}

SandwichBounds sandwich_bounds(double r, const ChartMetric& omega0, double varrho) {
    if (!(r >= 0.0) || !(varrho >= 0.0))
        throw Error(ErrorKind::invalid_input, "sandwich bounds need r >= 0 and varrho >= 0");
    if (varrho * r >= 1.0)
        throw Error(ErrorKind::radius_too_large, "varrho * r must stay below 1");
    const double beta = omega0.center_density();
    return SandwichBounds{r / std::sqrt(2.0 * (1.0 + varrho * r) * beta),
                          r / std::sqrt(2.0 * (1.0 - varrho * r) * beta)};
}

double density_lipschitz_bound(const ChartMetric& omega0, double radius) {
    if (!omega0.is_radial())
        throw Error(ErrorKind::unsupported_configuration, "Lipschitz bound needs a radial metric");
    const double beta = omega0.center_density();
    constexpr int samples = 4096;
    double bound = 0.0;
    for (int k = 1; k <= samples; ++k) {
        const double t = radius * k / samples;
        bound = std::max(bound, std::abs(omega0.radial_density(t) / beta - 1.0) / t);
    }
    return bound * (1.0 + 1e-9);
}

}  // namespace hole
