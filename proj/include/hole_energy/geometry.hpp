#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

namespace hole {

using Complex = std::complex<double>;

enum class MetricKind { flat, fubini_study, custom };

/// A metric density on a single chart: omega = alpha(z) i dz ^ dzbar.
///
/// All densities are relative to i dz ^ dzbar, so the omega-area of the
/// Euclidean disc of radius t is m(t) = 4 pi int_0^t alpha(s) s ds for radial
/// alpha. Custom densities are either radial polynomials (serializable),
/// arbitrary radial callables, or arbitrary planar callables; only the
/// radial ones support distance computations and the radial solver.
class ChartMetric {
public:
    using RadialDensity = std::function<double(double)>;
    using PlanarDensity = std::function<double(Complex)>;

    static ChartMetric flat(double alpha, double extent = 10.0);
    /// Fubini-Study on the affine chart of P^1, normalized to unit total mass.
    static ChartMetric fubini_study(double extent = 10.0);
    /// alpha(t) = sum_k c_k t^k.
    static ChartMetric radial_polynomial(std::vector<double> coefficients, double extent);
    static ChartMetric radial(RadialDensity alpha, double extent);
    static ChartMetric planar(PlanarDensity alpha, double extent);

    [[nodiscard]] MetricKind kind() const noexcept { return kind_; }
    [[nodiscard]] bool is_radial() const noexcept { return !planar_; }
    [[nodiscard]] bool is_serializable() const noexcept;
    [[nodiscard]] double extent() const noexcept { return extent_; }
    /// Constant of a flat metric; alpha(0) otherwise.
    [[nodiscard]] double center_density() const;
    [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return coefficients_; }

    [[nodiscard]] ChartMetric with_extent(double extent) const;

    /// alpha(z); throws ErrorKind::domain outside the chart.
    [[nodiscard]] double density(Complex z) const;
    /// alpha(t) for radial metrics; throws unsupported_configuration otherwise.
    [[nodiscard]] double radial_density(double t) const;
    /// m(t), closed form where one exists.
    [[nodiscard]] double disc_mass(double t) const;
    /// m(t) by adaptive quadrature of the density regardless of kind.
    [[nodiscard]] double integrated_disc_mass(double t) const;
    /// Mass the model assigns outside the chart disc |z| <= extent.
    /// Only Fubini-Study has a known cap; other kinds report 1 - m(extent).
    [[nodiscard]] double cap_mass() const;

private:
    ChartMetric() = default;
    void require_radial(const char* what) const;
    void require_in_chart(double t) const;

    MetricKind kind_ = MetricKind::flat;
    double extent_ = 1.0;
    double alpha_ = 1.0;
    std::vector<double> coefficients_;
    RadialDensity radial_;
    PlanarDensity planar_;
};

/// Radial view of a metric used by every radial computation.
class RadialWeight {
public:
    explicit RadialWeight(ChartMetric metric);

    [[nodiscard]] double alpha(double t) const { return metric_.radial_density(t); }
    [[nodiscard]] double mass(double t) const { return metric_.disc_mass(t); }
    /// dm/dt = 4 pi alpha(t) t.
    [[nodiscard]] double mass_derivative(double t) const;
    [[nodiscard]] double extent() const noexcept { return metric_.extent(); }
    [[nodiscard]] const ChartMetric& metric() const noexcept { return metric_; }

private:
    ChartMetric metric_;
};

struct RadiusPair {
    double chart_radius = 0.0;
    double geodesic_radius = 0.0;
};

/// Density of dd^c u + omega relative to i dz ^ dzbar at z, i.e.
/// Laplacian(u)/(4 pi) + alpha(z). The Laplacian is taken by a fourth order
/// finite difference with spacing `step` (0 picks a chart-relative default).
[[nodiscard]] double ddc_gap(const std::function<double(Complex)>& u, const ChartMetric& metric,
                             Complex z, double step = 0.0);

/// Length of the radial segment [0, rho] under ds^2 = 2 alpha_0 |dz|^2.
[[nodiscard]] double chart_to_geodesic(double rho, const ChartMetric& omega0);
[[nodiscard]] double geodesic_to_chart(double r, const ChartMetric& omega0);
[[nodiscard]] RadiusPair convert_geodesic(double r, const ChartMetric& omega0);

struct SandwichBounds {
    double inner = 0.0;
    double outer = 0.0;
};

/// Chart radii r/sqrt(2(1 + varrho r) beta) and r/sqrt(2(1 - varrho r) beta),
/// beta = alpha_0(0), between which the geodesic ball of radius r lies.
[[nodiscard]] SandwichBounds sandwich_bounds(double r, const ChartMetric& omega0, double varrho);

/// Smallest varrho with (1 - varrho t) beta <= alpha_0(t) <= (1 + varrho t) beta on (0, radius],
/// estimated on a dense sample of the radius.
[[nodiscard]] double density_lipschitz_bound(const ChartMetric& omega0, double radius);

}  // namespace hole
