#include "hole_energy/symmetrize.hpp"

#include "hole_energy/errors.hpp"
#include "hole_energy/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hole {

namespace {

constexpr double pi = std::numbers::pi;

void check_polar(const PolarGrid& p) {
    if (!(p.cutoff > 0.0) || p.radial_intervals < 2 || p.radial_intervals % 2 != 0 || p.angles < 8)
        throw Error(ErrorKind::invalid_input, "invalid polar sampling");
}

}  // namespace

PolarGrid polar_grid_for(const GridField& field, double cutoff) {
    const double h = field.spacing();
    int K = static_cast<int>(std::ceil(cutoff / (0.5 * h)));
    K += K % 2;
    const int N = std::max(64, 4 * static_cast<int>(std::ceil(2.0 * pi * cutoff / h)));
    return PolarGrid{cutoff, std::max(K, 16), N};
}

RadialPotential symmetrize(const GridField& u, const ChartMetric& metric, double cutoff, double tolerance) {
    return symmetrize(u, metric, polar_grid_for(u, cutoff), tolerance);
}

RadialPotential symmetrize(const GridField& u, const ChartMetric& metric, const PolarGrid& polar,
                           double tolerance) {
    check_polar(polar);
    if (!metric.is_radial())
        throw Error(ErrorKind::unsupported_configuration, "symmetrization needs a radial metric");
    const double cutoff = polar.cutoff;
    if (cutoff > u.half_width())
        throw Error(ErrorKind::invalid_input, "cutoff exceeds the grid box");
    const double depth = std::max(std::abs(u.min_value()), std::abs(u.max_value()));
    const int W = u.side();
    for (int j = 0; j < W; ++j)
        for (int i = 0; i < W; ++i) {
            const double v = u.values[u.index(i, j)];
            if (std::abs(u.node(i, j)) > cutoff * (1.0 + 1e-9) && std::abs(v) > tolerance * std::max(depth, 1e-300))
                throw Error(ErrorKind::not_localized,
                            "field is nonzero at |z| = " + std::to_string(std::abs(u.node(i, j))) +
                                " beyond the cutoff " + std::to_string(cutoff));
        }

    const int K = polar.radial_intervals;
    const int N = polar.angles;
    const double dt = cutoff / K;
    RadialPiece piece;
    piece.t.resize(K + 1);
    piece.weight.resize(K + 1);
    piece.value.resize(K + 1);
    for (int k = 0; k <= K; ++k) {
        const double t = k * dt;
        piece.t[k] = t;
        const double simpson = (k == 0 || k == K) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        piece.weight[k] = simpson * dt / 3.0;
        double acc = 0.0;
        for (int j = 0; j < N; ++j) {
            const double th = 2.0 * pi * j / N;
            acc += u.value_at(std::polar(t, th));
        }
        piece.value[k] = k == K ? 0.0 : acc / N;
    }
    piece.t.back() = cutoff;
    const auto du = radial::derivative(piece.t, piece.value);
    piece.flux.resize(K + 1);
    for (int k = 0; k <= K; ++k) piece.flux[k] = piece.t[k] * du[k];

    double free_radius = cutoff;
    for (int k = K; k >= 0 && piece.value[k] == 0.0; --k) free_radius = piece.t[k];
    return RadialPotential({std::move(piece)}, u.hole_radius, free_radius);
}

double polar_energy(const std::function<double(double, double)>& f, const ChartMetric& metric,
                    const PolarGrid& polar) {
    check_polar(polar);
    const int K = polar.radial_intervals;
    const int N = polar.angles;
    const double dt = polar.cutoff / K;
    const double dth = 2.0 * pi / N;
    std::vector<double> prev(N), cur(N);
    double linear = 0.0;
    double radial_part = 0.0;
    double angular_part = 0.0;
    for (int k = 0; k <= K; ++k) {
        const double t = k * dt;
        for (int j = 0; j < N; ++j) cur[j] = f(t, j * dth);
        const double wt = (k == K) ? 0.5 : 1.0;
        if (k > 0) {
            const double alpha = metric.radial_density(t);
            double ring = 0.0;
            double ang = 0.0;
            for (int j = 0; j < N; ++j) {
                ring += cur[j];
                const double d = cur[(j + 1) % N] - cur[j];
                ang += d * d;
            }
            linear += wt * ring * alpha * t;
            angular_part += wt * ang / (t * dth) * dt;
            const double tm = t - 0.5 * dt;
            double rad = 0.0;
            for (int j = 0; j < N; ++j) {
                const double d = cur[j] - prev[j];
                rad += d * d;
            }
            radial_part += rad / dt * tm * dth;
        }
        std::swap(prev, cur);
    }
    // int f omega = int f alpha 2 dx dy = 2 sum f alpha t dt dtheta.
    const double omega_integral = 2.0 * linear * dt * dth;
    return -2.0 * omega_integral + (radial_part + angular_part) / (2.0 * pi);
}

double polar_energy(const GridField& u, const ChartMetric& metric, const PolarGrid& polar) {
    return polar_energy([&](double t, double th) { return u.value_at(std::polar(t, th)); }, metric, polar);
}

double polar_energy(const RadialPotential& u, const ChartMetric& metric, const PolarGrid& polar) {
    const int K = polar.radial_intervals;
    const double dt = polar.cutoff / K;
    std::vector<double> samples(K + 1);
    for (int k = 0; k <= K; ++k) samples[k] = k == K ? u.value_at(polar.cutoff) : u.value_at(k * dt);
    return polar_energy(
        [&](double t, double) {
            const int k = std::clamp(static_cast<int>(std::lround(t / dt)), 0, K);
            return samples[k];
        },
        metric, polar);
}

}  // namespace hole
