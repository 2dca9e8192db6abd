#pragma once

#include "hole_energy/geometry.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace hole {

enum class EnvelopeMode { envelope_given_boundary, free_minimizer };

/// Boundary data is a function of the polar angle on the circle |z| = hole_radius.
struct EnvelopeProblem {
    ChartMetric metric;
    double hole_radius = 0.0;
    std::function<double(double)> boundary_data;
    EnvelopeMode mode = EnvelopeMode::envelope_given_boundary;
    double half_width = 0.0;  // T; 0 selects 4 sqrt(e) r

    static EnvelopeProblem constant_data(ChartMetric metric, double r, double gamma,
                                         EnvelopeMode mode = EnvelopeMode::envelope_given_boundary);
    static EnvelopeProblem free(ChartMetric metric, double r);
};

namespace mask {
inline constexpr std::uint8_t inside_hole = 1;
inline constexpr std::uint8_t boundary_ring = 2;
inline constexpr std::uint8_t fixed = 4;  // Dirichlet: box edge or node on the circle
}  // namespace mask

/// Node-centred field on the (M+1) x (M+1) grid over [-T, T]^2, row-major in y.
class GridField {
public:
    GridField(ChartMetric metric, int M, double T);

    /// Plain sampling of a chart function, all nodes free except the box edge.
    static GridField sample(ChartMetric metric, int M, double T,
                            const std::function<double(Complex)>& u);

    [[nodiscard]] int resolution() const noexcept { return M_; }
    [[nodiscard]] int side() const noexcept { return M_ + 1; }
    [[nodiscard]] double half_width() const noexcept { return T_; }
    [[nodiscard]] double spacing() const noexcept { return h_; }
    [[nodiscard]] std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(M_ + 1) + static_cast<std::size_t>(i);
    }
    [[nodiscard]] Complex node(int i, int j) const noexcept { return {-T_ + i * h_, -T_ + j * h_}; }
    [[nodiscard]] const ChartMetric& metric() const noexcept { return metric_; }

    std::vector<double> values;
    std::vector<std::uint8_t> masks;
    double hole_radius = 0.0;
    std::function<double(double)> boundary_data;  // empty for plain samples
    long sweeps = 0;
    double residual = 0.0;
    double gamma = 0.0;  // constant boundary value chosen by the free minimizer
    EnvelopeMode mode = EnvelopeMode::envelope_given_boundary;

    /// Bilinear interpolation; zero outside the box.
    [[nodiscard]] double value_at(Complex z) const;
    [[nodiscard]] double max_value() const;
    [[nodiscard]] double min_value() const;

private:
    ChartMetric metric_;
    int M_;
    double T_;
    double h_;
};

struct SolverOptions {
    double tolerance = 1e-9;
    long max_sweeps = 200000;
    double relaxation = 0.0;          // 0 selects 2/(1 + sin(pi h / L)) from the active region size
    const GridField* initial = nullptr;  // resampled onto the new grid when given
};

/// Projected SOR on the complementarity system min(Lap U + 4 pi alpha, -U) = 0
/// with Shortley-Weller arms at the circle. In free_minimizer mode the hole
/// interior solves the Poisson equation exactly and the boundary constant is
/// the largest one keeping U <= 0.
[[nodiscard]] GridField envelope_grid(const EnvelopeProblem& problem, int M,
                                      const SolverOptions& options = {});

/// -2 int U omega + (1/2pi) int |grad U|^2, which equals the energy of
/// omega + dd^c U when U is its max-normalized potential. Edges crossing the
/// circle are split at the crossing and use the boundary data there.
[[nodiscard]] double grid_energy(const GridField& field);

/// Random free nodes that could be raised by `delta` without leaving the
/// admissible set. Zero for a maximal solution.
[[nodiscard]] int maximality_violations(const GridField& field, int samples, std::uint64_t seed);

void write_csv(const GridField& field, std::ostream& out);
void write_binary(const GridField& field, std::ostream& out);
[[nodiscard]] GridField read_binary(std::istream& in, ChartMetric metric);

}  // namespace hole
