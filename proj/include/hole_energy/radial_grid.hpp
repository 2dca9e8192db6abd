#pragma once

#include <vector>

namespace hole::radial {

/// Nodes and composite Simpson weights on [a, b].
struct GradedNodes {
    std::vector<double> t;
    std::vector<double> weight;
};

/// Simpson rule in a stretched variable s, with t = a + (b - a)(s - c sin(2 pi s)/(2 pi)).
/// Nodes cluster toward both ends of the piece, where the kinks live.
/// `intervals` must be even.
[[nodiscard]] GradedNodes graded_nodes(double a, double b, int intervals, double grading = 0.5);

/// Even interval counts per piece, roughly proportional to piece length,
/// summing to at least `total` and never below `minimum`.
[[nodiscard]] std::vector<int> allocate_intervals(const std::vector<double>& breakpoints, int total,
                                                  int minimum = 64);

/// Local Lagrange interpolation through `order` nodes nearest to x.
[[nodiscard]] double interpolate(const std::vector<double>& t, const std::vector<double>& f, double x,
                                 int order = 6);

/// Fourth order nodal derivative from five-point Lagrange stencils.
[[nodiscard]] std::vector<double> derivative(const std::vector<double>& t,
                                             const std::vector<double>& f);

/// Running integral from t.front(), exact for piecewise cubics.
[[nodiscard]] std::vector<double> cumulative_integral(const std::vector<double>& t,
                                                      const std::vector<double>& f);

}  // namespace hole::radial
