#include "hole_energy/radial_grid.hpp"

#include "hole_energy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hole::radial {

namespace {

std::size_t window_start(const std::vector<double>& t, double x, std::size_t width) {
    const std::size_t n = t.size();
    if (n <= width) return 0;
    auto it = std::lower_bound(t.begin(), t.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - t.begin());
    std::size_t start = idx >= width / 2 ? idx - width / 2 : 0;
    return std::min(start, n - width);
}

// Derivative at x of the polynomial through (xs[j], fs[j]).
double lagrange_derivative(const double* xs, const double* fs, std::size_t p, double x) {
    double acc = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        double denom = 1.0;
        for (std::size_t k = 0; k < p; ++k)
            if (k != j) denom *= xs[j] - xs[k];
        double numer = 0.0;
        for (std::size_t m = 0; m < p; ++m) {
            if (m == j) continue;
            double prod = 1.0;
            for (std::size_t k = 0; k < p; ++k)
                if (k != j && k != m) prod *= x - xs[k];
            numer += prod;
        }
        acc += fs[j] * numer / denom;
    }
    return acc;
}

double lagrange_value(const double* xs, const double* fs, std::size_t p, double x) {
    double acc = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        double basis = 1.0;
        for (std::size_t k = 0; k < p; ++k)
            if (k != j) basis *= (x - xs[k]) / (xs[j] - xs[k]);
        acc += fs[j] * basis;
    }
    return acc;
}

}  // namespace

GradedNodes graded_nodes(double a, double b, int intervals, double grading) {
    if (intervals < 2 || intervals % 2 != 0)
        throw Error(ErrorKind::invalid_input, "Simpson pieces need an even interval count");
    if (!(b > a)) throw Error(ErrorKind::invalid_input, "empty radial piece");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double len = b - a;
    const double ds = 1.0 / intervals;
    GradedNodes out;
    out.t.resize(intervals + 1);
    out.weight.resize(intervals + 1);
    for (int i = 0; i <= intervals; ++i) {
        const double s = i * ds;
        out.t[i] = a + len * (s - grading * std::sin(two_pi * s) / two_pi);
        const double jac = len * (1.0 - grading * std::cos(two_pi * s));
        const double simpson = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        out.weight[i] = simpson * ds / 3.0 * jac;
    }
    out.t.front() = a;
    out.t.back() = b;
    return out;
}

std::vector<int> allocate_intervals(const std::vector<double>& breakpoints, int total, int minimum) {
    std::vector<int> counts;
    if (breakpoints.size() < 2) return counts;
    const double span = breakpoints.back() - breakpoints.front();
    for (std::size_t k = 1; k < breakpoints.size(); ++k) {
        const double share = (breakpoints[k] - breakpoints[k - 1]) / span;
        int n = std::max(minimum, static_cast<int>(std::ceil(share * total)));
        n += n % 2;
        counts.push_back(n);
    }
    return counts;
}

double interpolate(const std::vector<double>& t, const std::vector<double>& f, double x, int order) {
    const std::size_t p = std::min<std::size_t>(static_cast<std::size_t>(order), t.size());
    const std::size_t start = window_start(t, x, p);
    return lagrange_value(t.data() + start, f.data() + start, p, x);
}

std::vector<double> derivative(const std::vector<double>& t, const std::vector<double>& f) {
    const std::size_t n = t.size();
    std::vector<double> out(n, 0.0);
    const std::size_t p = std::min<std::size_t>(5, n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t start = i >= p / 2 ? i - p / 2 : 0;
        start = std::min(start, n - p);
        out[i] = lagrange_derivative(t.data() + start, f.data() + start, p, t[i]);
    }
    return out;
}

std::vector<double> cumulative_integral(const std::vector<double>& t, const std::vector<double>& f) {
    const std::size_t n = t.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    const std::size_t p = std::min<std::size_t>(4, n);
    const double g = 0.5 / std::sqrt(3.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::size_t start = i >= 1 ? i - 1 : 0;
        start = std::min(start, n - p);
        const double mid = 0.5 * (t[i] + t[i + 1]);
        const double len = t[i + 1] - t[i];
        const double v = lagrange_value(t.data() + start, f.data() + start, p, mid - g * len) +
                         lagrange_value(t.data() + start, f.data() + start, p, mid + g * len);
        out[i + 1] = out[i] + 0.5 * len * v;
    }
    return out;
}

}  // namespace hole::radial
