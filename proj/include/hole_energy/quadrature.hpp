#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <utility>

namespace hole {

/// Adaptive Gauss-Kronrod (61 point) integral of a smooth integrand on [a, b].
/// Tolerances below 1e-13 make the error estimate chase round-off and
/// subdivide to full depth, so they are clamped.
template <class F>
[[nodiscard]] double integrate(F&& f, double a, double b, double rel_tol = 1e-13) {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        std::forward<F>(f), a, b, 10, std::max(rel_tol, 1e-13));
}

}  // namespace hole
