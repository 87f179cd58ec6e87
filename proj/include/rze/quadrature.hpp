#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rze/error.hpp"

namespace rze {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod integral of f over [a, b] (b may be +inf). Throws
/// QuadratureError when the error estimate exceeds the relative tolerance.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double rel_tol = 1e-10, unsigned max_depth = 20) {
    if (a == b) {
        return {};
    }
    double error = 0.0;
    double l1 = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(std::forward<F>(f), a, b, max_depth, rel_tol, &error, &l1);
    if (!std::isfinite(value) || error > rel_tol * std::max(l1, std::numeric_limits<double>::min())) {
        throw QuadratureError("adaptive quadrature on [" + std::to_string(a) + ", " + std::to_string(b) + "] did not converge",
                              error);
    }
    return {value, error};
}

}  // namespace rze
