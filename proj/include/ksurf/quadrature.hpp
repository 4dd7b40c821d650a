#pragma once

#include <functional>

namespace ksurf {

/// Adaptive 15-point Gauss-Kronrod quadrature of a smooth integrand on
/// [a, b]. `tolerance` is the absolute error target.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tolerance = 1e-12);

}  // namespace ksurf
