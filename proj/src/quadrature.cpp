#include "ksurf/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ksurf {

double integrate(const std::function<double(double)>& f, double a, double b, double tolerance) {
  if (a == b) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  // Boost's tolerance is relative to the L1 norm of the integrand; scale it
  // so the absolute target is met for integrals of order one or larger.
  const double width = std::abs(b - a);
  const double rel = std::max(tolerance / std::max(width, 1.0), 1e-15);
  double l1 = 0.0;
  return gauss_kronrod<double, 15>::integrate(f, a, b, 15, rel, nullptr, &l1);
}

}  // namespace ksurf
