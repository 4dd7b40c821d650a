#pragma once

// Closed-form reference values used across the test suites. Nothing here
// calls into the library's own solvers.

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include "ksurf/types.hpp"

namespace oracle {

// Harmonic Gauss map of the rotational K = 1 surface whose singular circle
// has height A, written in the coordinates of the Cauchy problem for
// builtin::circle(A): N(u, 0) = alpha(u) and N_v(u, 0) = 0. Along the
// meridian the Gauss map is the Jacobi amplitude of v - K(A); the shifted
// functions are rewritten through the quarter-period identities
//   sn(x - K) = -cn/dn,  cn(x - K) = k' sn/dn,  dn(x - K) = k'/dn.
struct RotationalGauss {
  double A;

  struct Shifted {
    double sn, cn, dn;
  };
  Shifted shifted(double v) const {
    double cn = 0, dn = 0;
    const double sn = boost::math::jacobi_elliptic(A, v, &cn, &dn);
    const double kp = std::sqrt(1.0 - A * A);
    return {-cn / dn, kp * sn / dn, kp / dn};
  }

  ksurf::Vec3 N(double u, double v) const {
    const auto [sn, cn, dn] = shifted(v);
    return {dn * std::cos(u), dn * std::sin(u), -A * sn};
  }
  ksurf::Vec3 N_u(double u, double v) const {
    const ksurf::Vec3 n = N(u, v);
    return {-n.y(), n.x(), 0.0};
  }
  ksurf::Vec3 N_v(double u, double v) const {
    const auto [sn, cn, dn] = shifted(v);
    const double ddn = -A * A * sn * cn;
    return {ddn * std::cos(u), ddn * std::sin(u), -A * cn * dn};
  }
  double quarter_period() const { return boost::math::ellint_1(A); }
};

}  // namespace oracle

#include <boost/math/special_functions/ellint_2.hpp>

namespace oracle {

// The rotational surface itself in the same coordinates, with X(u, 0) = 0.
// The meridian angle m satisfies sin m = sn(v - K), and the height along the
// meridian is the incomplete elliptic integral E(m | A). Across v = 0 the
// surface continues by X(u, -v) = -X(u, v).
struct RotationalSurface {
  double A;

  ksurf::Vec3 X(double u, double v) const {
    if (v < 0.0) return -X(u, -v);
    const auto [sn, cn, dn] = RotationalGauss{A}.shifted(v);
    const double m = std::asin(std::clamp(sn, -1.0, 1.0));
    const double radius = A * std::cos(m);
    const double height = boost::math::ellint_2(A, m) + boost::math::ellint_2(A);
    return {radius * std::cos(u), radius * std::sin(u), -height};
  }
};

}  // namespace oracle
