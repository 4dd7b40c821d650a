#pragma once

#include <vector>

#include <Eigen/Dense>

namespace ksurf {

enum class AxisKind { Periodic, Chebyshev, Uniform };

/// One coordinate axis of a sampled patch. Periodic axes cover a full
/// period [lo, lo + 2*pi) without the endpoint; Chebyshev axes hold the
/// extrema nodes of T_{count-1} mapped to [lo, hi] in increasing order;
/// uniform axes include both endpoints.
struct Axis {
  AxisKind kind = AxisKind::Uniform;
  double lo = 0.0;
  double hi = 1.0;
  int count = 2;

  static Axis periodic(int count, double lo = 0.0);
  static Axis chebyshev(double lo, double hi, int count);
  static Axis uniform(double lo, double hi, int count);

  double node(int i) const;
  std::vector<double> nodes() const;
};

/// Tensor grid; samples are stored row-major with v as the row index.
struct PatchGrid {
  Axis u;
  Axis v;

  int size() const { return u.count * v.count; }
  int index(int i, int j) const { return j * u.count + i; }
};

/// Matrix D with (D f)_i ~ f^(order)(node_i) for samples f on the axis:
/// Fourier collocation on periodic axes, Chebyshev collocation on Chebyshev
/// axes, fourth-order finite differences on uniform axes. order is 1 or 2.
Eigen::MatrixXd differentiation_matrix(const Axis& axis, int order);

/// Weights w with sum_i w_i f(node_i) ~ integral of f over the axis:
/// trapezoid (periodic), Clenshaw-Curtis (Chebyshev), composite Simpson
/// with a trapezoid end correction for even node counts (uniform).
Eigen::VectorXd quadrature_weights(const Axis& axis);

/// Finite-difference weights for the derivative of `order` at x0 from
/// values at `points` (Fornberg's recursion).
std::vector<double> fd_weights(double x0, const std::vector<double>& points, int order);

}  // namespace ksurf
