#include "ksurf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ksurf/error.hpp"

namespace ksurf {

using std::numbers::pi;

Axis Axis::periodic(int count, double lo) {
  if (count < 3) throw Error(ErrorCode::Domain, "grid", "periodic axis needs at least 3 nodes");
  return {AxisKind::Periodic, lo, lo + 2 * pi, count};
}

Axis Axis::chebyshev(double lo, double hi, int count) {
  if (count < 3 || !(hi > lo)) throw Error(ErrorCode::Domain, "grid", "invalid Chebyshev axis");
  return {AxisKind::Chebyshev, lo, hi, count};
}

Axis Axis::uniform(double lo, double hi, int count) {
  if (count < 2 || !(hi > lo)) throw Error(ErrorCode::Domain, "grid", "invalid uniform axis");
  return {AxisKind::Uniform, lo, hi, count};
}

double Axis::node(int i) const {
  switch (kind) {
    case AxisKind::Periodic:
      return lo + 2 * pi * i / count;
    case AxisKind::Chebyshev: {
      const double x = -std::cos(pi * i / (count - 1));
      return 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
    }
    case AxisKind::Uniform:
      break;
  }
  return i + 1 == count ? hi : lo + (hi - lo) * i / (count - 1);
}

std::vector<double> Axis::nodes() const {
  std::vector<double> x(count);
  for (int i = 0; i < count; ++i) x[i] = node(i);
  return x;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& points, int order) {
  const int n = static_cast<int>(points.size());
  // c[j][k]: weight of point j for derivative k
  std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
  double c1 = 1.0;
  double c4 = points[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = points[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = points[i] - points[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = c[j][order];
  return w;
}

namespace {

Eigen::MatrixXd periodic_matrix(int n, double length, int order) {
  const double h = 2 * pi / n;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double x = 0.5 * (i - j) * h;
      const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
      D(i, j) = n % 2 == 0 ? 0.5 * sign / std::tan(x) : 0.5 * sign / std::sin(x);
    }
  }
  Eigen::MatrixXd result;
  if (order == 1) {
    result = D;
  } else if (n % 2 == 1) {
    result = D * D;
  } else {
    result = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) {
          result(i, j) = -pi * pi / (3 * h * h) - 1.0 / 6.0;
        } else {
          const double s = std::sin(0.5 * (i - j) * h);
          const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
          result(i, j) = -0.5 * sign / (s * s);
        }
      }
    }
  }
  const double scale = std::pow(2 * pi / length, order);
  return result * scale;
}

Eigen::MatrixXd chebyshev_matrix(const Axis& axis) {
  const int N = axis.count - 1;
  // nodes -cos(pi j / N) increasing; Trefethen's matrix for cos nodes is
  // negated by the reflection x -> -x
  Eigen::VectorXd x(N + 1), c(N + 1);
  for (int j = 0; j <= N; ++j) {
    x[j] = -std::cos(pi * j / N);
    c[j] = ((j == 0 || j == N) ? 2.0 : 1.0) * ((j % 2 == 0) ? 1.0 : -1.0);
  }
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N; ++j) {
      if (i != j) D(i, j) = (c[i] / c[j]) / (x[i] - x[j]);
    }
  }
  // negative-sum trick for the diagonal
  for (int i = 0; i <= N; ++i) D(i, i) = -D.row(i).sum();
  return D * (2.0 / (axis.hi - axis.lo));
}

Eigen::MatrixXd uniform_matrix(const Axis& axis, int order) {
  const int n = axis.count;
  const int boundary_width = order == 1 ? 5 : 6;
  if (n < boundary_width) {
    throw Error(ErrorCode::Domain, "grid", "finite differences need more nodes");
  }
  const auto x = axis.nodes();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const bool interior = i >= 2 && i <= n - 3;
    const int len = interior ? 5 : boundary_width;
    const int start = interior ? i - 2 : (i < 2 ? 0 : n - len);
    const std::vector<double> pts(x.begin() + start, x.begin() + start + len);
    const auto w = fd_weights(x[i], pts, order);
    for (int k = 0; k < len; ++k) D(i, start + k) = w[k];
  }
  return D;
}

}  // namespace

Eigen::MatrixXd differentiation_matrix(const Axis& axis, int order) {
  if (order != 1 && order != 2) {
    throw Error(ErrorCode::UnsupportedOrder, "grid", "differentiation order must be 1 or 2");
  }
  switch (axis.kind) {
    case AxisKind::Periodic:
      return periodic_matrix(axis.count, axis.hi - axis.lo, order);
    case AxisKind::Chebyshev: {
      const Eigen::MatrixXd D = chebyshev_matrix(axis);
      return order == 1 ? D : Eigen::MatrixXd(D * D);
    }
    case AxisKind::Uniform:
      break;
  }
  return uniform_matrix(axis, order);
}

Eigen::VectorXd quadrature_weights(const Axis& axis) {
  const int n = axis.count;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  switch (axis.kind) {
    case AxisKind::Periodic:
      w.setConstant((axis.hi - axis.lo) / n);
      return w;
    case AxisKind::Chebyshev: {
      const int N = n - 1;
      // Clenshaw-Curtis on x_j = -cos(pi j / N); symmetric, so the ordering
      // of the nodes does not matter
      for (int j = 0; j <= N; ++j) {
        double sum = 0.0;
        for (int k = 0; k <= N / 2; ++k) {
          double b = (k == 0 || 2 * k == N) ? 1.0 : 2.0;
          sum += b / (1.0 - 4.0 * k * k) * std::cos(2.0 * pi * k * j / N);
        }
        const double c = (j == 0 || j == N) ? 1.0 : 2.0;
        w[j] = c / N * sum;
      }
      return w * (0.5 * (axis.hi - axis.lo));
    }
    case AxisKind::Uniform:
      break;
  }
  const double h = (axis.hi - axis.lo) / (n - 1);
  const int intervals = n - 1;
  if (intervals < 2) {
    w.setConstant(0.5 * h);
    return w;
  }
  const int simpson = intervals % 2 == 0 ? intervals : intervals - 3;
  for (int i = 0; i < simpson; i += 2) {
    w[i] += h / 3;
    w[i + 1] += 4 * h / 3;
    w[i + 2] += h / 3;
  }
  if (simpson != intervals) {
    // Simpson's 3/8 rule on the last three intervals
    const int i = simpson;
    w[i] += 3 * h / 8;
    w[i + 1] += 9 * h / 8;
    w[i + 2] += 9 * h / 8;
    w[i + 3] += 3 * h / 8;
  }
  return w;
}

}  // namespace ksurf
