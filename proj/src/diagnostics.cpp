#include "ksurf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ksurf/error.hpp"
#include "ksurf/quadrature.hpp"

namespace ksurf {

namespace {

using cplx = std::complex<double>;

cplx hopf(const Vec3& a_u, const Vec3& a_v) {
  return 0.25 * cplx(a_u.squaredNorm() - a_v.squaredNorm(), -2.0 * a_u.dot(a_v));
}

double conformality_defect(const FrameSample& s) {
  return std::max({std::abs(s.X_u.dot(s.N_v)), std::abs(s.X_v.dot(s.N_u)),
                   std::abs(s.X_u.dot(s.N_u) - s.X_v.dot(s.N_v))});
}

// field stored like patch samples -> matrix (u index, v index)
Eigen::MatrixXd as_matrix(const PatchGrid& g, const std::vector<double>& f) {
  Eigen::MatrixXd m(g.u.count, g.v.count);
  for (int j = 0; j < g.v.count; ++j) {
    for (int i = 0; i < g.u.count; ++i) m(i, j) = f[g.index(i, j)];
  }
  return m;
}

struct Fundamental {
  double E, F, G, e, f, g;
};

// first and second fundamental forms, II against the unit normal n
Fundamental forms(const FrameSample& s, const Vec3& n) {
  return {s.X_u.dot(s.X_u), s.X_u.dot(s.X_v), s.X_v.dot(s.X_v),
          s.X_uu.dot(n),    s.X_uv.dot(n),    s.X_vv.dot(n)};
}

}  // namespace

double gauss_curvature_raw(const FrameSample& s) {
  const Vec3 c = s.X_u.cross(s.X_v);
  const double norm = c.norm();
  if (norm == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const auto ff = forms(s, c / norm);
  return (ff.e * ff.g - ff.f * ff.f) / (ff.E * ff.G - ff.F * ff.F);
}

double mean_curvature_raw(const FrameSample& s) {
  const auto ff = forms(s, s.N);
  const double det = ff.E * ff.G - ff.F * ff.F;
  if (det == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (ff.e * ff.G - 2.0 * ff.f * ff.F + ff.g * ff.E) / (2.0 * det);
}

double curvature_residual(const SurfacePatch& patch) {
  double worst = 0.0;
  for (std::size_t k = 0; k < patch.samples.size(); ++k) {
    if (patch.singular[k]) continue;
    const double K = gauss_curvature_raw(patch.samples[k]);
    if (std::isnan(K)) continue;
    worst = std::max(worst, std::abs(K - 1.0));
  }
  return worst;
}

FundamentalData fundamental_forms(const SurfacePatch& patch) {
  if (!patch.conformal) {
    throw Error(ErrorCode::Parametrization, "diagnostics",
                "patch of origin " + to_string(patch.origin) +
                    " is not parametrized conformally for the second fundamental form");
  }
  const std::size_t n = patch.samples.size();
  double scale = 0.0, defect = 0.0, orient = 0.0;
  for (const auto& s : patch.samples) {
    scale = std::max(scale, std::abs(s.X_u.dot(s.N_u)));
    defect = std::max(defect, conformality_defect(s));
    orient -= s.X_u.dot(s.N_u);
  }
  if (defect > 1e-6 * std::max(scale, 1e-300)) {
    std::ostringstream msg;
    msg << "coordinates are not conformal for the second fundamental form (defect " << defect
        << ")";
    throw Error(ErrorCode::Parametrization, "diagnostics", msg.str());
  }

  FundamentalData d;
  d.grid = patch.grid;
  d.orientation = orient >= 0.0 ? 1 : -1;
  d.Q.resize(n);
  d.Q_normal.resize(n);
  d.mu.resize(n);
  d.rho.resize(n);
  d.omega.resize(n);
  d.H.resize(n);
  d.K_raw.resize(n);
  d.umbilic.resize(n);
  double q_max = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = patch.samples[k];
    d.Q[k] = hopf(s.X_u, s.X_v);
    d.Q_normal[k] = -hopf(s.N_u, s.N_v);
    d.mu[k] = 0.25 * (s.X_u.squaredNorm() + s.X_v.squaredNorm());
    d.rho[k] = -0.5 * d.orientation * s.X_u.dot(s.N_u);
    d.H[k] = d.mu[k] / d.rho[k];
    d.K_raw[k] = gauss_curvature_raw(s);
    d.q_route_defect = std::max(d.q_route_defect, std::abs(d.Q[k] - d.Q_normal[k]));
    q_max = std::max(q_max, std::abs(d.Q[k]));
  }
  const double eps_q = 1e-8 * q_max;
  for (std::size_t k = 0; k < n; ++k) {
    const double q = std::abs(d.Q[k]);
    d.umbilic[k] = !(q > eps_q) || q <= 1e-12 * d.mu[k];
    // sinh(omega) = rho/|Q| is the stable form near the axis
    d.omega[k] = d.umbilic[k] ? std::numeric_limits<double>::infinity() : std::asinh(d.rho[k] / q);
  }
  return d;
}

StructureResiduals verify_structure(const FundamentalData& d, const SurfacePatch& patch) {
  const PatchGrid& g = d.grid;
  const std::size_t n = patch.samples.size();
  StructureResiduals r;

  std::size_t umbilic = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = patch.samples[k];
    r.frontal = std::max({r.frontal, std::abs(s.X_u.dot(s.N)), std::abs(s.X_v.dot(s.N))});
    r.conformal = std::max(r.conformal, conformality_defect(s));
    r.romu = std::max(r.romu, std::abs(d.rho[k] * d.rho[k] - d.mu[k] * d.mu[k] +
                                       std::norm(d.Q[k])));
    if (patch.singular[k]) continue;
    if (!std::isnan(d.K_raw[k])) r.K_minus_1 = std::max(r.K_minus_1, std::abs(d.K_raw[k] - 1.0));
    const double h_shape = d.orientation * mean_curvature_raw(s);
    if (!std::isnan(h_shape) && std::isfinite(d.H[k])) {
      r.H_consistency = std::max(r.H_consistency, std::abs(h_shape - d.H[k]));
    }
    if (d.umbilic[k]) {
      ++umbilic;
    } else if (std::isfinite(d.H[k])) {
      r.H_consistency = std::max(r.H_consistency, std::abs(d.H[k] - 1.0 / std::tanh(d.omega[k])));
    }
  }
  r.q_routes = d.q_route_defect;
  r.umbilic_fraction = n ? static_cast<double>(umbilic) / static_cast<double>(n) : 0.0;

  const Eigen::MatrixXd Du = differentiation_matrix(g.u, 1);
  const Eigen::MatrixXd Dv = differentiation_matrix(g.v, 1);
  const Eigen::MatrixXd Duu = differentiation_matrix(g.u, 2);
  const Eigen::MatrixXd Dvv = differentiation_matrix(g.v, 2);

  // holomorphy of Q: dQ/dz-bar = (Q_u + i Q_v)/2
  std::vector<double> qr(n), qi(n);
  for (std::size_t k = 0; k < n; ++k) {
    qr[k] = d.Q[k].real();
    qi[k] = d.Q[k].imag();
  }
  const Eigen::MatrixXd QR = as_matrix(g, qr), QI = as_matrix(g, qi);
  const Eigen::MatrixXd re = 0.5 * (Du * QR - QI * Dv.transpose());
  const Eigen::MatrixXd im = 0.5 * (Du * QI + QR * Dv.transpose());
  for (int j = 0; j < g.v.count; ++j) {
    for (int i = 0; i < g.u.count; ++i) {
      if (patch.singular[g.index(i, j)]) continue;
      r.holo_Q = std::max(r.holo_Q, std::hypot(re(i, j), im(i, j)));
    }
  }

  // sinh-Gordon on samples whose whole u-line and v-line avoid umbilics
  std::vector<double> om(n);
  std::vector<bool> row_ok(g.v.count, true), col_ok(g.u.count, true);
  for (int j = 0; j < g.v.count; ++j) {
    for (int i = 0; i < g.u.count; ++i) {
      const int k = g.index(i, j);
      const bool bad = d.umbilic[k] || !std::isfinite(d.omega[k]);
      om[k] = bad ? 0.0 : d.omega[k];
      if (bad) row_ok[j] = col_ok[i] = false;
    }
  }
  const Eigen::MatrixXd W = as_matrix(g, om);
  const Eigen::MatrixXd lap = Duu * W + W * Dvv.transpose();
  for (int j = 0; j < g.v.count; ++j) {
    if (!row_ok[j]) continue;
    for (int i = 0; i < g.u.count; ++i) {
      const int k = g.index(i, j);
      if (!col_ok[i] || patch.singular[k]) continue;
      r.sinh_gordon = std::max(
          r.sinh_gordon, std::abs(0.25 * lap(i, j) + std::abs(d.Q[k]) * std::sinh(d.omega[k])));
    }
  }
  return r;
}

BoundaryChecks boundary_checks(const GaussJet& jet, const SurfaceJet& sjet,
                               const SphericalCurve& alpha, int u_samples, double scan_height) {
  BoundaryChecks b;
  const auto& c0 = jet.layer(0);
  const auto& d1 = sjet.layers().at(1);
  double max_speed = 0.0;
  for (int i = 0; i < 4 * u_samples; ++i) {
    max_speed = std::max(max_speed, c0.derivative(2 * std::numbers::pi * i / (4 * u_samples), 1).norm());
  }

  // rho = rho_1 v + O(v^2) with rho_1 = -<d_1', c_0'>/2, and |Q(u,0)| = |d_1|^2/4
  std::vector<double> rho1, q0;
  double orient = 0.0;
  for (int i = 0; i < u_samples; ++i) {
    const double u = 2 * std::numbers::pi * i / u_samples;
    if (c0.derivative(u, 1).norm() <= 1e-2 * max_speed) continue;
    b.u.push_back(u);
    rho1.push_back(-0.5 * d1.derivative(u, 1).dot(c0.derivative(u, 1)));
    q0.push_back(0.25 * d1.value(u).squaredNorm());
    orient += rho1.back();
  }
  const double sigma = orient >= 0.0 ? 1.0 : -1.0;
  for (std::size_t k = 0; k < b.u.size(); ++k) {
    const double wv = sigma * rho1[k] / q0[k];
    const double target = std::abs(cusp_invariant(alpha, b.u[k]));
    b.omega_v.push_back(wv);
    b.speed_curvature.push_back(target);
    b.omega_v_defect = std::max(b.omega_v_defect, std::abs(wv - target));
    b.omega_v_defect_doubled = std::max(b.omega_v_defect_doubled, std::abs(wv - 2.0 * target));
  }

  b.scan_height = std::min(scan_height, jet.trust_height());
  b.singular_scan = true;
  constexpr int kLevels = 40;
  for (int i = 0; i < u_samples; ++i) {
    const double u = 2 * std::numbers::pi * i / u_samples;
    const FrameSample axis = evaluate_surface(sjet, u, 0.0);
    b.axis_value_defect = std::max(b.axis_value_defect, std::abs(0.5 * axis.X_u.dot(axis.N_u)));
    for (int l = 1; l <= kLevels; ++l) {
      // geometric levels from 1e-3 up to the scan height
      const double v = 1e-3 * std::pow(b.scan_height / 1e-3, (l - 1.0) / (kLevels - 1.0));
      const FrameSample s = evaluate_surface(sjet, u, std::min(v, b.scan_height));
      if (!(-0.5 * sigma * s.X_u.dot(s.N_u) > 1e-12)) b.singular_scan = false;
    }
  }
  return b;
}

AreaTable area_and_tmc(const SurfacePatch& patch, const std::vector<double>& v_mins) {
  if (!patch.source) {
    throw Error(ErrorCode::Domain, "diagnostics", "area integrals need the patch source map");
  }
  const auto us = patch.grid.u.nodes();
  const Eigen::VectorXd wu = quadrature_weights(patch.grid.u);
  const double v_max = patch.grid.v.hi;
  auto line = [&](double v, bool mean) {
    double sum = 0.0;
    for (std::size_t i = 0; i < us.size(); ++i) {
      const FrameSample s = patch.source(us[i], v);
      const double dA = s.X_u.cross(s.X_v).norm();
      if (dA == 0.0) continue;
      sum += wu[static_cast<Eigen::Index>(i)] * (mean ? std::abs(mean_curvature_raw(s)) * dA : dA);
    }
    return sum;
  };
  std::vector<double> sorted = v_mins;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  AreaTable t;
  double area = 0.0, tmc = 0.0, upper = v_max;
  for (double v_min : sorted) {
    if (v_min < upper) {
      area += integrate([&](double v) { return line(v, false); }, v_min, upper, 1e-11);
      tmc += integrate([&](double v) { return line(v, true); }, v_min, upper, 1e-11);
      upper = v_min;
    }
    t.rows.push_back({v_min, area, tmc});
  }
  for (std::size_t k = 2; k < t.rows.size(); ++k) {
    const auto& a = t.rows[k - 2];
    const auto& b = t.rows[k - 1];
    const auto& c = t.rows[k];
    t.area_ratios.push_back((c.area - b.area) / (b.area - a.area));
    t.tmc_ratios.push_back((c.total_mean_curvature - b.total_mean_curvature) /
                           (b.total_mean_curvature - a.total_mean_curvature));
  }
  return t;
}

GraphSamples sample_graph(const std::function<double(double, double)>& z, double x0, double y0,
                          double h, int nx, int ny) {
  GraphSamples g{x0, y0, h, nx, ny, std::vector<double>(static_cast<std::size_t>(nx) * ny)};
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) g.z[j * nx + i] = z(x0 + i * h, y0 + j * h);
  }
  return g;
}

GraphSamples extract_graph(const SurfaceMap& map, double u0, double v0, double half_width,
                           double h) {
  const FrameSample c = map(u0, v0);
  const Vec3 e3 = c.N.normalized();
  const Vec3 e1 = (c.X_u - c.X_u.dot(e3) * e3).normalized();
  const Vec3 e2 = e3.cross(e1);
  const int n = 2 * static_cast<int>(std::lround(half_width / h)) + 1;
  GraphSamples g{-half_width, -half_width, h, n, n, std::vector<double>(static_cast<std::size_t>(n) * n)};

  auto solve = [&](double x, double y, double& u, double& v) {
    for (int it = 0; it < 50; ++it) {
      const FrameSample s = map(u, v);
      const Vec3 d = s.X - c.X;
      const double rx = d.dot(e1) - x, ry = d.dot(e2) - y;
      if (std::hypot(rx, ry) < 1e-15) {
        if (!(s.N.dot(e3) > 0.0)) break;
        return d.dot(e3);
      }
      Eigen::Matrix2d J;
      J << s.X_u.dot(e1), s.X_v.dot(e1), s.X_u.dot(e2), s.X_v.dot(e2);
      const Eigen::Vector2d step = J.fullPivLu().solve(Eigen::Vector2d(rx, ry));
      u -= step[0];
      v -= step[1];
      if (!std::isfinite(u) || !std::isfinite(v)) break;
    }
    std::ostringstream msg;
    msg << "tangent-plane projection is not invertible at (" << x << ", " << y << ")";
    throw Error(ErrorCode::GraphExtraction, "diagnostics", msg.str());
  };

  // march row by row, seeding each Newton solve with a solved neighbour
  std::vector<double> uu(g.z.size()), vv(g.z.size());
  const int mid = n / 2;
  for (int j = 0; j < n; ++j) {
    const int row = j <= mid ? mid - j : j;  // mid, mid-1, ..., 0, mid+1, ..., n-1
    const int seed_row = row == mid ? mid : (row < mid ? row + 1 : row - 1);
    for (int step = 0; step < n; ++step) {
      const int i = step <= mid ? mid - step : step;
      double u = u0, v = v0;
      if (row != mid || i != mid) {
        const int si = (row == mid) ? (i < mid ? i + 1 : i - 1) : i;
        const int sj = (row == mid) ? mid : seed_row;
        u = uu[sj * n + si];
        v = vv[sj * n + si];
      }
      g.z[row * n + i] = solve(g.x0 + i * h, g.y0 + row * h, u, v);
      uu[row * n + i] = u;
      vv[row * n + i] = v;
    }
  }
  return g;
}

namespace {

constexpr double kD1[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
constexpr double kD2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};

}  // namespace

double monge_ampere_residual(const GraphSamples& g, double K) {
  auto z = [&](int i, int j) { return g.z[j * g.nx + i]; };
  double worst = 0.0;
  for (int j = 2; j + 2 < g.ny; ++j) {
    for (int i = 2; i + 2 < g.nx; ++i) {
      double zx = 0, zy = 0, zxx = 0, zyy = 0, zxy = 0;
      for (int a = 0; a < 5; ++a) {
        zx += kD1[a] * z(i + a - 2, j);
        zy += kD1[a] * z(i, j + a - 2);
        zxx += kD2[a] * z(i + a - 2, j);
        zyy += kD2[a] * z(i, j + a - 2);
        for (int b = 0; b < 5; ++b) zxy += kD1[a] * kD1[b] * z(i + a - 2, j + b - 2);
      }
      zx /= g.h;
      zy /= g.h;
      zxx /= g.h * g.h;
      zyy /= g.h * g.h;
      zxy /= g.h * g.h;
      const double w = 1.0 + zx * zx + zy * zy;
      worst = std::max(worst, std::abs(zxx * zyy - zxy * zxy - K * w * w));
    }
  }
  return worst;
}

namespace {

struct FdFrame {
  Vec3 Pu, Pv, Puu, Puv, Pvv;
};

FdFrame fd_frame(const std::function<Vec3(double, double)>& P, double u, double v, double h) {
  FdFrame f{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  for (int a = 0; a < 5; ++a) {
    const Vec3 pu = P(u + (a - 2) * h, v);
    const Vec3 pv = P(u, v + (a - 2) * h);
    f.Pu += kD1[a] * pu;
    f.Puu += kD2[a] * pu;
    f.Pv += kD1[a] * pv;
    f.Pvv += kD2[a] * pv;
    for (int b = 0; b < 5; ++b) {
      if (kD1[a] == 0.0 || kD1[b] == 0.0) continue;
      f.Puv += kD1[a] * kD1[b] * P(u + (a - 2) * h, v + (b - 2) * h);
    }
  }
  f.Pu /= h;
  f.Pv /= h;
  f.Puu /= h * h;
  f.Pvv /= h * h;
  f.Puv /= h * h;
  return f;
}

}  // namespace

double fd_mean_curvature(const std::function<Vec3(double, double)>& P,
                         const Vec3& reference_normal, double u, double v, double h) {
  const FdFrame f = fd_frame(P, u, v, h);
  Vec3 n = f.Pu.cross(f.Pv).normalized();
  if (n.dot(reference_normal) < 0.0) n = -n;
  const double E = f.Pu.dot(f.Pu), F = f.Pu.dot(f.Pv), G = f.Pv.dot(f.Pv);
  const double e = f.Puu.dot(n), ff = f.Puv.dot(n), g = f.Pvv.dot(n);
  return (e * G - 2 * ff * F + g * E) / (2 * (E * G - F * F));
}

double fd_gauss_curvature(const std::function<Vec3(double, double)>& P, double u, double v,
                          double h) {
  const FdFrame f = fd_frame(P, u, v, h);
  const Vec3 n = f.Pu.cross(f.Pv).normalized();
  const double E = f.Pu.dot(f.Pu), F = f.Pu.dot(f.Pv), G = f.Pv.dot(f.Pv);
  const double e = f.Puu.dot(n), ff = f.Puv.dot(n), g = f.Pvv.dot(n);
  return (e * g - ff * ff) / (E * G - F * F);
}

}  // namespace ksurf
