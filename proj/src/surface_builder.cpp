#include "ksurf/surface_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "jet2.hpp"
#include "ksurf/error.hpp"
#include "ksurf/quadrature.hpp"
#include "ksurf/sphere_curves.hpp"

namespace ksurf {

using std::numbers::pi;

std::string to_string(PatchOrigin origin) {
  switch (origin) {
    case PatchOrigin::CauchyPipeline:
      return "cauchy_pipeline";
    case PatchOrigin::RotationalExact:
      return "rotational_exact";
    case PatchOrigin::ParallelCmc:
      return "parallel_cmc";
    case PatchOrigin::Reflection:
      return "reflection";
    case PatchOrigin::Legendre:
      return "legendre";
  }
  return "unknown";
}

SurfacePatch sample_map(const SurfaceMap& map, const PatchGrid& grid, PatchOrigin origin,
                        bool conformal) {
  SurfacePatch patch;
  patch.grid = grid;
  patch.origin = origin;
  patch.conformal = conformal;
  patch.source = map;
  patch.samples.resize(grid.size());
  patch.singular.assign(grid.size(), false);
  const auto us = grid.u.nodes();
  const auto vs = grid.v.nodes();
  for (int j = 0; j < grid.v.count; ++j) {
    for (int i = 0; i < grid.u.count; ++i) patch.samples[grid.index(i, j)] = map(us[i], vs[j]);
  }
  return patch;
}

// ---------------------------------------------------------------------------
// Series surface

namespace {

// Values and first two u-derivatives of every layer at one u.
struct LayerColumn {
  std::vector<Vec3> f, fu, fuu;
};

LayerColumn column(const std::vector<FourierCurve3>& layers, double u) {
  LayerColumn c;
  const std::size_t n = layers.size();
  c.f.resize(n);
  c.fu.resize(n);
  c.fuu.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto jet = layers[k].jet(u, 2);
    c.f[k] = jet[0];
    c.fu[k] = jet[1];
    c.fuu[k] = jet[2];
  }
  return c;
}

// sum_k a_k v^k and its first two v-derivatives by Horner's rule
struct SeriesValue {
  Vec3 f, fv, fvv;
};

SeriesValue horner(const std::vector<Vec3>& a, double v) {
  Vec3 f = Vec3::Zero(), fv = Vec3::Zero(), fvv = Vec3::Zero();
  for (int k = static_cast<int>(a.size()) - 1; k >= 0; --k) {
    fvv = fvv * v + 2.0 * fv;
    fv = fv * v + f;
    f = f * v + a[k];
  }
  return {f, fv, fvv};
}

void fill(const LayerColumn& c, double v, Vec3& F, Vec3& F_u, Vec3& F_v, Vec3& F_uu, Vec3& F_uv,
          Vec3& F_vv) {
  const auto s0 = horner(c.f, v);
  const auto s1 = horner(c.fu, v);
  const auto s2 = horner(c.fuu, v);
  F = s0.f;
  F_v = s0.fv;
  F_vv = s0.fvv;
  F_u = s1.f;
  F_uv = s1.fv;
  F_uu = s2.f;
}

FrameSample series_sample(const LayerColumn& d, const LayerColumn& c, const Vec3& p, double v) {
  FrameSample s;
  fill(d, v, s.X, s.X_u, s.X_v, s.X_uu, s.X_uv, s.X_vv);
  s.X += p;
  fill(c, v, s.N, s.N_u, s.N_v, s.N_uu, s.N_uv, s.N_vv);
  return s;
}

void check_height(const SurfaceJet& sjet, double v) {
  if (std::abs(v) > sjet.gauss().trust_height()) {
    std::ostringstream msg;
    msg << "|v| = " << std::abs(v) << " exceeds the trusted strip height "
        << sjet.gauss().trust_height();
    throw Error(ErrorCode::Extrapolation, "surface_builder", msg.str());
  }
}

}  // namespace

SurfaceJet integrate_surface(const GaussJet& jet, const Vec3& p) {
  const int M = jet.modes();
  const int K = jet.taylor_order();
  const FourierGrid grid(product_grid_size(M), 2 * M);
  const int G = grid.size();

  std::vector<std::vector<Vec3>> val(K + 1), du(K + 1);
  for (int k = 0; k <= K; ++k) {
    val[k] = grid.synthesize(jet.layer(k));
    du[k] = grid.synthesize(jet.layer(k), 1);
  }

  SurfaceJet s;
  s.p_ = p;
  s.gauss_ = std::make_shared<const GaussJet>(jet);
  s.d_.assign(K + 2, FourierCurve3().padded(2 * M));

  std::vector<Vec3> acc(G);
  // X_v = -N x N_u, term by term: k d_k = -(N x N_u)_{k-1}
  for (int k = 1; k <= K + 1; ++k) {
    std::fill(acc.begin(), acc.end(), Vec3::Zero());
    for (int i = 0; i <= k - 1; ++i) {
      const int j = k - 1 - i;
      for (int g = 0; g < G; ++g) acc[g] += val[i][g].cross(du[j][g]);
    }
    FourierCurve3 d = grid.project(acc, 2 * M);
    d *= -1.0 / k;
    s.d_[k] = d;
  }

  // X_u = N x N_v must agree with d_k' wherever the N series is complete
  double residual = 0.0;
  for (int k = 1; k <= K - 1; ++k) {
    std::fill(acc.begin(), acc.end(), Vec3::Zero());
    for (int i = 0; i <= k; ++i) {
      const int j = k - i + 1;
      for (int g = 0; g < G; ++g) acc[g] += static_cast<double>(j) * val[i][g].cross(val[j][g]);
    }
    FourierCurve3 diff = s.d_[k].differentiated(1);
    diff += -1.0 * grid.project(acc, 2 * M);
    residual = std::max(residual, diff.max_coefficient());
  }
  s.compat_ = residual;
  if (residual > 1e-6) {
    std::ostringstream msg;
    msg << "mixed-partial compatibility residual " << residual
        << " exceeds 1e-6; the Gauss jet is not harmonic";
    throw Error(ErrorCode::Integrability, "surface_builder", msg.str());
  }
  return s;
}

SurfaceJet reflect_extend(const SurfaceJet& sjet) {
  SurfaceJet r = sjet;
  r.reflected_ = true;
  return r;
}

FrameSample evaluate_surface(const SurfaceJet& sjet, double u, double v) {
  if (sjet.reflected() && v < 0.0) return reflect(evaluate_surface(sjet, u, -v), sjet.base_point());
  check_height(sjet, v);
  return series_sample(column(sjet.layers(), u), column(sjet.gauss().layers(), u), sjet.base_point(),
                       v);
}

SurfaceMap surface_map(const SurfaceJet& sjet) {
  return [sjet](double u, double v) { return evaluate_surface(sjet, u, v); };
}

SurfacePatch sample_patch(const SurfaceJet& sjet, int u_count, const Axis& v_axis) {
  if (v_axis.kind == AxisKind::Periodic) {
    throw Error(ErrorCode::Domain, "surface_builder", "the v axis of a patch cannot be periodic");
  }
  if (!sjet.reflected() || v_axis.lo >= 0.0) check_height(sjet, v_axis.lo);
  check_height(sjet, v_axis.hi);
  PatchGrid grid{Axis::periodic(u_count), v_axis};
  SurfacePatch patch;
  patch.grid = grid;
  patch.origin = PatchOrigin::CauchyPipeline;
  patch.conformal = true;
  patch.source = surface_map(sjet);
  patch.samples.resize(grid.size());
  patch.singular.assign(grid.size(), false);
  const auto vs = v_axis.nodes();
  for (int i = 0; i < grid.u.count; ++i) {
    const double u = grid.u.node(i);
    const auto d = column(sjet.layers(), u);
    const auto c = column(sjet.gauss().layers(), u);
    for (int j = 0; j < grid.v.count; ++j) {
      const double v = vs[j];
      patch.samples[grid.index(i, j)] =
          (sjet.reflected() && v < 0.0)
              ? reflect(series_sample(d, c, sjet.base_point(), -v), sjet.base_point())
              : series_sample(d, c, sjet.base_point(), v);
    }
  }
  return patch;
}

// ---------------------------------------------------------------------------
// Rotational peaked spheres

namespace {

void check_A(double A, bool allow_one) {
  if (!(A > 0.0 && (A < 1.0 || (allow_one && A == 1.0)))) {
    throw Error(ErrorCode::Domain, "surface_builder",
                allow_one ? "A must lie in (0, 1]" : "A must lie in (0, 1)");
  }
}

// meridian sample at (u, t) with h(u) supplied
FrameSample meridian_sample(double A, double u, double t, double h) {
  const double su = std::sin(u), cu = std::cos(u);
  const double ct = std::cos(t), st = std::sin(t);
  const double f = A * cu, f1 = -A * su, f2 = -A * cu, f3 = A * su;
  const double w = std::sqrt(1.0 - A * A * su * su);
  const double w1 = -A * A * su * cu / w;
  const double w2 = -A * A * (std::cos(2 * u) / w - su * cu * w1 / (w * w));

  FrameSample s;
  s.X = Vec3(f * ct, f * st, h);
  s.X_u = Vec3(f1 * ct, f1 * st, w);
  s.X_v = Vec3(-f * st, f * ct, 0);
  s.X_uu = Vec3(f2 * ct, f2 * st, w1);
  s.X_uv = Vec3(-f1 * st, f1 * ct, 0);
  s.X_vv = Vec3(-f * ct, -f * st, 0);
  s.N = Vec3(-w * ct, -w * st, f1);
  s.N_u = Vec3(-w1 * ct, -w1 * st, f2);
  s.N_v = Vec3(w * st, -w * ct, 0);
  s.N_uu = Vec3(-w2 * ct, -w2 * st, f3);
  s.N_uv = Vec3(w1 * st, -w1 * ct, 0);
  s.N_vv = Vec3(w * ct, w * st, 0);
  return s;
}

double speed(double A, double u) {
  const double s = std::sin(u);
  return std::sqrt(1.0 - A * A * s * s);
}

}  // namespace

double rotational_height(double A, double u) {
  check_A(A, true);
  return integrate([A](double r) { return speed(A, r); }, 0.0, u, 1e-12);
}

SurfaceMap rotational_map(double A) {
  check_A(A, true);
  return [A](double u, double t) { return meridian_sample(A, u, t, rotational_height(A, u)); };
}

SurfacePatch rotational_peaked_sphere(double A, const PatchGrid& grid) {
  check_A(A, true);
  if (!(grid.u.lo > -pi / 2 && grid.u.hi < pi / 2) || grid.u.kind == AxisKind::Periodic) {
    throw Error(ErrorCode::Domain, "surface_builder",
                "meridian range must lie inside (-pi/2, pi/2)");
  }
  SurfacePatch patch;
  patch.grid = grid;
  patch.origin = PatchOrigin::RotationalExact;
  patch.conformal = false;
  patch.source = rotational_map(A);
  patch.samples.resize(grid.size());
  patch.singular.assign(grid.size(), false);
  const auto ts = grid.v.nodes();
  for (int i = 0; i < grid.u.count; ++i) {
    const double u = grid.u.node(i);
    const double h = rotational_height(A, u);
    for (int j = 0; j < grid.v.count; ++j) {
      patch.samples[grid.index(i, j)] = meridian_sample(A, u, ts[j], h);
    }
  }
  return patch;
}

double rotational_diameter(double A) {
  check_A(A, true);
  return 2.0 * integrate([A](double r) { return speed(A, r); }, 0.0, pi / 2, 1e-13);
}

double conformal_s_of_u(double A, double u) {
  check_A(A, true);
  if (A == 1.0 && !(std::abs(u) < pi / 2)) {
    throw Error(ErrorCode::Domain, "surface_builder", "sphere chart needs |u| < pi/2");
  }
  return integrate([A](double r) { return 1.0 / speed(A, r); }, 0.0, u, 1e-12);
}

double conformal_u_of_s(double A, double s) {
  check_A(A, true);
  // 1 <= ds/du <= 1/sqrt(1 - A^2) brackets the root; for the sphere
  // |u| < pi/2
  double lo = 0.0, hi = 0.0;
  const double bound = A < 1.0 ? std::abs(s) * std::sqrt(1.0 - A * A) : 0.0;
  if (s >= 0) {
    lo = bound;
    hi = A < 1.0 ? s : std::min(s, pi / 2);
  } else {
    lo = A < 1.0 ? s : std::max(s, -pi / 2);
    hi = -bound;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (conformal_s_of_u(A, mid) < s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double RotationalConformal::s_of_u(double u) const { return conformal_s_of_u(A, u); }
double RotationalConformal::u_of_s(double s) const { return conformal_u_of_s(A, s); }

RotationalConformal rotational_conformal(double A) {
  if (A == 1.0) {
    throw Error(ErrorCode::Divergence, "surface_builder",
                "the conformal modulus diverges for the round sphere (A = 1)");
  }
  check_A(A, false);
  RotationalConformal r;
  r.A = A;
  r.a = integrate([A](double x) { return 1.0 / speed(A, x); }, 0.0, pi / 2, 1e-13);
  r.modulus = std::exp(2.0 * r.a);
  return r;
}

SurfaceMap rotational_conformal_map(double A, double s_offset) {
  check_A(A, true);
  struct Cache {
    double v = std::numeric_limits<double>::quiet_NaN();
    double u_mer = 0.0, h = 0.0;
  };
  auto cache = std::make_shared<Cache>();
  return [A, s_offset, cache](double u, double v) {
    if (v != cache->v) {
      cache->v = v;
      cache->u_mer = conformal_u_of_s(A, v + s_offset);
      cache->h = rotational_height(A, cache->u_mer);
    }
    const double um = cache->u_mer;
    const FrameSample m = meridian_sample(A, um, u + pi, cache->h);
    // d/dv = w d/du_mer along the meridian
    const double su = std::sin(um), cu = std::cos(um);
    const double w = speed(A, um);
    const double w1 = -A * A * su * cu / w;
    FrameSample s;
    s.X = m.X;
    s.X_u = m.X_v;
    s.X_uu = m.X_vv;
    s.X_v = w * m.X_u;
    s.X_uv = w * m.X_uv;
    s.X_vv = w * w1 * m.X_u + w * w * m.X_uu;
    s.N = m.N;
    s.N_u = m.N_v;
    s.N_uu = m.N_vv;
    s.N_v = w * m.N_u;
    s.N_uv = w * m.N_uv;
    s.N_vv = w * w1 * m.N_u + w * w * m.N_uu;
    return s;
  };
}

SurfaceMap rotational_cauchy_map(double A) {
  return rotational_conformal_map(A, -rotational_conformal(A).a);
}

LimitCircleCurvature limit_circle_curvature(double A) {
  check_A(A, false);
  const double r = std::sqrt(1.0 - A * A);
  // N_A(-pi/2, t) = (-r cos t, -r sin t, A)
  const auto circle = SphericalCurve::from_fourier(
      FourierCurve3({Vec3(0, 0, A), Vec3(-r, 0, 0)}, {Vec3(0, -r, 0)}), false);
  return {std::abs(geodesic_curvature(circle, 0.0)), std::sqrt((2.0 - A * A) / (1.0 - A * A))};
}

// ---------------------------------------------------------------------------
// Transformations

FrameSample parallel(const FrameSample& s, int sign) {
  const double c = sign >= 0 ? 1.0 : -1.0;
  FrameSample f = s;
  f.X += c * s.N;
  f.X_u += c * s.N_u;
  f.X_v += c * s.N_v;
  f.X_uu += c * s.N_uu;
  f.X_uv += c * s.N_uv;
  f.X_vv += c * s.N_vv;
  return f;
}

SurfaceMap parallel_map(const SurfaceMap& map, int sign) {
  return [map, sign](double u, double v) { return parallel(map(u, v), sign); };
}

SurfacePatch parallel_cmc(const SurfacePatch& patch, int sign) {
  SurfacePatch out = patch;
  out.origin = PatchOrigin::ParallelCmc;
  out.source = patch.source ? parallel_map(patch.source, sign) : SurfaceMap{};
  double largest = 0.0;
  std::vector<double> det(patch.samples.size());
  for (std::size_t k = 0; k < patch.samples.size(); ++k) {
    out.samples[k] = parallel(patch.samples[k], sign);
    det[k] = out.samples[k].X_u.cross(out.samples[k].X_v).squaredNorm();
    largest = std::max(largest, det[k]);
  }
  for (std::size_t k = 0; k < det.size(); ++k) {
    out.singular[k] = patch.singular[k] || det[k] <= 1e-12 * std::max(1.0, largest);
  }
  return out;
}

FrameSample reflect(const FrameSample& o, const Vec3& p) {
  FrameSample r;
  r.X = 2.0 * p - o.X;
  r.X_u = -o.X_u;
  r.X_v = o.X_v;
  r.X_uu = -o.X_uu;
  r.X_uv = o.X_uv;
  r.X_vv = -o.X_vv;
  r.N = o.N;
  r.N_u = o.N_u;
  r.N_v = -o.N_v;
  r.N_uu = o.N_uu;
  r.N_uv = -o.N_uv;
  r.N_vv = o.N_vv;
  return r;
}

SurfaceMap reflect_map(const SurfaceMap& map, const Vec3& p) {
  return [map, p](double u, double v) { return reflect(map(u, -v), p); };
}

SurfacePatch reflect_patch(const SurfacePatch& patch, const Vec3& p) {
  SurfacePatch out = patch;
  out.origin = PatchOrigin::Reflection;
  out.grid.v.lo = -patch.grid.v.hi;
  out.grid.v.hi = -patch.grid.v.lo;
  out.source = patch.source ? reflect_map(patch.source, p) : SurfaceMap{};
  const int nv = patch.grid.v.count;
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < patch.grid.u.count; ++i) {
      const int from = patch.grid.index(i, nv - 1 - j);
      out.samples[out.grid.index(i, j)] = reflect(patch.samples[from], p);
      out.singular[out.grid.index(i, j)] = patch.singular[from];
    }
  }
  return out;
}

namespace {

using detail::Jet2;

Jet2 component(const Vec3& f, const Vec3& fu, const Vec3& fv, const Vec3& fuu, const Vec3& fuv,
               const Vec3& fvv, int k) {
  return {f[k], fu[k], fv[k], fuu[k], fuv[k], fvv[k]};
}

void store(const Jet2& j, int k, Vec3& f, Vec3& fu, Vec3& fv, Vec3& fuu, Vec3& fuv, Vec3& fvv) {
  f[k] = j.f;
  fu[k] = j.u;
  fv[k] = j.v;
  fuu[k] = j.uu;
  fuv[k] = j.uv;
  fvv[k] = j.vv;
}

}  // namespace

FrameSample legendre(const FrameSample& s) {
  auto X = [&](int k) { return component(s.X, s.X_u, s.X_v, s.X_uu, s.X_uv, s.X_vv, k); };
  auto N = [&](int k) { return component(s.N, s.N_u, s.N_v, s.N_uu, s.N_uv, s.N_vv, k); };
  const Jet2 inv3 = detail::reciprocal(N(2));
  const Jet2 L1 = -(N(0) * inv3);
  const Jet2 L2 = -(N(1) * inv3);
  const Jet2 L3 = -((X(0) * N(0) + X(1) * N(1)) * inv3) - X(2);
  const Jet2 r = detail::reciprocal(
      detail::sqrt(Jet2::constant(1.0) + X(0) * X(0) + X(1) * X(1)));
  const Jet2 n1 = -(X(0) * r), n2 = -(X(1) * r), n3 = r;

  FrameSample out;
  store(L1, 0, out.X, out.X_u, out.X_v, out.X_uu, out.X_uv, out.X_vv);
  store(L2, 1, out.X, out.X_u, out.X_v, out.X_uu, out.X_uv, out.X_vv);
  store(L3, 2, out.X, out.X_u, out.X_v, out.X_uu, out.X_uv, out.X_vv);
  store(n1, 0, out.N, out.N_u, out.N_v, out.N_uu, out.N_uv, out.N_vv);
  store(n2, 1, out.N, out.N_u, out.N_v, out.N_uu, out.N_uv, out.N_vv);
  store(n3, 2, out.N, out.N_u, out.N_v, out.N_uu, out.N_uv, out.N_vv);
  return out;
}

SurfacePatch legendre_transform(const SurfacePatch& patch) {
  std::vector<int> offending;
  for (int k = 0; k < static_cast<int>(patch.samples.size()); ++k) {
    if (!(std::abs(patch.samples[k].N.z()) > 1e-6)) offending.push_back(k);
  }
  if (!offending.empty()) {
    std::ostringstream msg;
    msg << offending.size() << " samples with |N_3| <= 1e-6 (first at grid index";
    for (std::size_t n = 0; n < std::min<std::size_t>(offending.size(), 5); ++n) {
      const int k = offending[n];
      msg << " (" << k % patch.grid.u.count << "," << k / patch.grid.u.count << ")";
    }
    msg << ")";
    throw Error(ErrorCode::Horizon, "surface_builder", msg.str());
  }
  SurfacePatch out = patch;
  out.origin = PatchOrigin::Legendre;
  out.conformal = false;
  if (patch.source) {
    const SurfaceMap src = patch.source;
    out.source = [src](double u, double v) { return legendre(src(u, v)); };
  }
  for (std::size_t k = 0; k < patch.samples.size(); ++k) out.samples[k] = legendre(patch.samples[k]);
  return out;
}

}  // namespace ksurf
