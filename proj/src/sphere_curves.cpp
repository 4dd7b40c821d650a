#include "ksurf/sphere_curves.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

namespace ksurf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kPolygonVertices = 4096;
constexpr double kInvariantFloor = 1e-8;  // |alpha'| k below this is a flat point
constexpr int kMaxModes = 1024;

int dense_count(const FourierCurve3& c) { return std::max(kPolygonVertices, 16 * c.modes()); }

// |alpha'| k = <alpha'', alpha x alpha'> / |alpha'|^2
double invariant_from_jet(const std::vector<Vec3>& j) {
  return j[2].dot(j[0].cross(j[1])) / j[1].squaredNorm();
}

double max_norm_defect(const FourierCurve3& c) {
  const int n = dense_count(c);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(c.value(kTwoPi * i / n).norm() - 1.0));
  return worst;
}

double max_speed_of(const FourierCurve3& c) {
  const FourierCurve3 d = c.differentiated();
  const int n = dense_count(c);
  double best = 0.0;
  for (int i = 0; i < n; ++i) best = std::max(best, d.value(kTwoPi * i / n).norm());
  return best;
}

double wrap(double s) {
  double r = std::fmod(s, kTwoPi);
  return r < 0 ? r + kTwoPi : r;
}

// Zero of <alpha', alpha''> near s (a minimum of the speed) by Newton.
double refine_speed_minimum(const FourierCurve3& c, double s) {
  for (int it = 0; it < 50; ++it) {
    const auto j = c.jet(s, 3);
    const double g = j[1].dot(j[2]);
    const double dg = j[2].squaredNorm() + j[1].dot(j[3]);
    if (dg <= 0.0) break;
    const double step = g / dg;
    s -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return wrap(s);
}

struct Segment2 {
  Eigen::Vector2d a, b;
};

double orient(const Eigen::Vector2d& p, const Eigen::Vector2d& q, const Eigen::Vector2d& r) {
  return (q - p).x() * (r - p).y() - (q - p).y() * (r - p).x();
}

bool on_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& q, const Eigen::Vector2d& r) {
  return std::min(p.x(), r.x()) <= q.x() && q.x() <= std::max(p.x(), r.x()) &&
         std::min(p.y(), r.y()) <= q.y() && q.y() <= std::max(p.y(), r.y());
}

bool segments_intersect(const Segment2& s1, const Segment2& s2) {
  const double d1 = orient(s2.a, s2.b, s1.a);
  const double d2 = orient(s2.a, s2.b, s1.b);
  const double d3 = orient(s1.a, s1.b, s2.a);
  const double d4 = orient(s1.a, s1.b, s2.b);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment(s2.a, s1.a, s2.b)) return true;
  if (d2 == 0 && on_segment(s2.a, s1.b, s2.b)) return true;
  if (d3 == 0 && on_segment(s1.a, s2.a, s1.b)) return true;
  if (d4 == 0 && on_segment(s1.a, s2.b, s1.b)) return true;
  return false;
}

Vec3 spherical_centroid(const FourierCurve3& c) {
  // the mean of a closed curve is its constant Fourier mode
  Vec3 m = c.cos_coeff(0);
  return m.norm() > 0 ? Vec3(m.normalized()) : Vec3::Zero();
}

// Jordan test on the 4096-vertex geodesic polygon. Geodesic edges become
// straight segments under central projection from the centroid direction.
bool polygon_is_simple(const FourierCurve3& c) {
  const Vec3 center = spherical_centroid(c);
  if (center.isZero()) return false;
  const auto pts = c.sample(kPolygonVertices);
  Vec3 e1 = center.unitOrthogonal();
  Vec3 e2 = center.cross(e1);
  std::vector<Eigen::Vector2d> q(kPolygonVertices);
  for (int i = 0; i < kPolygonVertices; ++i) {
    const double h = pts[i].dot(center);
    if (h <= 1e-12) return false;  // leaves the open hemisphere
    const Vec3 p = pts[i] / h;
    q[i] = {p.dot(e1), p.dot(e2)};
  }
  const int n = kPolygonVertices;
  std::vector<Segment2> seg(n);
  std::vector<Eigen::AlignedBox2d> box(n);
  for (int i = 0; i < n; ++i) {
    seg[i] = {q[i], q[(i + 1) % n]};
    box[i] = Eigen::AlignedBox2d(seg[i].a.cwiseMin(seg[i].b), seg[i].a.cwiseMax(seg[i].b));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the wrap
      if (!box[i].intersects(box[j])) continue;
      if (segments_intersect(seg[i], seg[j])) return false;
    }
  }
  return true;
}

}  // namespace

const char* to_string(CurveVerdict verdict) {
  switch (verdict) {
    case CurveVerdict::RegularConvexJordan: return "RegularConvexJordan";
    case CurveVerdict::AdmissibleCuspCurve: return "AdmissibleCuspCurve";
    case CurveVerdict::Inadmissible: return "Inadmissible";
  }
  return "Inadmissible";
}

SphericalCurve SphericalCurve::from_fourier(const FourierCurve3& gamma, bool normalize) {
  FourierCurve3 base;
  if (normalize) {
    const int n = dense_count(gamma);
    double min_radius = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) min_radius = std::min(min_radius, gamma.value(kTwoPi * i / n).norm());
    if (min_radius <= 1e-6) {
      throw Error(ErrorCode::OriginCrossing, "sphere_curves",
                  "curve passes within 1e-6 of the origin; radial projection undefined");
    }
    int modes = std::max(8, gamma.modes());
    for (;;) {
      const int g = 4 * modes + 4;
      std::vector<Vec3> samples(g);
      for (int j = 0; j < g; ++j) samples[j] = gamma.value(kTwoPi * j / g).normalized();
      base = FourierCurve3::from_samples(samples, modes);
      if (base.tail() <= 1e-14 * base.head() || modes >= kMaxModes) break;
      modes *= 2;
    }
  } else {
    base = gamma.padded(4);
  }
  if (base.under_resolved()) {
    throw Error(ErrorCode::Resolution, "sphere_curves",
                "Fourier tail exceeds 1e-8 of the leading coefficient");
  }
  const double defect = max_norm_defect(base);
  if (defect > 1e-9) {
    std::ostringstream msg;
    msg << "curve is not on the unit sphere (norm defect " << defect << ")";
    throw Error(normalize ? ErrorCode::Resolution : ErrorCode::Domain, "sphere_curves", msg.str());
  }
  return SphericalCurve(base, defect, max_speed_of(base));
}

SphericalCurve SphericalCurve::rotated(const Mat3& rotation) const {
  return SphericalCurve(base_.rotated(rotation), norm_defect_, max_speed_);
}

SphericalCurve SphericalCurve::shifted(double shift) const {
  return SphericalCurve(base_.shifted(shift), norm_defect_, max_speed_);
}

std::vector<Vec3> curve_jet(const SphericalCurve& curve, double s, int order) {
  return curve.base().jet(s, order);
}

double geodesic_curvature(const SphericalCurve& curve, double s) {
  const auto j = curve.base().jet(s, 2);
  const double speed = j[1].norm();
  if (speed <= curve.regularity_tolerance()) {
    throw Error(ErrorCode::SingularPoint, "sphere_curves",
                "alpha' vanishes; use cusp_invariant at singular points");
  }
  return j[2].dot(j[0].cross(j[1])) / (speed * speed * speed);
}

double cusp_invariant(const SphericalCurve& curve, double s0) {
  const FourierCurve3& c = curve.base();
  const auto j0 = c.jet(s0, 2);
  if (j0[1].norm() > curve.regularity_tolerance()) return invariant_from_jet(j0);

  // Least-squares cubic fit of |alpha'| k(s0 + t) over shrinking windows
  // lo <= |t| <= hi; the intercept estimates the limit.
  constexpr int kWindows = 4;
  constexpr int kPerSide = 12;
  std::vector<double> estimates;
  for (int w = 0; w < kWindows; ++w) {
    const double hi = 1e-2 / (1 << w);
    const double lo = 1e-3 / (1 << w);
    Eigen::MatrixXd design(2 * kPerSide, 4);
    Eigen::VectorXd rhs(2 * kPerSide);
    int row = 0;
    for (int side : {-1, 1}) {
      for (int i = 0; i < kPerSide; ++i) {
        const double t = side * (lo + (hi - lo) * i / (kPerSide - 1));
        const double x = t / hi;
        design.row(row) << 1.0, x, x * x, x * x * x;
        rhs(row) = invariant_from_jet(c.jet(s0 + t, 2));
        ++row;
      }
    }
    const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
    estimates.push_back(coef(0));
  }
  const double last = estimates.back();
  const double prev = estimates[estimates.size() - 2];
  if (!std::isfinite(last) || std::abs(last - prev) > 1e-6 * std::max(1.0, std::abs(last))) {
    std::ostringstream msg;
    msg << "limit of |alpha'| k does not stabilize at s0=" << s0 << "; window estimates:";
    for (double e : estimates) msg << ' ' << e;
    throw Error(ErrorCode::NonAdmissibleCusp, "sphere_curves", msg.str());
  }
  return last;
}

CurveClassification classify_curve(const SphericalCurve& curve) {
  const FourierCurve3& c = curve.base();
  if (c.under_resolved()) {
    throw Error(ErrorCode::Resolution, "sphere_curves", "curve is under-resolved");
  }
  CurveClassification out;
  const int n = dense_count(c);
  const double eps_reg = curve.regularity_tolerance();
  std::vector<double> speed(n);
  for (int i = 0; i < n; ++i) speed[i] = c.derivative(kTwoPi * i / n, 1).norm();
  out.min_speed = *std::min_element(speed.begin(), speed.end());

  // cusp candidates: local minima of the speed well below its maximum
  for (int i = 0; i < n; ++i) {
    const double prev = speed[(i + n - 1) % n], next = speed[(i + 1) % n];
    if (speed[i] <= prev && speed[i] < next && speed[i] < 0.05 * curve.max_speed()) {
      const double s = refine_speed_minimum(c, kTwoPi * i / n);
      if (c.derivative(s, 1).norm() <= eps_reg) {
        const bool duplicate = std::any_of(out.cusp_locations.begin(), out.cusp_locations.end(),
                                           [&](double t) {
                                             const double d = std::abs(wrap(t - s + kPi) - kPi);
                                             return d < 1e-6;
                                           });
        if (!duplicate) out.cusp_locations.push_back(s);
      }
    }
  }
  out.min_speed = std::min(out.min_speed, [&] {
    double m = std::numeric_limits<double>::infinity();
    for (double s : out.cusp_locations) m = std::min(m, c.derivative(s, 1).norm());
    return m;
  }());

  bool admissible = true;
  double min_abs = std::numeric_limits<double>::infinity();
  int sign = 0;
  auto record = [&](double value) {
    min_abs = std::min(min_abs, std::abs(value));
    if (std::abs(value) <= kInvariantFloor) {
      admissible = false;
      return;
    }
    const int sg = value > 0 ? 1 : -1;
    if (sign == 0) sign = sg;
    if (sg != sign) admissible = false;
  };
  for (double s : out.cusp_locations) {
    try {
      const double c0 = cusp_invariant(curve, s);
      out.cusp_invariants.push_back(c0);
      record(c0);
    } catch (const Error&) {
      out.cusp_invariants.push_back(std::numeric_limits<double>::quiet_NaN());
      admissible = false;
    }
  }
  for (int i = 0; i < n; ++i) {
    const double s = kTwoPi * i / n;
    const bool near_cusp = std::any_of(out.cusp_locations.begin(), out.cusp_locations.end(),
                                       [&](double t) { return std::abs(wrap(t - s + kPi) - kPi) < 1e-2; });
    if (near_cusp) continue;
    if (speed[i] <= eps_reg) {
      admissible = false;  // zero of alpha' that did not refine to a cusp
      continue;
    }
    record(invariant_from_jet(c.jet(s, 2)));
  }
  out.min_abs_invariant = min_abs;

  if (!admissible) {
    out.verdict = CurveVerdict::Inadmissible;
    return out;
  }
  if (!out.cusp_locations.empty()) {
    out.verdict = CurveVerdict::AdmissibleCuspCurve;
    return out;
  }
  out.simple = polygon_is_simple(c);
  out.verdict = out.simple ? CurveVerdict::RegularConvexJordan : CurveVerdict::AdmissibleCuspCurve;
  return out;
}

namespace {

void require_convex_jordan(const SphericalCurve& curve) {
  const auto cls = classify_curve(curve);
  if (cls.verdict != CurveVerdict::RegularConvexJordan) {
    throw Error(ErrorCode::Classification, "sphere_curves",
                std::string("operation requires a regular convex Jordan curve, got ") +
                    to_string(cls.verdict));
  }
}

// Fan of infinitesimal spherical triangles (center, alpha(s), alpha(s+ds));
// each contributes det(c, alpha, alpha') / (1 + <c, alpha>) ds of excess.
// The periodic trapezoid rule integrates the smooth integrand spectrally.
double fan_area(const FourierCurve3& c) {
  const Vec3 center = spherical_centroid(c);
  const int n = dense_count(c);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto j = c.jet(kTwoPi * i / n, 1);
    acc += center.dot(j[0].cross(j[1])) / (1.0 + center.dot(j[0]));
  }
  const double signed_area = acc * kTwoPi / n;
  const double a = std::abs(signed_area);
  return std::min(a, 4.0 * kPi - a);
}

double total_geodesic_curvature(const FourierCurve3& c) {
  const int n = dense_count(c);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += invariant_from_jet(c.jet(kTwoPi * i / n, 2));
  return acc * kTwoPi / n;
}

}  // namespace

double enclosed_spherical_area(const SphericalCurve& curve) {
  require_convex_jordan(curve);
  return fan_area(curve.base());
}

ConeAngle cone_angle(const SphericalCurve& curve) {
  require_convex_jordan(curve);
  ConeAngle out;
  out.angle_area = 2.0 * kPi - fan_area(curve.base());
  out.angle_gb = std::abs(total_geodesic_curvature(curve.base()));
  out.discrepancy = std::abs(out.angle_area - out.angle_gb);
  if (out.discrepancy > 1e-6) {
    std::ostringstream msg;
    msg << "cone angle by area (" << out.angle_area << ") and by total geodesic curvature ("
        << out.angle_gb << ") disagree";
    throw Error(ErrorCode::InternalConsistency, "sphere_curves", msg.str());
  }
  return out;
}

SphericalCurve gnomonic_lift(const FourierCurve3& planar) {
  FourierCurve3 lifted = planar;
  for (int m = 0; m <= lifted.modes(); ++m) {
    lifted.cos_coeff(m).z() = 0.0;
    lifted.sin_coeff(m).z() = 0.0;
  }
  lifted.cos_coeff(0).z() = 1.0;
  return SphericalCurve::from_fourier(lifted, true);
}

bool troyanov_check(std::span<const double> thetas) {
  const std::size_t n = thetas.size();
  if (n <= 2) throw Error(ErrorCode::Domain, "sphere_curves", "need more than two cone angles");
  double sum = 0.0, min_theta = 1.0;
  for (double t : thetas) {
    if (!(t > 0.0 && t < 1.0)) {
      throw Error(ErrorCode::Domain, "sphere_curves", "normalized cone angles must lie in (0,1)");
    }
    sum += t;
    min_theta = std::min(min_theta, t);
  }
  const double lower = static_cast<double>(n) - 2.0;
  return lower < sum && sum < lower + min_theta;
}

namespace builtin {

SphericalCurve circle(double cos_phi) {
  if (!(cos_phi > -1.0 && cos_phi < 1.0)) {
    throw Error(ErrorCode::Domain, "sphere_curves", "circle height must lie in (-1,1)");
  }
  const double sin_phi = std::sqrt(1.0 - cos_phi * cos_phi);
  return SphericalCurve::from_fourier(
      FourierCurve3({Vec3(0, 0, cos_phi), Vec3(sin_phi, 0, 0)}, {Vec3(0, sin_phi, 0)}), false);
}

SphericalCurve equator() { return circle(0.0); }

namespace {

Mat3 spin_z(double a) { return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix(); }

SphericalCurve sampled_exact(const std::function<Vec3(double)>& f, int modes) {
  // two spare modes keep the reported tail at roundoff level
  modes += 2;
  std::vector<Vec3> samples(4 * modes + 8);
  const double h = 2.0 * std::numbers::pi / static_cast<double>(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) samples[j] = f(h * static_cast<double>(j));
  return SphericalCurve::from_fourier(FourierCurve3::from_samples(samples, modes), false);
}

}  // namespace

SphericalCurve cusp_demo(double tilt) {
  if (!(tilt > 0.0 && tilt < std::numbers::pi)) {
    throw Error(ErrorCode::Domain, "sphere_curves", "cardioid tilt must lie in (0, pi)");
  }
  const Mat3 tilt_x = Eigen::AngleAxisd(tilt, Vec3::UnitX()).toRotationMatrix();
  // the traced point sits on the instantaneous rotation axis at s = 0
  const Vec3 seed_point = (tilt_x.transpose() * Vec3::UnitZ() + Vec3::UnitZ()).normalized();
  return sampled_exact([&](double s) { return Vec3(spin_z(s) * tilt_x * spin_z(s) * seed_point); },
                       2);
}

SphericalCurve perturbed_circle(double cos_phi, double amplitude, std::uint64_t seed,
                                int max_spin) {
  if (!(cos_phi > -1.0 && cos_phi < 1.0) || max_spin < 1) {
    throw Error(ErrorCode::Domain, "sphere_curves", "invalid perturbed circle parameters");
  }
  // raw engine bits only, so the corpus is identical across standard libraries
  std::mt19937_64 engine(seed);
  auto uniform = [&] { return static_cast<double>(engine() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  auto spin = [&] { return 1 + static_cast<int>(engine() % static_cast<std::uint64_t>(max_spin)); };
  const int a = spin();
  const int b = spin();
  const Mat3 tilt1 = Eigen::AngleAxisd(amplitude * uniform(), Vec3::UnitX()).toRotationMatrix();
  const Mat3 tilt2 = Eigen::AngleAxisd(amplitude * uniform(), Vec3::UnitY()).toRotationMatrix();
  const Vec3 start(std::sqrt(1.0 - cos_phi * cos_phi), 0.0, cos_phi);
  return sampled_exact(
      [&](double s) {
        return Vec3(spin_z((1 + a + b) * s) * tilt1 * spin_z(-a * s) * tilt2 * spin_z(-b * s) *
                    start);
      },
      1 + 2 * (a + b));
}

}  // namespace builtin

}  // namespace ksurf
