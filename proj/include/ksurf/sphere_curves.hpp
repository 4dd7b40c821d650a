#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ksurf/fourier.hpp"

namespace ksurf {

/// A closed real-analytic curve on the unit sphere, stored as a truncated
/// Fourier series in the parameter s in [0, 2*pi).
class SphericalCurve {
 public:
  /// Builds the curve from an R^3 Fourier curve. With `normalize` the curve
  /// is projected radially onto S^2 and re-expanded until the expansion is
  /// resolved; without it the input must already lie on S^2.
  static SphericalCurve from_fourier(const FourierCurve3& gamma, bool normalize);

  const FourierCurve3& base() const { return base_; }
  double norm_defect() const { return norm_defect_; }
  double max_speed() const { return max_speed_; }
  /// Threshold below which |alpha'| counts as zero.
  double regularity_tolerance() const { return 1e-8 * max_speed_; }

  Vec3 operator()(double s) const { return base_.value(s); }

  SphericalCurve rotated(const Mat3& rotation) const;
  SphericalCurve shifted(double shift) const;

 private:
  SphericalCurve(FourierCurve3 base, double norm_defect, double max_speed)
      : base_(std::move(base)), norm_defect_(norm_defect), max_speed_(max_speed) {}

  FourierCurve3 base_;
  double norm_defect_ = 0.0;
  double max_speed_ = 0.0;
};

enum class CurveVerdict { RegularConvexJordan, AdmissibleCuspCurve, Inadmissible };

const char* to_string(CurveVerdict verdict);

struct CurveClassification {
  CurveVerdict verdict = CurveVerdict::Inadmissible;
  std::vector<double> cusp_locations;
  std::vector<double> cusp_invariants;
  double min_speed = 0.0;
  /// min of |alpha'| k over regular samples and cusp limits
  double min_abs_invariant = 0.0;
  bool simple = false;
};

struct ConeAngle {
  double angle_area = 0.0;  // 2*pi - enclosed area
  double angle_gb = 0.0;    // total geodesic curvature
  double discrepancy = 0.0;
};

/// (alpha, alpha', ..., alpha^(order)) at s; order <= 4.
std::vector<Vec3> curve_jet(const SphericalCurve& curve, double s, int order);

/// <alpha'', alpha x alpha'> / |alpha'|^3 at a regular point.
double geodesic_curvature(const SphericalCurve& curve, double s);

/// |alpha'| k_alpha at s0, or its limit when alpha'(s0) = 0.
double cusp_invariant(const SphericalCurve& curve, double s0);

CurveClassification classify_curve(const SphericalCurve& curve);

/// Area of the smaller region bounded by a regular convex Jordan curve.
double enclosed_spherical_area(const SphericalCurve& curve);

ConeAngle cone_angle(const SphericalCurve& curve);

/// Lifts a planar curve (third component ignored) into the upper hemisphere
/// through the inverse of the central projection (x1/x3, x2/x3).
SphericalCurve gnomonic_lift(const FourierCurve3& planar);

/// Strict angle inequalities n-2 < sum theta_j < n-2 + min theta_j for
/// normalized cone angles theta_j in (0, 1).
bool troyanov_check(std::span<const double> thetas);

namespace builtin {

/// Circle of constant height `cos_phi`, counterclockwise about the north pole.
SphericalCurve circle(double cos_phi);
SphericalCurve equator();
/// Spherical cardioid R_z(s) R_x(tilt) R_z(s) e: the trace of a cone rolling
/// on an equal cone. One admissible (s^2, s^3) cusp at s = 0, where
/// |alpha'| k tends to 1.5 cos(tilt / 2).
SphericalCurve cusp_demo(double tilt = 0.8);
/// Circle of height `cos_phi` deformed by two random small tilts between
/// counter-rotating spins:
///   R_z((1+a+b) s) R_x(e1) R_z(-a s) R_y(e2) R_z(-b s) e,
/// with a, b in [1, max_spin] and |e_i| <= amplitude. Every factor is a
/// trigonometric polynomial rotation, so the curve lies exactly on the
/// sphere with at most 1 + 2(a+b) Fourier modes.
SphericalCurve perturbed_circle(double cos_phi, double amplitude, std::uint64_t seed,
                                int max_spin = 2);

}  // namespace builtin

}  // namespace ksurf
