#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ksurf/fourier.hpp"
#include "ksurf/grid.hpp"
#include "ksurf/harmonic_cauchy.hpp"

namespace ksurf {

/// Position, unit normal and their partial derivatives up to order two at
/// one parameter point.
struct FrameSample {
  Vec3 X, X_u, X_v, X_uu, X_uv, X_vv;
  Vec3 N, N_u, N_v, N_uu, N_uv, N_vv;
};

/// Exact evaluation rule (u, v) -> FrameSample.
using SurfaceMap = std::function<FrameSample(double u, double v)>;

enum class PatchOrigin { CauchyPipeline, RotationalExact, ParallelCmc, Reflection, Legendre };
std::string to_string(PatchOrigin origin);

struct SurfacePatch {
  PatchGrid grid;
  std::vector<FrameSample> samples;  // grid.index(i, j)
  PatchOrigin origin = PatchOrigin::CauchyPipeline;
  /// Coordinates are conformal for the second fundamental form.
  bool conformal = false;
  /// Samples where the first fundamental form degenerates.
  std::vector<bool> singular;
  /// Rule the samples were taken from; lets checks resample independently.
  SurfaceMap source;

  const FrameSample& at(int i, int j) const { return samples[grid.index(i, j)]; }
};

SurfacePatch sample_map(const SurfaceMap& map, const PatchGrid& grid, PatchOrigin origin,
                        bool conformal);

/// v-series of X - p, X = p + sum_{k>=1} d_k(u) v^k, integrated from the
/// representation formula X_u = N x N_v, X_v = -N x N_u.
class SurfaceJet {
 public:
  const Vec3& base_point() const { return p_; }
  /// d_0 .. d_{K+1}; d_0 is identically zero.
  const std::vector<FourierCurve3>& layers() const { return d_; }
  const GaussJet& gauss() const { return *gauss_; }
  /// Largest Fourier coefficient of d_k' - (N x N_v)_k over all k.
  double compatibility_residual() const { return compat_; }
  /// Negative v is evaluated by the reflection rule X(u,-v) = 2p - X(u,v),
  /// N(u,-v) = N(u,v) instead of the series.
  bool reflected() const { return reflected_; }

 private:
  friend SurfaceJet integrate_surface(const GaussJet&, const Vec3&);
  friend SurfaceJet reflect_extend(const SurfaceJet&);

  Vec3 p_ = Vec3::Zero();
  std::vector<FourierCurve3> d_;
  std::shared_ptr<const GaussJet> gauss_;
  double compat_ = 0.0;
  bool reflected_ = false;
};

SurfaceJet integrate_surface(const GaussJet& jet, const Vec3& p);

FrameSample evaluate_surface(const SurfaceJet& sjet, double u, double v);
SurfaceMap surface_map(const SurfaceJet& sjet);

/// Samples on a periodic u axis times `v_axis`; |v| must stay within the
/// trust height of the Gauss jet.
SurfacePatch sample_patch(const SurfaceJet& sjet, int u_count, const Axis& v_axis);

/// Extension to negative v by point reflection through p.
SurfaceJet reflect_extend(const SurfaceJet& sjet);

// ---------------------------------------------------------------------------
// Rotational peaked spheres
//   X_A(u, t) = (A cos u cos t, A cos u sin t, h(u)),
//   h(u) = int_0^u sqrt(1 - A^2 sin^2 r) dr,
//   N_A = (-h' cos t, -h' sin t, -A sin u).

double rotational_height(double A, double u);

/// Meridian chart (u, t), u in (-pi/2, pi/2), t periodic.
SurfaceMap rotational_map(double A);
SurfacePatch rotational_peaked_sphere(double A, const PatchGrid& grid);

/// Apex distance 2 int_0^{pi/2} sqrt(1 - A^2 sin^2 u) du.
double rotational_diameter(double A);

struct RotationalConformal {
  double A = 0.0;
  double a = 0.0;        // int_0^{pi/2} (1 - A^2 sin^2 u)^{-1/2} du
  double modulus = 0.0;  // e^{2a}

  double s_of_u(double u) const;
  double u_of_s(double s) const;
};

RotationalConformal rotational_conformal(double A);

/// s(u) = int_0^u (1 - A^2 sin^2 r)^{-1/2} dr and its inverse, A in (0, 1].
double conformal_s_of_u(double A, double u);
double conformal_u_of_s(double A, double s);

/// The rotational surface in the coordinates of the Cauchy problem for
/// builtin::circle(A): (u, v) -> X_A(u(v + s_offset), u + pi). With
/// s_offset = -a the line v = 0 is the apex u = -pi/2 and N(u, 0) is the
/// circle of height A. A = 1 is the round sphere (s_offset = 0 required).
SurfaceMap rotational_conformal_map(double A, double s_offset);
/// Default: s_offset = -a, so v = 0 is the singular point.
SurfaceMap rotational_cauchy_map(double A);

/// Geodesic curvature of the limit-normal circle N_A(-pi/2, t): the value
/// from the Gauss-Bonnet-consistent computation and the alternative
/// expression sqrt((2 - A^2)/(1 - A^2)) carried alongside.
struct LimitCircleCurvature {
  double computed;
  double alternative;
};
LimitCircleCurvature limit_circle_curvature(double A);

// ---------------------------------------------------------------------------
// Transformations

/// X + sign N with the same unit normal.
FrameSample parallel(const FrameSample& s, int sign);
SurfaceMap parallel_map(const SurfaceMap& map, int sign);
/// Positions X + sign N; samples where the shifted first fundamental form
/// degenerates relative to the original are flagged singular.
SurfacePatch parallel_cmc(const SurfacePatch& patch, int sign);

/// The sample of the reflected surface 2p - X(u, -v), N(u, -v) at (u, v),
/// given the original sample at (u, -v).
FrameSample reflect(const FrameSample& original_at_minus_v, const Vec3& p);
SurfaceMap reflect_map(const SurfaceMap& map, const Vec3& p);
/// Reflected patch on the mirrored v axis.
SurfacePatch reflect_patch(const SurfacePatch& patch, const Vec3& p);

/// (-N1/N3, -N2/N3, -(X1 N1 + X2 N2)/N3 - X3) with unit normal
/// (-X1, -X2, 1)/sqrt(1 + X1^2 + X2^2); derivatives by the chain rule.
FrameSample legendre(const FrameSample& s);
SurfacePatch legendre_transform(const SurfacePatch& patch);

}  // namespace ksurf
