#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "ksurf/harmonic_cauchy.hpp"
#include "ksurf/sphere_curves.hpp"
#include "ksurf/surface_builder.hpp"

namespace ksurf {

/// Per-sample conformal data of a patch, stored like the patch samples.
///   Q   = <X_z, X_z>, X_z = (X_u - i X_v)/2; Q_normal = -<N_z, N_z>
///   mu  = (|X_u|^2 + |X_v|^2)/4
///   rho = -orientation <X_u, N_u>/2, rho = |Q| sinh(omega)
///   H   = mu / rho
struct FundamentalData {
  PatchGrid grid;
  /// +1 or -1, chosen so that rho > 0 on the patch.
  int orientation = 1;
  std::vector<std::complex<double>> Q, Q_normal;
  std::vector<double> mu, rho, omega, H, K_raw;
  /// |Q| <= 1e-8 max |Q| (or <= 1e-12 mu, for patches where Q is pure
  /// roundoff): omega is +infinity there and sinh-Gordon is skipped.
  std::vector<bool> umbilic;
  double q_route_defect = 0.0;
};

/// Requires coordinates conformal for II (checked to 1e-6 relative).
FundamentalData fundamental_forms(const SurfacePatch& patch);

/// Gauss curvature det II / det I with II taken against the cross-product
/// normal, from raw derivative samples only.
double gauss_curvature_raw(const FrameSample& s);
/// Mean curvature with respect to the stored normal N.
double mean_curvature_raw(const FrameSample& s);
/// max |K_raw - 1| over the non-singular samples of any patch.
double curvature_residual(const SurfacePatch& patch);

struct StructureResiduals {
  double K_minus_1 = 0.0;
  double holo_Q = 0.0;         // max |dQ/dz-bar|
  double romu = 0.0;           // max |rho^2 - mu^2 + |Q|^2|
  double sinh_gordon = 0.0;    // max |(omega_uu + omega_vv)/4 + |Q| sinh omega|
  double H_consistency = 0.0;  // shape operator vs mu/rho vs coth(omega)
  double q_routes = 0.0;       // <X_z,X_z> vs -<N_z,N_z>
  double frontal = 0.0;        // <X_u,N>, <X_v,N>
  double conformal = 0.0;      // <X_u,N_v>, <X_v,N_u>, <X_u,N_u> - <X_v,N_v>
  double umbilic_fraction = 0.0;
};

/// Derivatives of Q and omega are taken with the collocation operators of
/// the patch axes (spectral on periodic and Chebyshev axes).
StructureResiduals verify_structure(const FundamentalData& data, const SurfacePatch& patch);

struct BoundaryChecks {
  std::vector<double> u;
  /// omega_v(u, 0) = rho_1 / |Q_0| from the series coefficients.
  std::vector<double> omega_v;
  /// |alpha'| k_alpha at the same parameters.
  std::vector<double> speed_curvature;
  /// max |omega_v - |alpha'| k_alpha|
  double omega_v_defect = 0.0;
  /// max |omega_v - 2 |alpha'| k_alpha|
  double omega_v_defect_doubled = 0.0;
  /// max |rho(u, 0)|, i.e. omega(u, 0) = 0
  double axis_value_defect = 0.0;
  /// rho keeps one strict sign on (0, scan_height] (omega has no zero).
  bool singular_scan = false;
  double scan_height = 0.0;
};

/// Parameters with |alpha'| <= 1e-2 max |alpha'| (cusp neighbourhoods) are
/// skipped in the omega_v comparison; the sign scan covers every u.
BoundaryChecks boundary_checks(const GaussJet& jet, const SurfaceJet& sjet,
                               const SphericalCurve& alpha, int u_samples = 128,
                               double scan_height = 0.3);

struct AreaRow {
  double v_min, area, total_mean_curvature;
};
struct AreaTable {
  std::vector<AreaRow> rows;
  /// Ratios of successive increments; below 1 when the integrals converge.
  std::vector<double> area_ratios, tmc_ratios;
};

/// Integrals of dA = |X_u x X_v| du dv and |H| dA over
/// u on the patch axis times v in [v_min, v_max of the patch], for each
/// v_min (in decreasing order). Uses the patch source map.
AreaTable area_and_tmc(const SurfacePatch& patch, const std::vector<double>& v_mins);

/// Height samples z(x, y) on a uniform grid, z[j * nx + i] at
/// (x0 + i h, y0 + j h).
struct GraphSamples {
  double x0 = 0, y0 = 0, h = 0;
  int nx = 0, ny = 0;
  std::vector<double> z;
};

GraphSamples sample_graph(const std::function<double(double, double)>& z, double x0, double y0,
                          double h, int nx, int ny);

/// The surface near map(u0, v0) as a graph over its tangent plane, height
/// along N(u0, v0), on a square of half-width `half_width`. Newton
/// inversion of the tangent-plane projection.
GraphSamples extract_graph(const SurfaceMap& map, double u0, double v0, double half_width,
                           double h);

/// max |z_xx z_yy - z_xy^2 - K (1 + z_x^2 + z_y^2)^2| with fourth-order
/// central differences, over nodes at least two steps from the boundary.
double monge_ampere_residual(const GraphSamples& graph, double K);

/// Curvatures of the surface P(u, v) at (u, v) from fourth-order central
/// differences of positions with step h; mean curvature is taken with the
/// normal oriented along `reference_normal`.
double fd_mean_curvature(const std::function<Vec3(double, double)>& P,
                         const Vec3& reference_normal, double u, double v, double h);
double fd_gauss_curvature(const std::function<Vec3(double, double)>& P, double u, double v,
                          double h);

struct DiagnosticsReport {
  std::string curve;
  std::string origin;
  std::string verdict;
  int taylor_order = 0;
  int modes = 0;
  double trust_height = 0.0;
  double v_min = 0.0, v_max = 0.0;
  int u_count = 0, v_count = 0;
  int orientation = 1;
  StructureResiduals structure;
  double norm_defect = 0.0;
  double compat = 0.0;
  BoundaryChecks boundary;
  bool has_cone_angle = false;
  ConeAngle cone;
  double area = 0.0;
  double total_mean_curvature = 0.0;
  AreaTable area_table;
  std::vector<std::string> warnings;
  std::vector<std::string> failures;
  bool surface_emitted = false;
};

}  // namespace ksurf
