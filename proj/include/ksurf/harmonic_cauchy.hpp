#pragma once

#include <string>
#include <vector>

#include "ksurf/fourier.hpp"
#include "ksurf/sphere_curves.hpp"

namespace ksurf {

/// Taylor series in v of the harmonic map N: (u, v) -> S^2 with
/// N(u, 0) = alpha(u) and N_v(u, 0) = 0. Layer k is the 2*pi-periodic
/// coefficient of v^k, stored as a Fourier curve with `modes()` modes.
class GaussJet {
 public:
  const std::vector<FourierCurve3>& layers() const { return layers_; }
  const FourierCurve3& layer(int k) const { return layers_.at(k); }
  int taylor_order() const { return static_cast<int>(layers_.size()) - 1; }
  int modes() const { return layers_.front().modes(); }
  double trust_height() const { return trust_height_; }
  /// Largest ratio of top-quarter spectral energy to total energy over layers.
  double aliasing_ratio() const { return aliasing_ratio_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  friend GaussJet solve_cauchy(const SphericalCurve&, int, int);
  friend GaussJet rotated(const GaussJet&, const Mat3&);

  std::vector<FourierCurve3> layers_;
  double trust_height_ = 0.0;
  double aliasing_ratio_ = 0.0;
  std::vector<std::string> warnings_;
};

/// N and its partial derivatives up to second order at one point.
struct GaussSample {
  Vec3 N, N_u, N_v, N_uu, N_uv, N_vv;
};

inline constexpr int kDefaultTaylorOrder = 24;

/// Default Fourier truncation for a datum: max(8, 4 * effective modes).
int default_modes(const SphericalCurve& alpha);

/// Power-series solution of N_uu + N_vv + (|N_u|^2 + |N_v|^2) N = 0 with the
/// singular Cauchy data above. `modes <= 0` selects default_modes(alpha).
GaussJet solve_cauchy(const SphericalCurve& alpha, int taylor_order = kDefaultTaylorOrder,
                      int modes = 0);

/// Layer-by-layer image of the jet under a rotation of R^3.
GaussJet rotated(const GaussJet& jet, const Mat3& rotation);

GaussSample evaluate_gauss(const GaussJet& jet, double u, double v, int deriv_order = 2);

/// Entry k: max Fourier coefficient of sum_{i+j=k} <c_i, c_j> - delta_{k0}.
std::vector<double> norm_defect(const GaussJet& jet);

/// Largest v in (0, 1] for which the estimated series tail beyond order
/// K-2 stays below `tolerance`.
double estimate_strip(const GaussJet& jet, double tolerance = 1e-8);

/// Pseudo-spectral grid size used for products of layers with `modes` modes.
inline int product_grid_size(int modes) { return 4 * modes + 2; }

}  // namespace ksurf
