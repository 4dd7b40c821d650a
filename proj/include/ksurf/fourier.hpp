#pragma once

#include <array>
#include <span>
#include <vector>

#include "ksurf/error.hpp"
#include "ksurf/types.hpp"

namespace ksurf {

/// Truncated real Fourier series of a 2*pi-periodic curve in R^3:
///   gamma(s) = a_0 + sum_{m=1..M} a_m cos(m s) + b_m sin(m s).
/// Derivatives are taken mode by mode, never by differencing samples.
class FourierCurve3 {
 public:
  FourierCurve3();
  /// `cos_coeffs` holds a_0..a_M, `sin_coeffs` holds b_1..b_M (missing
  /// entries on either side are zero).
  FourierCurve3(std::vector<Vec3> cos_coeffs, std::vector<Vec3> sin_coeffs);

  static FourierCurve3 constant(const Vec3& value);

  /// Least-squares projection of samples on s_j = 2*pi*j/n onto `modes`
  /// modes. Requires n > 2*modes.
  static FourierCurve3 from_samples(std::span<const Vec3> samples, int modes);

  int modes() const { return static_cast<int>(cos_.size()) - 1; }
  const Vec3& cos_coeff(int m) const { return cos_[m]; }
  const Vec3& sin_coeff(int m) const { return sin_[m]; }  // sin_coeff(0) == 0
  Vec3& cos_coeff(int m) { return cos_[m]; }
  Vec3& sin_coeff(int m) { return sin_[m]; }

  Vec3 value(double s) const { return derivative(s, 0); }
  Vec3 derivative(double s, int order) const;

  /// (gamma, gamma', ..., gamma^(order)) at s, order <= 4.
  std::vector<Vec3> jet(double s, int order) const;

  FourierCurve3 differentiated(int order = 1) const;
  /// Values on the uniform grid s_j = 2*pi*j/count.
  std::vector<Vec3> sample(int count) const;

  FourierCurve3 padded(int modes) const;
  FourierCurve3 truncated(int modes) const;
  FourierCurve3 rotated(const Mat3& rotation) const;
  /// s -> gamma(s + shift)
  FourierCurve3 shifted(double shift) const;

  /// Largest coefficient norm over all modes.
  double head() const;
  /// Largest coefficient norm over the last two modes.
  double tail() const;
  bool under_resolved(double ratio = 1e-8) const { return tail() > ratio * head(); }
  /// Largest absolute coefficient component; the sup of the curve is at most
  /// the sum of the coefficient norms, see `coefficient_l1`.
  double max_coefficient() const;
  double coefficient_l1() const;
  /// Highest mode whose coefficients exceed `relative` times head().
  int effective_modes(double relative = 1e-15) const;

  FourierCurve3& operator+=(const FourierCurve3& other);
  FourierCurve3& operator*=(double factor);
  friend FourierCurve3 operator+(FourierCurve3 a, const FourierCurve3& b) { return a += b; }
  friend FourierCurve3 operator*(double f, FourierCurve3 a) { return a *= f; }

 private:
  std::vector<Vec3> cos_;
  std::vector<Vec3> sin_;
};

/// Uniform periodic grid with cached trigonometric tables, used for the
/// pseudo-spectral products of the Cauchy solver. Scalar and vector samples
/// live on `size()` points s_j = 2*pi*j/size.
class FourierGrid {
 public:
  FourierGrid(int size, int modes);

  int size() const { return size_; }
  int modes() const { return modes_; }
  double node(int j) const;

  std::vector<Vec3> synthesize(const FourierCurve3& curve, int derivative_order = 0) const;
  /// Projection onto `modes` <= modes() modes.
  FourierCurve3 project(std::span<const Vec3> samples, int modes) const;

  /// Coefficient magnitudes of a scalar sample vector: entry m is
  /// sqrt(a_m^2 + b_m^2), m = 0..modes().
  std::vector<double> scalar_spectrum(std::span<const double> samples) const;

 private:
  int size_;
  int modes_;
  std::vector<double> cos_table_;  // [m * size + j]
  std::vector<double> sin_table_;
};

}  // namespace ksurf
