#include "ksurf/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ksurf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// a cos(x + n pi/2) + b sin(x + n pi/2) in terms of C = cos x, S = sin x
inline Vec3 quarter_turn(const Vec3& a, const Vec3& b, double c, double s, int n) {
  switch (n & 3) {
    case 0: return a * c + b * s;
    case 1: return -a * s + b * c;
    case 2: return -a * c - b * s;
    default: return a * s - b * c;
  }
}

}  // namespace

FourierCurve3::FourierCurve3() : cos_(1, Vec3::Zero()), sin_(1, Vec3::Zero()) {}

FourierCurve3::FourierCurve3(std::vector<Vec3> cos_coeffs, std::vector<Vec3> sin_coeffs) {
  const std::size_t m = std::max<std::size_t>({cos_coeffs.empty() ? 0 : cos_coeffs.size() - 1,
                                              sin_coeffs.size(), 0});
  cos_.assign(m + 1, Vec3::Zero());
  sin_.assign(m + 1, Vec3::Zero());
  std::copy(cos_coeffs.begin(), cos_coeffs.end(), cos_.begin());
  std::copy(sin_coeffs.begin(), sin_coeffs.end(), sin_.begin() + 1);
}

FourierCurve3 FourierCurve3::constant(const Vec3& value) { return FourierCurve3({value}, {}); }

FourierCurve3 FourierCurve3::from_samples(std::span<const Vec3> samples, int modes) {
  const int n = static_cast<int>(samples.size());
  if (n <= 2 * modes) {
    throw Error(ErrorCode::Resolution, "fourier", "too few samples for the requested mode count");
  }
  FourierCurve3 out;
  out.cos_.assign(modes + 1, Vec3::Zero());
  out.sin_.assign(modes + 1, Vec3::Zero());
  for (int j = 0; j < n; ++j) {
    const double s = kTwoPi * j / n;
    const double c1 = std::cos(s), s1 = std::sin(s);
    double cm = 1.0, sm = 0.0;
    for (int m = 0; m <= modes; ++m) {
      out.cos_[m] += samples[j] * cm;
      out.sin_[m] += samples[j] * sm;
      const double next = cm * c1 - sm * s1;
      sm = sm * c1 + cm * s1;
      cm = next;
    }
  }
  out.cos_[0] /= n;
  for (int m = 1; m <= modes; ++m) {
    out.cos_[m] *= 2.0 / n;
    out.sin_[m] *= 2.0 / n;
  }
  out.sin_[0].setZero();
  return out;
}

Vec3 FourierCurve3::derivative(double s, int order) const {
  const int m_max = modes();
  const double c1 = std::cos(s), s1 = std::sin(s);
  double cm = 1.0, sm = 0.0;
  Vec3 acc = Vec3::Zero();
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0 || order == 0) {
      const double scale = std::pow(static_cast<double>(m), order);
      acc += scale * quarter_turn(cos_[m], sin_[m], cm, sm, order);
    }
    const double next = cm * c1 - sm * s1;
    sm = sm * c1 + cm * s1;
    cm = next;
  }
  return acc;
}

std::vector<Vec3> FourierCurve3::jet(double s, int order) const {
  if (order < 0 || order > 4) {
    throw Error(ErrorCode::UnsupportedOrder, "sphere_curves",
                "jet order " + std::to_string(order) + " exceeds 4");
  }
  std::vector<Vec3> out(order + 1, Vec3::Zero());
  const double c1 = std::cos(s), s1 = std::sin(s);
  double cm = 1.0, sm = 0.0;
  for (int m = 0; m <= modes(); ++m) {
    double scale = 1.0;
    for (int k = 0; k <= order; ++k) {
      if (k == 0 || m > 0) out[k] += scale * quarter_turn(cos_[m], sin_[m], cm, sm, k);
      scale *= m;
    }
    const double next = cm * c1 - sm * s1;
    sm = sm * c1 + cm * s1;
    cm = next;
  }
  return out;
}

FourierCurve3 FourierCurve3::differentiated(int order) const {
  FourierCurve3 out = *this;
  for (int k = 0; k < order; ++k) {
    out.cos_[0].setZero();
    for (int m = 1; m <= modes(); ++m) {
      const Vec3 a = out.cos_[m];
      out.cos_[m] = m * out.sin_[m];
      out.sin_[m] = -m * a;
    }
  }
  return out;
}

std::vector<Vec3> FourierCurve3::sample(int count) const {
  std::vector<Vec3> out(count);
  for (int j = 0; j < count; ++j) out[j] = value(kTwoPi * j / count);
  return out;
}

FourierCurve3 FourierCurve3::padded(int m) const {
  if (m <= modes()) return *this;
  FourierCurve3 out = *this;
  out.cos_.resize(m + 1, Vec3::Zero());
  out.sin_.resize(m + 1, Vec3::Zero());
  return out;
}

FourierCurve3 FourierCurve3::truncated(int m) const {
  if (m >= modes()) return padded(m);
  FourierCurve3 out = *this;
  out.cos_.resize(m + 1);
  out.sin_.resize(m + 1);
  return out;
}

FourierCurve3 FourierCurve3::rotated(const Mat3& rotation) const {
  FourierCurve3 out = *this;
  for (int m = 0; m <= modes(); ++m) {
    out.cos_[m] = rotation * cos_[m];
    out.sin_[m] = rotation * sin_[m];
  }
  return out;
}

FourierCurve3 FourierCurve3::shifted(double shift) const {
  // a cos(m(s+c)) + b sin(m(s+c)) = (a cos mc + b sin mc) cos ms + (b cos mc - a sin mc) sin ms
  FourierCurve3 out = *this;
  for (int m = 1; m <= modes(); ++m) {
    const double c = std::cos(m * shift), s = std::sin(m * shift);
    out.cos_[m] = cos_[m] * c + sin_[m] * s;
    out.sin_[m] = sin_[m] * c - cos_[m] * s;
  }
  return out;
}

double FourierCurve3::head() const {
  double h = 0.0;
  for (int m = 0; m <= modes(); ++m) h = std::max({h, cos_[m].norm(), sin_[m].norm()});
  return h;
}

double FourierCurve3::tail() const {
  double t = 0.0;
  for (int m = std::max(0, modes() - 1); m <= modes(); ++m) {
    t = std::max({t, cos_[m].norm(), sin_[m].norm()});
  }
  return t;
}

double FourierCurve3::max_coefficient() const {
  double h = 0.0;
  for (int m = 0; m <= modes(); ++m) {
    h = std::max({h, cos_[m].cwiseAbs().maxCoeff(), sin_[m].cwiseAbs().maxCoeff()});
  }
  return h;
}

double FourierCurve3::coefficient_l1() const {
  double acc = 0.0;
  for (int m = 0; m <= modes(); ++m) acc += cos_[m].norm() + sin_[m].norm();
  return acc;
}

int FourierCurve3::effective_modes(double relative) const {
  const double floor = relative * head();
  for (int m = modes(); m > 0; --m) {
    if (cos_[m].norm() > floor || sin_[m].norm() > floor) return m;
  }
  return 0;
}

FourierCurve3& FourierCurve3::operator+=(const FourierCurve3& other) {
  if (other.modes() > modes()) *this = padded(other.modes());
  for (int m = 0; m <= other.modes(); ++m) {
    cos_[m] += other.cos_[m];
    sin_[m] += other.sin_[m];
  }
  return *this;
}

FourierCurve3& FourierCurve3::operator*=(double factor) {
  for (int m = 0; m <= modes(); ++m) {
    cos_[m] *= factor;
    sin_[m] *= factor;
  }
  return *this;
}

FourierGrid::FourierGrid(int size, int modes) : size_(size), modes_(modes) {
  if (size <= 2 * modes) {
    throw Error(ErrorCode::Resolution, "fourier", "grid too small for requested modes");
  }
  cos_table_.resize(static_cast<std::size_t>(modes + 1) * size);
  sin_table_.resize(cos_table_.size());
  for (int m = 0; m <= modes; ++m) {
    for (int j = 0; j < size; ++j) {
      // reduce the product modulo size before converting to an angle
      const double angle = kTwoPi * static_cast<double>((static_cast<long>(m) * j) % size) / size;
      cos_table_[static_cast<std::size_t>(m) * size + j] = std::cos(angle);
      sin_table_[static_cast<std::size_t>(m) * size + j] = std::sin(angle);
    }
  }
}

double FourierGrid::node(int j) const { return kTwoPi * j / size_; }

std::vector<Vec3> FourierGrid::synthesize(const FourierCurve3& curve, int derivative_order) const {
  const FourierCurve3 d = derivative_order > 0 ? curve.differentiated(derivative_order) : curve;
  if (d.modes() > modes_) {
    throw Error(ErrorCode::Resolution, "fourier", "curve has more modes than the grid tables");
  }
  std::vector<Vec3> out(size_, d.cos_coeff(0));
  for (int m = 1; m <= d.modes(); ++m) {
    const Vec3& a = d.cos_coeff(m);
    const Vec3& b = d.sin_coeff(m);
    if (a.isZero(0.0) && b.isZero(0.0)) continue;
    const double* ct = &cos_table_[static_cast<std::size_t>(m) * size_];
    const double* st = &sin_table_[static_cast<std::size_t>(m) * size_];
    for (int j = 0; j < size_; ++j) out[j] += a * ct[j] + b * st[j];
  }
  return out;
}

FourierCurve3 FourierGrid::project(std::span<const Vec3> samples, int modes) const {
  if (modes > modes_ || static_cast<int>(samples.size()) != size_) {
    throw Error(ErrorCode::Resolution, "fourier", "projection outside grid capacity");
  }
  std::vector<Vec3> a(modes + 1, Vec3::Zero()), b(modes + 1, Vec3::Zero());
  for (int m = 0; m <= modes; ++m) {
    const double* ct = &cos_table_[static_cast<std::size_t>(m) * size_];
    const double* st = &sin_table_[static_cast<std::size_t>(m) * size_];
    Vec3 ca = Vec3::Zero(), sa = Vec3::Zero();
    for (int j = 0; j < size_; ++j) {
      ca += samples[j] * ct[j];
      sa += samples[j] * st[j];
    }
    const double w = (m == 0 ? 1.0 : 2.0) / size_;
    a[m] = ca * w;
    b[m] = m == 0 ? Vec3::Zero() : Vec3(sa * w);
  }
  std::vector<Vec3> sin_part(b.begin() + 1, b.end());
  return FourierCurve3(std::move(a), std::move(sin_part));
}

std::vector<double> FourierGrid::scalar_spectrum(std::span<const double> samples) const {
  std::vector<double> out(modes_ + 1, 0.0);
  for (int m = 0; m <= modes_; ++m) {
    const double* ct = &cos_table_[static_cast<std::size_t>(m) * size_];
    const double* st = &sin_table_[static_cast<std::size_t>(m) * size_];
    double ca = 0.0, sa = 0.0;
    for (int j = 0; j < size_; ++j) {
      ca += samples[j] * ct[j];
      sa += samples[j] * st[j];
    }
    const double w = (m == 0 ? 1.0 : 2.0) / size_;
    out[m] = std::hypot(ca * w, sa * w);
  }
  return out;
}

}  // namespace ksurf
