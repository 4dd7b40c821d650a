#pragma once

#include <cmath>

namespace ksurf::detail {

// Second-order jet of a scalar function of (u, v): value and partial
// derivatives up to order two, with the chain rule built into arithmetic.
struct Jet2 {
  double f = 0, u = 0, v = 0, uu = 0, uv = 0, vv = 0;

  static Jet2 constant(double c) { return {c, 0, 0, 0, 0, 0}; }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.f + b.f, a.u + b.u, a.v + b.v, a.uu + b.uu, a.uv + b.uv, a.vv + b.vv};
}
inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.f - b.f, a.u - b.u, a.v - b.v, a.uu - b.uu, a.uv - b.uv, a.vv - b.vv};
}
inline Jet2 operator-(const Jet2& a) { return {-a.f, -a.u, -a.v, -a.uu, -a.uv, -a.vv}; }
inline Jet2 operator*(double c, const Jet2& a) {
  return {c * a.f, c * a.u, c * a.v, c * a.uu, c * a.uv, c * a.vv};
}
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.f * b.f,
          a.u * b.f + a.f * b.u,
          a.v * b.f + a.f * b.v,
          a.uu * b.f + 2 * a.u * b.u + a.f * b.uu,
          a.uv * b.f + a.u * b.v + a.v * b.u + a.f * b.uv,
          a.vv * b.f + 2 * a.v * b.v + a.f * b.vv};
}

// g(a) for a scalar function g with derivatives g0, g1, g2 at a.f
inline Jet2 compose(const Jet2& a, double g0, double g1, double g2) {
  return {g0,
          g1 * a.u,
          g1 * a.v,
          g1 * a.uu + g2 * a.u * a.u,
          g1 * a.uv + g2 * a.u * a.v,
          g1 * a.vv + g2 * a.v * a.v};
}

inline Jet2 reciprocal(const Jet2& a) {
  const double r = 1.0 / a.f;
  return compose(a, r, -r * r, 2 * r * r * r);
}
inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }
inline Jet2 sqrt(const Jet2& a) {
  const double s = std::sqrt(a.f);
  return compose(a, s, 0.5 / s, -0.25 / (s * a.f));
}

}  // namespace ksurf::detail
