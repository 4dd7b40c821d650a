#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>

#include "doctest.h"
#include "ksurf/diagnostics.hpp"
#include "ksurf/error.hpp"
#include "ksurf/surface_builder.hpp"
#include "oracles.hpp"

using namespace ksurf;
using std::numbers::pi;

namespace {

SurfaceJet circle_surface(double A, const Vec3& p = Vec3::Zero()) {
  return integrate_surface(solve_cauchy(builtin::circle(A), 24, 8), p);
}

double sample_distance(const FrameSample& a, const FrameSample& b) {
  return std::max({(a.X - b.X).norm(), (a.X_u - b.X_u).norm(), (a.X_v - b.X_v).norm(),
                   (a.X_uu - b.X_uu).norm(), (a.X_uv - b.X_uv).norm(), (a.X_vv - b.X_vv).norm(),
                   (a.N - b.N).norm(), (a.N_u - b.N_u).norm(), (a.N_v - b.N_v).norm(),
                   (a.N_uu - b.N_uu).norm(), (a.N_uv - b.N_uv).norm(), (a.N_vv - b.N_vv).norm()});
}

FrameSample zero_sample() {
  FrameSample s;
  for (Vec3* f : {&s.X, &s.X_u, &s.X_v, &s.X_uu, &s.X_uv, &s.X_vv, &s.N, &s.N_u, &s.N_v, &s.N_uu,
                  &s.N_uv, &s.N_vv}) {
    f->setZero();
  }
  return s;
}

PatchGrid meridian_grid(int n) {
  return {Axis::uniform(-pi / 2 + 0.05, pi / 2 - 0.05, n), Axis::periodic(n)};
}

}  // namespace

TEST_CASE("constant jet gives the point p") {
  const auto pole = SphericalCurve::from_fourier(FourierCurve3::constant(Vec3(0, 0, 1)), false);
  const Vec3 p(1, -2, 3);
  const auto sjet = integrate_surface(solve_cauchy(pole), p);
  for (const auto& d : sjet.layers()) CHECK(d.max_coefficient() == 0.0);
  CHECK((evaluate_surface(sjet, 0.4, 0.5).X - p).norm() == 0.0);
}

TEST_CASE("equator jet is a rank-one frontal") {
  const auto sjet = integrate_surface(solve_cauchy(builtin::equator()), Vec3::Zero());
  const auto& d = sjet.layers();
  for (std::size_t k = 2; k < d.size(); ++k) CHECK(d[k].max_coefficient() <= 1e-14);
  // X_v = -N x N_u = -alpha x alpha' = -e_z for the counterclockwise equator
  const auto patch = sample_patch(sjet, 32, Axis::uniform(0.01, 0.3, 8));
  for (const auto& s : patch.samples) {
    CHECK(s.X_u.norm() <= 1e-14);
    CHECK((s.X_v - Vec3(0, 0, -1)).norm() <= 1e-14);
  }
}

TEST_CASE("circle jet matches the rotational surface") {
  const double A = 0.5;
  const auto sjet = reflect_extend(circle_surface(A));
  const oracle::RotationalSurface exact{A};
  CHECK(sjet.compatibility_residual() <= 1e-9);
  double worst = 0.0;
  for (int j = -30; j <= 30; ++j) {
    for (int i = 0; i < 40; ++i) {
      const double u = 2 * pi * i / 40, v = 0.01 * j;
      worst = std::max(worst, (evaluate_surface(sjet, u, v).X - exact.X(u, v)).norm());
    }
  }
  CHECK(worst <= 1e-6);
  // the exact conformal rotational map, translated so the apex sits at 0
  const SurfaceMap map = rotational_cauchy_map(A);
  const double apex = rotational_height(A, -pi / 2);
  for (double v : {0.05, 0.2, 0.3}) {
    for (double u : {0.0, 1.1, 4.0}) {
      const FrameSample m = map(u, v);
      const Vec3 expected = -(m.X - Vec3(0, 0, apex));
      CHECK((evaluate_surface(sjet, u, v).X - expected).norm() <= 1e-10);
      CHECK((evaluate_surface(sjet, u, v).N - m.N).norm() <= 1e-10);
    }
  }
}

TEST_CASE("translation equivariance is exact") {
  const Vec3 p(0.3, -1.0, 2.5);
  const auto a = circle_surface(0.3);
  const auto b = circle_surface(0.3, p);
  for (double v : {0.0, 0.1, 0.25}) {
    const FrameSample sa = evaluate_surface(a, 0.9, v), sb = evaluate_surface(b, 0.9, v);
    CHECK((sb.X - (sa.X + p)).norm() <= 1e-15);
    CHECK((sb.X_v - sa.X_v).norm() == 0.0);
  }
}

TEST_CASE("surface is 2 pi periodic in u and fixes p on the axis") {
  const auto sjet = integrate_surface(solve_cauchy(builtin::cusp_demo(), 24, 32), Vec3(1, 1, 1));
  for (double u : {0.0, 0.7, 2.9}) {
    CHECK((evaluate_surface(sjet, u, 0.2).X - evaluate_surface(sjet, u + 2 * pi, 0.2).X).norm() <=
          1e-14);
    CHECK((evaluate_surface(sjet, u, 0.0).X - Vec3(1, 1, 1)).norm() == 0.0);
  }
  CHECK(sjet.compatibility_residual() <= 1e-9);
}

TEST_CASE("circle patch satisfies the frontal and conformality invariants") {
  const auto patch = sample_patch(circle_surface(0.5), 64, Axis::chebyshev(0.01, 0.3, 24));
  CHECK(patch.conformal);
  for (const auto& s : patch.samples) {
    CHECK(std::abs(s.X_u.dot(s.N)) <= 1e-10);
    CHECK(std::abs(s.X_v.dot(s.N)) <= 1e-10);
    CHECK(std::abs(s.X_u.dot(s.N_v)) <= 1e-10);
    CHECK(std::abs(s.X_u.dot(s.N_u) - s.X_v.dot(s.N_v)) <= 1e-10);
  }
  CHECK_THROWS_AS(sample_patch(circle_surface(0.5), 16, Axis::uniform(0.1, 1.5, 4)), Error);
}

TEST_CASE("rotational peaked spheres") {
  SUBCASE("A = 1 is the unit sphere") {
    const auto patch = rotational_peaked_sphere(1.0, meridian_grid(20));
    for (int j = 0; j < 20; ++j) {
      for (int i = 0; i < 20; ++i) {
        const double u = patch.grid.u.node(i), t = patch.grid.v.node(j);
        const FrameSample& s = patch.at(i, j);
        CHECK((s.X - Vec3(std::cos(u) * std::cos(t), std::cos(u) * std::sin(t), std::sin(u)))
                  .norm() <= 1e-12);
        CHECK((s.N + s.X).norm() <= 1e-12);
      }
    }
  }
  SUBCASE("analytic curvature is one") {
    for (double A : {0.3, 0.5, 0.8}) {
      CHECK(curvature_residual(rotational_peaked_sphere(A, meridian_grid(40))) <= 1e-8);
    }
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(rotational_map(0.0), Error);
    CHECK_THROWS_AS(rotational_map(1.2), Error);
    const PatchGrid bad{Axis::uniform(-2.0, 0.0, 4), Axis::periodic(4)};
    CHECK_THROWS_AS(rotational_peaked_sphere(0.5, bad), Error);
  }
}

TEST_CASE("extrinsic diameter") {
  CHECK(rotational_diameter(0.5) == doctest::Approx(2 * boost::math::ellint_2(0.5)).epsilon(1e-12));
  CHECK(std::abs(rotational_diameter(0.5) - 2.9349244) <= 1e-6);
  double previous = pi;
  for (int i = 1; i < 20; ++i) {
    const double d = rotational_diameter(i / 20.0);
    CHECK(d > 2.0);
    CHECK(d < pi);
    CHECK(d < previous);
    previous = d;
  }
  CHECK(rotational_diameter(1.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("conformal change of variable") {
  const auto rc = rotational_conformal(0.5);
  CHECK(rc.a == doctest::Approx(boost::math::ellint_1(0.5)).epsilon(1e-12));
  CHECK(std::abs(rc.a - 1.6857504) <= 1e-6);
  CHECK(rc.modulus == doctest::Approx(std::exp(2 * boost::math::ellint_1(0.5))).epsilon(1e-12));
  CHECK(std::abs(rc.modulus - 29.1222) <= 1e-3);
  for (double u : {-1.5, -0.3, 0.0, 0.8, 1.5}) {
    CHECK(rc.s_of_u(u) == doctest::Approx(boost::math::ellint_1(0.5, u)).epsilon(1e-12));
    CHECK(std::abs(rc.u_of_s(rc.s_of_u(u)) - u) <= 1e-12);
  }
  double previous = std::exp(pi);
  for (int i = 1; i < 20; ++i) {
    const double m = rotational_conformal(i / 20.0).modulus;
    CHECK(m > previous);
    previous = m;
  }
  CHECK(std::abs(rotational_conformal(1e-4).modulus - std::exp(pi)) <= 1e-3);
  CHECK_THROWS_AS(rotational_conformal(1.0), Error);
  CHECK_THROWS_AS(rotational_conformal(-0.5), Error);
}

TEST_CASE("limit circle curvature carries both expressions") {
  const auto k = limit_circle_curvature(0.5);
  CHECK(k.computed == doctest::Approx(0.5 / std::sqrt(0.75)).epsilon(1e-14));
  CHECK(k.alternative == doctest::Approx(std::sqrt(1.75 / 0.75)).epsilon(1e-14));
}

TEST_CASE("parallel surfaces") {
  SUBCASE("unit sphere with inward normal collapses to its centre") {
    const auto sphere = rotational_peaked_sphere(1.0, meridian_grid(12));
    const auto centre = parallel_cmc(sphere, +1);
    for (std::size_t k = 0; k < centre.samples.size(); ++k) {
      CHECK(centre.samples[k].X.norm() <= 1e-12);
      CHECK(centre.singular[k]);
    }
  }
  SUBCASE("outward normal gives the sphere of radius two") {
    const SurfaceMap outward = [](double u, double t) {
      FrameSample s = rotational_map(1.0)(u, t);
      s.N = -s.N;
      s.N_u = -s.N_u;
      s.N_v = -s.N_v;
      s.N_uu = -s.N_uu;
      s.N_uv = -s.N_uv;
      s.N_vv = -s.N_vv;
      return s;
    };
    const auto big = parallel_map(outward, +1);
    for (double u : {-1.0, 0.2, 1.1}) {
      const FrameSample s = big(u, 0.5);
      CHECK((s.X - 2.0 * outward(u, 0.5).X).norm() <= 1e-12);
      const auto P = [&](double a, double b) { return big(a, b).X; };
      CHECK(std::abs(fd_mean_curvature(P, -s.X, u, 0.5, 1e-3) - 0.5) <= 1e-5);
    }
  }
  SUBCASE("rotational parallels have mean curvature -1/2 and 1/2") {
    const SurfaceMap map = rotational_map(0.5);
    for (int sign : {+1, -1}) {
      const SurfaceMap f = parallel_map(map, sign);
      const auto P = [&](double a, double b) { return f(a, b).X; };
      for (double u : {-1.2, -0.4, 0.3, 1.0}) {
        for (double t : {0.0, 2.0}) {
          CHECK(std::abs(fd_mean_curvature(P, map(u, t).N, u, t, 1e-3) + 0.5 * sign) <= 1e-5);
        }
      }
    }
  }
  SUBCASE("opposite parallels invert each other") {
    const auto patch = rotational_peaked_sphere(0.5, meridian_grid(10));
    const auto back = parallel_cmc(parallel_cmc(patch, +1), -1);
    for (std::size_t k = 0; k < patch.samples.size(); ++k) {
      CHECK((back.samples[k].X - patch.samples[k].X).norm() <= 1e-15);
      CHECK((back.samples[k].X_u - patch.samples[k].X_u).norm() <= 1e-15);
    }
  }
}

TEST_CASE("reflection through the singular point") {
  const Vec3 p(0.2, 0.0, -0.4);
  const auto sjet = circle_surface(0.5, p);
  const auto reflected = reflect_extend(sjet);
  SUBCASE("extension rule") {
    for (double v : {0.05, 0.2}) {
      const FrameSample up = evaluate_surface(reflected, 1.3, v);
      const FrameSample down = evaluate_surface(reflected, 1.3, -v);
      CHECK((down.X - (2.0 * p - up.X)).norm() == 0.0);
      CHECK((down.N - up.N).norm() == 0.0);
    }
  }
  SUBCASE("involution") {
    const auto patch = sample_patch(sjet, 16, Axis::chebyshev(0.02, 0.3, 8));
    const auto twice = reflect_patch(reflect_patch(patch, p), p);
    const auto centred = sample_patch(circle_surface(0.5), 16, Axis::chebyshev(0.02, 0.3, 8));
    const auto centred_twice = reflect_patch(reflect_patch(centred, Vec3::Zero()), Vec3::Zero());
    for (std::size_t k = 0; k < patch.samples.size(); ++k) {
      CHECK(sample_distance(twice.samples[k], patch.samples[k]) <= 1e-15);
      CHECK(sample_distance(centred_twice.samples[k], centred.samples[k]) == 0.0);
    }
  }
  SUBCASE("parallel surface continues through its opposite parallel") {
    // f = X + N, f# = X - N: f(u, -v) = 2p - f#(u, v)
    double worst = 0.0;
    for (double v : {0.02, 0.1, 0.25}) {
      for (int i = 0; i < 16; ++i) {
        const double u = 2 * pi * i / 16;
        const Vec3 f_below = parallel(evaluate_surface(reflected, u, -v), +1).X;
        const Vec3 sharp = parallel(evaluate_surface(reflected, u, v), -1).X;
        worst = std::max(worst, (f_below - (2.0 * p - sharp)).norm());
      }
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("Legendre transform") {
  SUBCASE("a plane collapses to a point") {
    FrameSample s = zero_sample();
    s.X = Vec3(0.3, -0.7, 2.0);
    s.X_u = Vec3(1, 0, 0);
    s.X_v = Vec3(0, 1, 0);
    s.N = Vec3(0, 0, 1);
    const FrameSample l = legendre(s);
    CHECK((l.X - Vec3(0, 0, -2.0)).norm() <= 1e-15);
    CHECK(l.X_u.norm() <= 1e-15);
  }
  SUBCASE("the paraboloid is self-dual") {
    for (double x : {-0.5, 0.1, 0.8}) {
      for (double y : {-0.3, 0.6}) {
        FrameSample s = zero_sample();
        s.X = Vec3(x, y, 0.5 * (x * x + y * y));
        s.X_u = Vec3(1, 0, x);
        s.X_v = Vec3(0, 1, y);
        s.X_uu = Vec3(0, 0, 1);
        s.X_vv = Vec3(0, 0, 1);
        const double r = std::sqrt(1 + x * x + y * y);
        s.N = Vec3(-x, -y, 1) / r;
        s.N_u = Vec3(-1, 0, 0) / r - x / (r * r * r) * Vec3(-x, -y, 1);
        s.N_v = Vec3(0, -1, 0) / r - y / (r * r * r) * Vec3(-x, -y, 1);
        const FrameSample l = legendre(s);
        CHECK((l.X - s.X).norm() <= 1e-14);
        CHECK((l.N - s.N).norm() <= 1e-14);
      }
    }
  }
  SUBCASE("rotational surface near its apex maps to the upper half-space") {
    const double A = 0.5;
    const double apex = rotational_height(A, -pi / 2);
    const SurfaceMap shifted = [&](double u, double t) {
      FrameSample s = rotational_map(A)(u, t);
      s.X.z() -= apex;
      return s;
    };
    const PatchGrid grid{Axis::uniform(-pi / 2 + 1e-3, -0.5, 20), Axis::periodic(24)};
    const auto image = legendre_transform(sample_map(shifted, grid, PatchOrigin::RotationalExact, true));
    for (const auto& s : image.samples) CHECK(s.X.z() >= 0.0);
    // the boundary circle in the plane z = 0 has radius sqrt(1 - A^2)/A
    for (int j = 0; j < 24; ++j) {
      const Vec3 b = image.at(0, j).X;
      CHECK(std::abs(b.z()) <= 1e-5);
      CHECK(std::hypot(b.x(), b.y()) == doctest::Approx(std::sqrt(1 - A * A) / A).epsilon(1e-5));
    }
  }
  SUBCASE("horizon") {
    const auto patch = sample_patch(integrate_surface(solve_cauchy(builtin::equator()), Vec3::Zero()),
                                    8, Axis::uniform(0.1, 0.2, 3));
    CHECK_THROWS_AS(legendre_transform(patch), Error);
  }
}
