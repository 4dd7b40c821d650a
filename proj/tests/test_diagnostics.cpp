#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ksurf/diagnostics.hpp"
#include "ksurf/error.hpp"

using namespace ksurf;
using std::numbers::pi;

namespace {

// Round sphere in conformal (Mercator) coordinates: t periodic, v the
// Mercator height, inward normal so that II is positive.
FrameSample mercator_sphere(double t, double v) {
  const double c = 1.0 / std::cosh(v), th = std::tanh(v);
  FrameSample s{};
  s.X = Vec3(c * std::cos(t), c * std::sin(t), th);
  s.X_u = Vec3(-c * std::sin(t), c * std::cos(t), 0);
  s.X_v = Vec3(-c * th * std::cos(t), -c * th * std::sin(t), c * c);
  s.X_uu = Vec3(-c * std::cos(t), -c * std::sin(t), 0);
  s.X_uv = Vec3(c * th * std::sin(t), -c * th * std::cos(t), 0);
  const double dd = c * (th * th - c * c);  // d^2/dv^2 sech v
  s.X_vv = Vec3(dd * std::cos(t), dd * std::sin(t), -2 * c * c * th);
  s.N = -s.X;
  s.N_u = -s.X_u;
  s.N_v = -s.X_v;
  s.N_uu = -s.X_uu;
  s.N_uv = -s.X_uv;
  s.N_vv = -s.X_vv;
  return s;
}

SurfacePatch sphere_patch(double v1, double v2) {
  return sample_map(mercator_sphere, {Axis::periodic(64), Axis::chebyshev(v1, v2, 24)},
                    PatchOrigin::RotationalExact, true);
}

SurfacePatch circle_patch(double A, int u_count, int v_count) {
  const auto jet = solve_cauchy(builtin::circle(A), 24, 8);
  return sample_patch(integrate_surface(jet, Vec3::Zero()), u_count,
                      Axis::chebyshev(0.01, 0.3, v_count));
}

}  // namespace

TEST_CASE("round sphere is totally umbilic") {
  const auto patch = sphere_patch(-0.5, 0.8);
  const auto d = fundamental_forms(patch);
  CHECK(d.orientation == 1);
  for (std::size_t k = 0; k < patch.samples.size(); ++k) {
    CHECK(std::abs(d.Q[k]) <= 1e-15);
    CHECK(d.umbilic[k]);
    CHECK(std::abs(d.mu[k] - d.rho[k]) <= 1e-15);
    CHECK(std::abs(d.H[k] - 1.0) <= 1e-12);
  }
  const auto r = verify_structure(d, patch);
  CHECK(r.K_minus_1 <= 1e-10);
  CHECK(r.romu <= 1e-10);
  CHECK(r.H_consistency <= 1e-10);
  CHECK(r.holo_Q <= 1e-10);
  CHECK(r.sinh_gordon == 0.0);
  CHECK(r.umbilic_fraction == 1.0);
}

TEST_CASE("rotational structure residuals on the Cauchy patch") {
  const auto patch = circle_patch(0.5, 128, 64);
  const auto d = fundamental_forms(patch);
  CHECK(d.orientation == -1);
  const auto r = verify_structure(d, patch);
  CHECK(r.K_minus_1 <= 1e-6);
  CHECK(r.holo_Q <= 1e-6);
  CHECK(r.romu <= 1e-6);
  CHECK(r.sinh_gordon <= 1e-6);
  CHECK(r.H_consistency <= 1e-6);
  CHECK(r.q_routes <= 1e-9);
  CHECK(r.frontal <= 1e-9);
  CHECK(r.umbilic_fraction == 0.0);
  // rotational symmetry: Q is constant along u-lines
  for (int j = 0; j < patch.grid.v.count; j += 7) {
    const auto q0 = d.Q[patch.grid.index(0, j)];
    CHECK(std::abs(q0.imag()) <= 1e-12);
    for (int i = 1; i < patch.grid.u.count; ++i) {
      CHECK(std::abs(d.Q[patch.grid.index(i, j)] - q0) <= 1e-12);
    }
  }
  for (std::size_t k = 0; k < patch.samples.size(); ++k) {
    CHECK(d.rho[k] > 0.0);
    CHECK(std::abs(d.rho[k] - std::abs(d.Q[k]) * std::sinh(d.omega[k])) <= 1e-12);
  }
}

TEST_CASE("scaled patch is caught by the curvature residual") {
  auto patch = circle_patch(0.5, 32, 16);
  for (auto& s : patch.samples) {
    s.X *= 1.01;
    s.X_u *= 1.01;
    s.X_v *= 1.01;
    s.X_uu *= 1.01;
    s.X_uv *= 1.01;
    s.X_vv *= 1.01;
  }
  CHECK(curvature_residual(patch) == doctest::Approx(1.0 - 1.0 / (1.01 * 1.01)).epsilon(1e-6));
}

TEST_CASE("equator patch is singular everywhere") {
  const auto sjet = integrate_surface(solve_cauchy(builtin::equator()), Vec3::Zero());
  const auto patch = sample_patch(sjet, 32, Axis::chebyshev(0.01, 0.3, 8));
  const auto d = fundamental_forms(patch);
  for (std::size_t k = 0; k < patch.samples.size(); ++k) {
    CHECK(std::abs(d.mu[k] - std::abs(d.Q[k])) <= 1e-15);
    CHECK(d.rho[k] == 0.0);
  }
  const auto table = area_and_tmc(patch, {0.1, 0.01});
  for (const auto& row : table.rows) CHECK(row.area == 0.0);
  const auto b = boundary_checks(solve_cauchy(builtin::equator()), sjet, builtin::equator());
  CHECK_FALSE(b.singular_scan);
  for (double w : b.omega_v) CHECK(std::abs(w) <= 1e-12);
}

TEST_CASE("non-conformal patches are refused") {
  const PatchGrid grid{Axis::uniform(-1.0, 1.0, 8), Axis::periodic(8)};
  CHECK_THROWS_AS(fundamental_forms(rotational_peaked_sphere(0.5, grid)), Error);
  auto patch = rotational_peaked_sphere(0.5, grid);
  patch.conformal = true;
  CHECK_THROWS_AS(fundamental_forms(patch), Error);
}

TEST_CASE("boundary behaviour of omega") {
  SUBCASE("circle") {
    const double A = 0.5;
    const auto jet = solve_cauchy(builtin::circle(A), 24, 8);
    const auto b = boundary_checks(jet, integrate_surface(jet, Vec3::Zero()), builtin::circle(A));
    CHECK(b.axis_value_defect == 0.0);
    CHECK(b.singular_scan);
    for (double k : b.speed_curvature) CHECK(k == doctest::Approx(A).epsilon(1e-12));
    // omega_v(u, 0) comes out as 2 A on this surface
    for (double w : b.omega_v) CHECK(w == doctest::Approx(2 * A).epsilon(1e-10));
    CHECK(b.omega_v_defect_doubled <= 1e-8);
  }
  SUBCASE("cusp curve") {
    const auto alpha = builtin::cusp_demo();
    const auto jet = solve_cauchy(alpha, 24, 32);
    const auto b = boundary_checks(jet, integrate_surface(jet, Vec3::Zero()), alpha);
    CHECK(b.singular_scan);
    CHECK(b.u.size() < 128);
    CHECK(b.omega_v_defect_doubled <= 1e-8);
  }
}

TEST_CASE("area and total mean curvature") {
  SUBCASE("spherical zone") {
    // z = tanh v on the Mercator sphere: zone area 2 pi (tanh v2 - tanh v1)
    const auto table = area_and_tmc(sphere_patch(-0.3, 0.9), {0.5, 0.0, -0.3});
    for (const auto& row : table.rows) {
      const double zone = 2 * pi * (std::tanh(0.9) - std::tanh(row.v_min));
      CHECK(row.area == doctest::Approx(zone).epsilon(1e-10));
      CHECK(row.total_mean_curvature == doctest::Approx(zone).epsilon(1e-10));
    }
  }
  SUBCASE("Cauchy patch near the singular point converges") {
    const auto patch = circle_patch(0.5, 64, 16);
    const auto table = area_and_tmc(patch, {0.08, 0.04, 0.02, 0.01, 0.005, 0.0025});
    for (std::size_t k = 1; k < table.rows.size(); ++k) {
      CHECK(table.rows[k].area > table.rows[k - 1].area);
      CHECK(table.rows[k].total_mean_curvature > table.rows[k - 1].total_mean_curvature);
    }
    for (double r : table.area_ratios) CHECK(r < 0.5);
    for (double r : table.tmc_ratios) CHECK(r < 0.75);
  }
}

TEST_CASE("Monge-Ampere residual") {
  const double h = 1.0 / 256;
  SUBCASE("sphere cap") {
    const auto g = sample_graph([](double x, double y) { return std::sqrt(1 - x * x - y * y); },
                                -0.4, -0.4, h, 205, 205);
    CHECK(monge_ampere_residual(g, 1.0) <= 1e-5);
    CHECK(monge_ampere_residual(g, 0.0) > 0.9);
  }
  SUBCASE("plane") {
    const auto g =
        sample_graph([](double x, double y) { return 0.3 * x - 2 * y + 1; }, 0, 0, h, 20, 20);
    CHECK(monge_ampere_residual(g, 0.0) <= 1e-12);
  }
  SUBCASE("rotational local graph") {
    const auto g = extract_graph(rotational_map(0.5), 0.3, 0.2, 0.05, h);
    CHECK(monge_ampere_residual(g, 1.0) <= 1e-4);
  }
  SUBCASE("graph extraction past a fold fails") {
    CHECK_THROWS_AS(extract_graph(rotational_map(0.5), 0.0, 0.0, 2.5, 0.25), Error);
  }
}

TEST_CASE("finite-difference curvature oracle") {
  const auto P = [](double u, double v) { return mercator_sphere(u, v).X; };
  CHECK(std::abs(fd_gauss_curvature(P, 0.4, 0.2, 1e-3) - 1.0) <= 1e-7);
  CHECK(std::abs(fd_mean_curvature(P, mercator_sphere(0.4, 0.2).N, 0.4, 0.2, 1e-3) - 1.0) <= 1e-7);
}
