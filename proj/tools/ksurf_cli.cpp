#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "ksurf/diagnostics.hpp"
#include "ksurf/error.hpp"
#include "ksurf/io.hpp"
#include "ksurf/pipeline.hpp"

using namespace ksurf;
using nlohmann::json;

namespace {

struct CurveFlags {
  std::string curve_file;
  std::string builtin = "circle";
};

struct Shared {
  PipelineConfig cfg;
  CurveFlags curve;
  std::string config_path;
};

void add_curve_flags(CLI::App* cmd, Shared& s) {
  cmd->add_option("--curve-file", s.curve.curve_file, "curve JSON {cos, sin, normalize}");
  cmd->add_option("--builtin", s.curve.builtin, "circle | equator | cusp-demo | perturbed")
      ->check(CLI::IsMember({"circle", "equator", "cusp-demo", "perturbed"}));
  cmd->add_option("--cos-phi", s.cfg.curve.cos_phi, "height of the (perturbed) circle");
  cmd->add_option("--tilt", s.cfg.curve.tilt, "cusp-demo tilt angle");
  cmd->add_option("--amplitude", s.cfg.curve.amplitude, "perturbation amplitude");
  cmd->add_option("--seed", s.cfg.curve.seed, "perturbation seed");
  cmd->add_option("--max-spin", s.cfg.curve.max_spin, "largest perturbation spin");
  cmd->add_option("--config", s.config_path, "JSON config; its keys override flags");
}

void add_pipeline_flags(CLI::App* cmd, Shared& s) {
  add_curve_flags(cmd, s);
  cmd->add_option("--taylor-order", s.cfg.taylor_order, "K_v")->check(CLI::PositiveNumber);
  cmd->add_option("--modes", s.cfg.modes, "M_u (0 = automatic)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--v-min", s.cfg.v_min)->check(CLI::PositiveNumber);
  cmd->add_option("--v-max", s.cfg.v_max)->check(CLI::PositiveNumber);
  cmd->add_option("--u-count", s.cfg.u_count)->check(CLI::PositiveNumber);
  cmd->add_option("--v-count", s.cfg.v_count)->check(CLI::PositiveNumber);
  cmd->add_option("--obj", s.cfg.obj_path, "OBJ mesh output");
  cmd->add_option("--csv", s.cfg.csv_path, "CSV samples output");
  cmd->add_option("--report", s.cfg.report_path, "report JSON output");
}

void resolve(Shared& s) {
  PipelineConfig& c = s.cfg;
  if (!s.curve.curve_file.empty()) {
    c.curve.kind = CurveSource::Kind::File;
    c.curve.path = s.curve.curve_file;
  } else if (s.curve.builtin == "circle") {
    c.curve.kind = CurveSource::Kind::Circle;
  } else if (s.curve.builtin == "equator") {
    c.curve.kind = CurveSource::Kind::Equator;
  } else if (s.curve.builtin == "cusp-demo") {
    c.curve.kind = CurveSource::Kind::CuspDemo;
  } else {
    c.curve.kind = CurveSource::Kind::Perturbed;
  }
  if (!s.config_path.empty()) {
    std::ifstream in(s.config_path);
    if (!in) throw Error(ErrorCode::Io, "io", "cannot read " + s.config_path);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::Parse, "io", std::string("malformed config: ") + e.what());
    }
    apply_config(doc, c);
  }
}

void emit(const json& doc, const std::string& report_path) {
  const std::string text = dump_json(doc);
  std::cout << text;
  if (!report_path.empty()) write_text_file(report_path, text);
}

int run_report(Shared& s, bool full) {
  resolve(s);
  if (!full) {
    s.cfg.check_structure = s.cfg.check_area = s.cfg.check_cone = false;
  }
  const PipelineResult res = run_pipeline(s.cfg);
  std::cout << dump_json(report_to_json(res.report));
  return res.exit_code;
}

// Pipeline surface without output side effects, for the transformations.
PipelineResult build_surface(Shared& s) {
  resolve(s);
  PipelineConfig c = s.cfg;
  c.obj_path.clear();
  c.csv_path.clear();
  c.report_path.clear();
  c.check_structure = c.check_area = c.check_cone = false;
  PipelineResult res = run_pipeline(c);
  if (!res.patch) {
    throw Error(ErrorCode::Domain, "io", "no surface: " + res.report.failures.front());
  }
  return res;
}

void export_outputs(const SurfacePatch& patch, const PipelineConfig& c) {
  if (!c.obj_path.empty()) export_mesh(patch, MeshFormat::Obj, c.obj_path);
  if (!c.csv_path.empty()) export_mesh(patch, MeshFormat::Csv, c.csv_path);
}

int run_rotational(double A, int u_count, int v_count, double margin, const std::string& chart,
                   const PipelineConfig& out) {
  json doc = {{"A", A}, {"chart", chart}};
  const double pi = std::numbers::pi;
  SurfacePatch patch;
  if (chart == "meridian") {
    const PatchGrid grid{Axis::uniform(-pi / 2 + margin, pi / 2 - margin, u_count),
                         Axis::periodic(v_count)};
    patch = rotational_peaked_sphere(A, grid);
  } else {
    const PatchGrid grid{Axis::periodic(u_count), Axis::chebyshev(out.v_min, out.v_max, v_count)};
    patch = sample_map(rotational_cauchy_map(A), grid, PatchOrigin::RotationalExact, true);
    const FundamentalData fd = fundamental_forms(patch);
    const StructureResiduals r = verify_structure(fd, patch);
    doc["holo_Q"] = r.holo_Q;
    doc["romu"] = r.romu;
    doc["sinh_gordon"] = r.sinh_gordon;
    doc["H_consistency"] = r.H_consistency;
    doc["orientation"] = fd.orientation;
  }
  const double residual = curvature_residual(patch);
  doc["K_minus_1"] = residual;
  doc["diameter"] = rotational_diameter(A);
  if (A < 1.0) {
    const RotationalConformal rc = rotational_conformal(A);
    doc["conformal_a"] = rc.a;
    doc["modulus"] = rc.modulus;
    const LimitCircleCurvature kg = limit_circle_curvature(A);
    doc["limit_circle_kg"] = kg.computed;
    doc["limit_circle_kg_alternative"] = kg.alternative;
  }
  const bool ok = residual <= 1e-8;
  doc["status"] = ok ? "pass" : "fail";
  export_outputs(patch, out);
  emit(doc, out.report_path);
  return ok ? 0 : 2;
}

int run_parallel(Shared& s, int sign) {
  const PipelineResult res = build_surface(s);
  const SurfacePatch shifted = parallel_cmc(*res.patch, sign);
  const SurfaceMap f = parallel_map(surface_map(*res.surface), sign);
  const auto P = [&](double u, double v) { return f(u, v).X; };
  const double expected = -0.5 * sign;
  const double v_lo = res.report.v_min, v_hi = res.report.v_max;
  constexpr double h = 1e-3;
  double worst = 0.0;
  for (int j = 0; j < 5; ++j) {
    const double v = v_lo + 4 * h + (v_hi - v_lo - 8 * h) * j / 4.0;
    for (int i = 0; i < 8; ++i) {
      const double u = 2 * std::numbers::pi * i / 8;
      const FrameSample smp = f(u, v);
      worst = std::max(worst, std::abs(fd_mean_curvature(P, smp.N, u, v, h) - expected));
    }
  }
  int singular = 0;
  for (bool b : shifted.singular) singular += b;
  const bool ok = worst <= 1e-5;
  json doc = {{"curve", res.report.curve},   {"sign", sign},
              {"expected_H", expected},      {"max_H_defect", worst},
              {"singular_samples", singular}, {"status", ok ? "pass" : "fail"}};
  export_outputs(shifted, s.cfg);
  emit(doc, s.cfg.report_path);
  return ok ? 0 : 2;
}

int run_reflect(Shared& s) {
  const PipelineResult res = build_surface(s);
  const Vec3 p = res.surface->base_point();
  const SurfacePatch& patch = *res.patch;
  const SurfacePatch mirrored = reflect_patch(patch, p);
  const SurfacePatch back = reflect_patch(mirrored, p);
  double involution = 0.0, cmc = 0.0;
  const SurfaceJet extended = reflect_extend(*res.surface);
  for (std::size_t k = 0; k < patch.samples.size(); ++k) {
    involution = std::max(involution, (back.samples[k].X - patch.samples[k].X).norm());
    involution = std::max(involution, (back.samples[k].N - patch.samples[k].N).norm());
  }
  const PatchGrid& g = patch.grid;
  for (int j = 0; j < g.v.count; ++j) {
    for (int i = 0; i < g.u.count; ++i) {
      const double u = g.u.node(i), v = g.v.node(j);
      const Vec3 f_below = parallel(evaluate_surface(extended, u, -v), +1).X;
      const Vec3 sharp = parallel(patch.at(i, j), -1).X;
      cmc = std::max(cmc, (f_below - (2.0 * p - sharp)).norm());
    }
  }
  const bool ok = involution <= 1e-14 && cmc <= 1e-8;
  json doc = {{"curve", res.report.curve},
              {"involution_defect", involution},
              {"cmc_reflection_defect", cmc},
              {"status", ok ? "pass" : "fail"}};
  export_outputs(mirrored, s.cfg);
  emit(doc, s.cfg.report_path);
  return ok ? 0 : 2;
}

int run_legendre(Shared& s) {
  const PipelineResult res = build_surface(s);
  const SurfacePatch image = legendre_transform(*res.patch);
  double zmin = std::numeric_limits<double>::infinity(), zmax = -zmin, n3 = zmin;
  for (const auto& smp : image.samples) {
    zmin = std::min(zmin, smp.X.z());
    zmax = std::max(zmax, smp.X.z());
  }
  for (const auto& smp : res.patch->samples) n3 = std::min(n3, std::abs(smp.N.z()));
  json doc = {{"curve", res.report.curve}, {"min_abs_N3", n3}, {"z_min", zmin}, {"z_max", zmax}};
  export_outputs(image, s.cfg);
  emit(doc, s.cfg.report_path);
  return 0;
}

int run_cone(Shared& s, const std::string& report) {
  resolve(s);
  const SphericalCurve alpha = load_curve(s.cfg.curve);
  const CurveClassification cls = classify_curve(alpha);
  json doc = {{"curve", describe(s.cfg.curve)},
              {"verdict", to_string(cls.verdict)},
              {"cusps", cls.cusp_locations},
              {"cusp_invariants", cls.cusp_invariants}};
  int code = 0;
  if (cls.verdict == CurveVerdict::RegularConvexJordan) {
    const ConeAngle c = cone_angle(alpha);
    doc["cone_angle"] = {{"angle_area", c.angle_area},
                         {"angle_gb", c.angle_gb},
                         {"discrepancy", c.discrepancy},
                         {"theta", c.angle_gb / (2 * std::numbers::pi)}};
    if (!(c.discrepancy <= 1e-6)) code = 2;
  } else {
    doc["cone_angle"] = nullptr;
  }
  emit(doc, report);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"K = 1 surfaces with isolated singularities from their boundary curve"};
  app.require_subcommand(1);

  Shared shared;

  auto* cauchy = app.add_subcommand("cauchy", "solve the singular Cauchy problem and build the surface");
  add_pipeline_flags(cauchy, shared);
  auto* diagnose = app.add_subcommand("diagnose", "full structural diagnostics report");
  add_pipeline_flags(diagnose, shared);

  int sign = 1;
  auto* par = app.add_subcommand("parallel", "parallel CMC surface X + sign N");
  add_pipeline_flags(par, shared);
  par->add_option("--sign", sign, "+1 or -1")->required()->check(CLI::IsMember({-1, 1}));

  auto* refl = app.add_subcommand("reflect", "extension by point reflection through p");
  add_pipeline_flags(refl, shared);
  auto* leg = app.add_subcommand("legendre", "Legendre transform of the pipeline patch");
  add_pipeline_flags(leg, shared);

  std::string cone_report;
  auto* cone = app.add_subcommand("cone-angle", "cone angle of a convex boundary curve");
  add_curve_flags(cone, shared);
  cone->add_option("--report", cone_report);

  double A = 0.5, margin = 0.05;
  int rot_u = 200, rot_v = 200;
  std::string chart = "meridian";
  auto* rot = app.add_subcommand("rotational", "exact rotational peaked sphere");
  rot->add_option("--A", A, "height of the singular circle, in (0, 1]")->check(CLI::Range(0.0, 1.0));
  rot->add_option("--u-count", rot_u, "default 200 (meridian), 128 (cauchy)")->check(CLI::PositiveNumber);
  rot->add_option("--v-count", rot_v, "default 200 (meridian), 64 (cauchy)")->check(CLI::PositiveNumber);
  rot->add_option("--margin", margin, "meridian chart stays this far from the apexes");
  rot->add_option("--chart", chart, "meridian | cauchy")->check(CLI::IsMember({"meridian", "cauchy"}));
  rot->add_option("--v-min", shared.cfg.v_min)->check(CLI::PositiveNumber);
  rot->add_option("--v-max", shared.cfg.v_max)->check(CLI::PositiveNumber);
  rot->add_option("--obj", shared.cfg.obj_path);
  rot->add_option("--csv", shared.cfg.csv_path);
  rot->add_option("--report", shared.cfg.report_path);

  std::vector<double> thetas;
  auto* troy = app.add_subcommand("troyanov", "angle inequalities for normalized cone angles");
  troy->add_option("--theta", thetas, "normalized cone angle in (0, 1); repeat")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  try {
    if (*cauchy) return run_report(shared, false);
    if (*diagnose) return run_report(shared, true);
    if (*par) return run_parallel(shared, sign);
    if (*refl) return run_reflect(shared);
    if (*leg) return run_legendre(shared);
    if (*cone) return run_cone(shared, cone_report);
    if (*rot) {
      if (chart == "cauchy") {
        if (rot->count("--u-count") == 0) rot_u = 128;
        if (rot->count("--v-count") == 0) rot_v = 64;
      }
      return run_rotational(A, rot_u, rot_v, margin, chart, shared.cfg);
    }
    if (*troy) {
      const bool ok = troyanov_check(thetas);
      std::cout << dump_json({{"thetas", thetas}, {"satisfied", ok}});
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "] " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return 0;
}
