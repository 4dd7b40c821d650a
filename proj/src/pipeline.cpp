#include "ksurf/pipeline.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "ksurf/error.hpp"
#include "ksurf/io.hpp"

namespace ksurf {

namespace {

std::string sci(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

void gate(DiagnosticsReport& r, const char* name, double value, double tol) {
  if (!(value <= tol)) r.failures.push_back(std::string(name) + " = " + sci(value) + " > " + sci(tol));
}

GaussJet solve_with_escalation(const SphericalCurve& alpha, const PipelineConfig& cfg,
                               std::vector<std::string>& warnings) {
  if (cfg.modes > 0) return solve_cauchy(alpha, cfg.taylor_order, cfg.modes);
  int modes = default_modes(alpha);
  for (;;) {
    try {
      return solve_cauchy(alpha, cfg.taylor_order, modes);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Resolution || modes >= 256) throw;
      warnings.push_back("M_u = " + std::to_string(modes) + " under-resolved, retrying with " +
                         std::to_string(std::min(2 * modes, 256)));
      modes = std::min(2 * modes, 256);
    }
  }
}

template <typename T>
T take(const nlohmann::json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::Parse, "io", "config key \"" + key + "\" has the wrong type");
  }
}

}  // namespace

static std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string describe(const CurveSource& s) {
  std::ostringstream out;
  switch (s.kind) {
    case CurveSource::Kind::File: out << "file:" << s.path; break;
    case CurveSource::Kind::Circle: out << "circle(cos_phi=" << shortest(s.cos_phi) << ")"; break;
    case CurveSource::Kind::Equator: out << "equator"; break;
    case CurveSource::Kind::CuspDemo: out << "cusp-demo(tilt=" << shortest(s.tilt) << ")"; break;
    case CurveSource::Kind::Perturbed:
      out << "perturbed-circle(cos_phi=" << shortest(s.cos_phi) << ", amplitude=" << shortest(s.amplitude)
          << ", seed=" << s.seed << ", max_spin=" << s.max_spin << ")";
      break;
  }
  return out.str();
}

SphericalCurve load_curve(const CurveSource& s) {
  switch (s.kind) {
    case CurveSource::Kind::File: return load_curve_file(s.path);
    case CurveSource::Kind::Circle: return builtin::circle(s.cos_phi);
    case CurveSource::Kind::Equator: return builtin::equator();
    case CurveSource::Kind::CuspDemo: return builtin::cusp_demo(s.tilt);
    case CurveSource::Kind::Perturbed:
      return builtin::perturbed_circle(s.cos_phi, s.amplitude, s.seed, s.max_spin);
  }
  throw Error(ErrorCode::Domain, "io", "unknown curve source");
}

void apply_config(const nlohmann::json& config, PipelineConfig& cfg) {
  if (!config.is_object()) throw Error(ErrorCode::Parse, "io", "config must be a JSON object");
  for (auto it = config.begin(); it != config.end(); ++it) {
    const std::string& k = it.key();
    const auto& v = it.value();
    if (k == "builtin") {
      const auto name = take<std::string>(v, k);
      if (name == "circle") cfg.curve.kind = CurveSource::Kind::Circle;
      else if (name == "equator") cfg.curve.kind = CurveSource::Kind::Equator;
      else if (name == "cusp-demo") cfg.curve.kind = CurveSource::Kind::CuspDemo;
      else if (name == "perturbed") cfg.curve.kind = CurveSource::Kind::Perturbed;
      else throw Error(ErrorCode::Parse, "io", "unknown builtin curve \"" + name + "\"");
    } else if (k == "curve_file") {
      cfg.curve.kind = CurveSource::Kind::File;
      cfg.curve.path = take<std::string>(v, k);
    } else if (k == "cos_phi") {
      cfg.curve.cos_phi = take<double>(v, k);
    } else if (k == "tilt") {
      cfg.curve.tilt = take<double>(v, k);
    } else if (k == "amplitude") {
      cfg.curve.amplitude = take<double>(v, k);
    } else if (k == "seed") {
      cfg.curve.seed = take<std::uint64_t>(v, k);
    } else if (k == "max_spin") {
      cfg.curve.max_spin = take<int>(v, k);
    } else if (k == "taylor_order") {
      cfg.taylor_order = take<int>(v, k);
    } else if (k == "modes") {
      cfg.modes = take<int>(v, k);
    } else if (k == "v_min") {
      cfg.v_min = take<double>(v, k);
    } else if (k == "v_max") {
      cfg.v_max = take<double>(v, k);
    } else if (k == "u_count") {
      cfg.u_count = take<int>(v, k);
    } else if (k == "v_count") {
      cfg.v_count = take<int>(v, k);
    } else if (k == "base_point") {
      const auto p = take<std::vector<double>>(v, k);
      if (p.size() != 3) throw Error(ErrorCode::Parse, "io", "base_point needs three numbers");
      cfg.base_point = Vec3(p[0], p[1], p[2]);
    } else if (k == "obj") {
      cfg.obj_path = take<std::string>(v, k);
    } else if (k == "csv") {
      cfg.csv_path = take<std::string>(v, k);
    } else if (k == "report") {
      cfg.report_path = take<std::string>(v, k);
    } else if (k == "checks") {
      const auto list = take<std::vector<std::string>>(v, k);
      cfg.check_structure = cfg.check_boundary = cfg.check_area = cfg.check_cone = false;
      for (const auto& c : list) {
        if (c == "structure") cfg.check_structure = true;
        else if (c == "boundary") cfg.check_boundary = true;
        else if (c == "area") cfg.check_area = true;
        else if (c == "cone") cfg.check_cone = true;
        else throw Error(ErrorCode::Parse, "io", "unknown check \"" + c + "\"");
      }
    } else {
      throw Error(ErrorCode::Parse, "io", "unknown config key \"" + k + "\"");
    }
  }
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Divergence:
    case ErrorCode::Resolution:
    case ErrorCode::Integrability:
    case ErrorCode::InternalConsistency:
      return 4;
    case ErrorCode::DegenerateFace:
      return 2;
    default:
      return 3;
  }
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  if (cfg.taylor_order < 2 || cfg.modes < 0 || cfg.u_count < 4 || cfg.v_count < 2 ||
      !(cfg.v_min > 0.0) || !(cfg.v_max > cfg.v_min)) {
    throw Error(ErrorCode::Domain, "io",
                "need taylor_order >= 2, modes >= 0, u_count >= 4, v_count >= 2 and "
                "0 < v_min < v_max");
  }
  PipelineResult out;
  DiagnosticsReport& r = out.report;
  r.curve = describe(cfg.curve);
  r.origin = to_string(PatchOrigin::CauchyPipeline);

  const SphericalCurve alpha = load_curve(cfg.curve);
  const CurveClassification cls = classify_curve(alpha);
  r.verdict = to_string(cls.verdict);
  const bool admissible = cls.verdict != CurveVerdict::Inadmissible;
  if (!admissible) r.warnings.push_back("curve is not admissible (|alpha'| k vanishes somewhere)");

  const GaussJet jet = solve_with_escalation(alpha, cfg, r.warnings);
  for (const auto& w : jet.warnings()) r.warnings.push_back(w);
  r.taylor_order = jet.taylor_order();
  r.modes = jet.modes();
  r.trust_height = jet.trust_height();
  {
    const auto defects = norm_defect(jet);
    for (double d : defects) r.norm_defect = std::max(r.norm_defect, d);
  }
  gate(r, "norm_defect", r.norm_defect, cfg.tol.norm_defect);

  SurfaceJet sjet = integrate_surface(jet, cfg.base_point);
  r.compat = sjet.compatibility_residual();
  gate(r, "compat", r.compat, cfg.tol.compat);

  r.v_min = cfg.v_min;
  r.v_max = std::min(cfg.v_max, jet.trust_height());
  if (!(r.v_max > r.v_min)) {
    throw Error(ErrorCode::Extrapolation, "io",
                "trust height " + sci(jet.trust_height()) + " leaves no room above v_min " +
                    sci(cfg.v_min));
  }
  if (r.v_max < cfg.v_max) {
    r.warnings.push_back("v_max clipped to the trust height " + sci(r.v_max));
  }
  r.u_count = cfg.u_count;
  r.v_count = cfg.v_count;

  // the boundary scan decides whether there is a surface at all
  r.boundary = boundary_checks(jet, sjet, alpha, 128, std::min(0.3, r.v_max));
  bool violation = !r.boundary.singular_scan;
  if (violation) {
    r.failures.push_back(
        "isolated-singularity violation: omega vanishes off the axis, the surface degenerates");
  }
  if (cfg.check_boundary && !violation) {
    gate(r, "boundary_omega_doubled", r.boundary.omega_v_defect_doubled, cfg.tol.boundary);
  }

  if (cls.verdict == CurveVerdict::RegularConvexJordan && cfg.check_cone) {
    r.has_cone_angle = true;
    r.cone = cone_angle(alpha);
    gate(r, "cone_angle_discrepancy", r.cone.discrepancy, cfg.tol.cone);
  }

  if (!violation) {
    SurfacePatch patch = sample_patch(sjet, cfg.u_count, Axis::chebyshev(r.v_min, r.v_max, cfg.v_count));
    if (cfg.check_structure) {
      const FundamentalData fd = fundamental_forms(patch);
      r.orientation = fd.orientation;
      r.structure = verify_structure(fd, patch);
      const auto& s = r.structure;
      gate(r, "K_minus_1", s.K_minus_1, cfg.tol.structure);
      gate(r, "holo_Q", s.holo_Q, cfg.tol.structure);
      gate(r, "romu", s.romu, cfg.tol.structure);
      gate(r, "sinh_gordon", s.sinh_gordon, cfg.tol.structure);
      gate(r, "H_consistency", s.H_consistency, cfg.tol.structure);
      gate(r, "q_routes", s.q_routes, cfg.tol.frontal);
      gate(r, "frontal", s.frontal, cfg.tol.frontal);
      gate(r, "conformal", s.conformal, cfg.tol.frontal);
    }
    if (cfg.check_area) {
      std::vector<double> v_mins;
      for (int k = 4; k >= 0; --k) {
        const double v = r.v_min * std::ldexp(1.0, k);
        if (v < r.v_max) v_mins.push_back(v);
      }
      r.area_table = area_and_tmc(patch, v_mins);
      r.area = r.area_table.rows.back().area;
      r.total_mean_curvature = r.area_table.rows.back().total_mean_curvature;
    }
    if (!cfg.obj_path.empty()) export_mesh(patch, MeshFormat::Obj, cfg.obj_path);
    if (!cfg.csv_path.empty()) export_mesh(patch, MeshFormat::Csv, cfg.csv_path);
    r.surface_emitted = true;
    out.patch = std::move(patch);
    out.surface = std::move(sjet);
  }

  out.exit_code = r.failures.empty() ? 0 : 2;
  if (!cfg.report_path.empty()) write_text_file(cfg.report_path, dump_json(report_to_json(r)));
  return out;
}

}  // namespace ksurf
