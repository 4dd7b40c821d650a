#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "ksurf/diagnostics.hpp"

namespace ksurf {

struct CurveSource {
  enum class Kind { File, Circle, Equator, CuspDemo, Perturbed };
  Kind kind = Kind::Circle;
  std::string path;
  double cos_phi = 0.5;  // circle and perturbed circle height
  double tilt = 0.8;     // cusp demo
  double amplitude = 0.1;
  std::uint64_t seed = 1;
  int max_spin = 2;
};

std::string describe(const CurveSource& source);
SphericalCurve load_curve(const CurveSource& source);

struct Tolerances {
  double structure = 1e-6;  // K - 1, holomorphy, rho/mu/Q, sinh-Gordon, H
  double frontal = 1e-9;    // frontal, conformality, both Q routes
  double norm_defect = 1e-10;
  double compat = 1e-9;
  double boundary = 1e-8;
  double cone = 1e-6;
};

struct PipelineConfig {
  CurveSource curve;
  int taylor_order = 24;
  /// 0: automatic. The default truncation is doubled (up to 256) while the
  /// solver reports an under-resolved jet.
  int modes = 0;
  double v_min = 0.01;
  double v_max = 0.3;
  int u_count = 128;
  int v_count = 64;
  Vec3 base_point = Vec3::Zero();
  std::string obj_path, csv_path, report_path;

  bool check_structure = true;
  bool check_boundary = true;
  bool check_area = true;
  bool check_cone = true;
  Tolerances tol;
};

/// Keys mirror the CLI long flags with '-' replaced by '_' (for example
/// "taylor_order", "v_max", "builtin", "curve_file", "cos_phi", "obj").
/// Unknown keys are a Parse error.
void apply_config(const nlohmann::json& config, PipelineConfig& cfg);

struct PipelineResult {
  DiagnosticsReport report;
  std::optional<SurfaceJet> surface;
  std::optional<SurfacePatch> patch;
  /// 0 when every enabled check passed, 2 otherwise.
  int exit_code = 0;
};

/// curve -> Gauss jet -> surface jet -> patch -> checks; writes the outputs
/// named in the config. Input and numerical failures propagate as Error.
PipelineResult run_pipeline(const PipelineConfig& cfg);

/// 3 for input errors, 4 for numerical divergence, 2 otherwise.
int exit_code_for(ErrorCode code);

}  // namespace ksurf
