#include "ksurf/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "ksurf/error.hpp"

namespace ksurf {

namespace {

using nlohmann::json;

std::vector<Vec3> read_vectors(const json& doc, const char* key) {
  std::vector<Vec3> out;
  if (!doc.contains(key)) return out;
  const json& list = doc.at(key);
  if (!list.is_array()) {
    throw Error(ErrorCode::Parse, "io", std::string("\"") + key + "\" must be an array");
  }
  for (const json& row : list) {
    if (!row.is_array() || row.size() != 3) {
      throw Error(ErrorCode::Parse, "io",
                  std::string("\"") + key + "\" entries must be arrays of three numbers");
    }
    Vec3 v;
    for (int c = 0; c < 3; ++c) {
      if (!row[c].is_number()) {
        throw Error(ErrorCode::Parse, "io", std::string("non-numeric entry in \"") + key + "\"");
      }
      v[c] = row[c].get<double>();
      if (!std::isfinite(v[c])) throw Error(ErrorCode::Parse, "io", "non-finite coefficient");
    }
    out.push_back(v);
  }
  return out;
}

std::string number(double x) {
  if (!std::isfinite(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void dump(const json& v, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent) * (depth + 1), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent) * depth, ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + json(it.key()).dump() + (indent > 0 ? ": " : ":");
        dump(it.value(), indent, depth + 1, out);
      }
      out += nl + close + "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // short numeric arrays stay on one line
      const bool flat = std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_primitive(); });
      out += "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        if (!flat) out += nl + pad;
        else if (i && indent > 0) out += " ";
        dump(v[i], indent, depth + 1, out);
      }
      if (!flat) out += nl + close;
      out += "]";
      return;
    }
    case json::value_t::number_float: {
      const double x = v.get<double>();
      out += std::isfinite(x) ? number(x) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

SphericalCurve parse_curve_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, "io", std::string("malformed curve JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::Parse, "io", "curve JSON must be an object");
  if (!doc.contains("cos")) throw Error(ErrorCode::Parse, "io", "curve JSON needs \"cos\"");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() != "cos" && it.key() != "sin" && it.key() != "normalize") {
      throw Error(ErrorCode::Parse, "io", "unknown key \"" + it.key() + "\" in curve JSON");
    }
  }
  bool normalize = false;
  if (doc.contains("normalize")) {
    if (!doc["normalize"].is_boolean()) {
      throw Error(ErrorCode::Parse, "io", "\"normalize\" must be a boolean");
    }
    normalize = doc["normalize"].get<bool>();
  }
  std::vector<Vec3> cos = read_vectors(doc, "cos");
  std::vector<Vec3> sin = read_vectors(doc, "sin");
  if (cos.empty()) throw Error(ErrorCode::Parse, "io", "\"cos\" needs at least the constant term");
  if (sin.size() + 1 > cos.size()) cos.resize(sin.size() + 1, Vec3::Zero());
  return SphericalCurve::from_fourier(FourierCurve3(std::move(cos), std::move(sin)), normalize);
}

SphericalCurve load_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "io", "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_curve_spec(buf.str());
}

json curve_to_json(const SphericalCurve& curve) {
  const FourierCurve3& b = curve.base();
  json cos = json::array(), sin = json::array();
  for (int m = 0; m <= b.modes(); ++m) cos.push_back(vec(b.cos_coeff(m)));
  for (int m = 1; m <= b.modes(); ++m) sin.push_back(vec(b.sin_coeff(m)));
  return {{"cos", cos}, {"sin", sin}, {"normalize", false}};
}

void export_mesh(const SurfacePatch& patch, MeshFormat format, std::ostream& out) {
  const PatchGrid& g = patch.grid;
  if (format == MeshFormat::Csv) {
    out << "u,v,x,y,z,nx,ny,nz,H,K\n";
    for (int j = 0; j < g.v.count; ++j) {
      for (int i = 0; i < g.u.count; ++i) {
        const FrameSample& s = patch.at(i, j);
        out << number(g.u.node(i)) << ',' << number(g.v.node(j));
        for (int c = 0; c < 3; ++c) out << ',' << number(s.X[c]);
        for (int c = 0; c < 3; ++c) out << ',' << number(s.N[c]);
        out << ',' << number(mean_curvature_raw(s)) << ',' << number(gauss_curvature_raw(s))
            << '\n';
      }
    }
    return;
  }

  struct Face {
    int a, b, c, d;
  };
  std::vector<Face> faces;
  const bool wrap_u = g.u.kind == AxisKind::Periodic;
  const bool wrap_v = g.v.kind == AxisKind::Periodic;
  const int iu = wrap_u ? g.u.count : g.u.count - 1;
  const int jv = wrap_v ? g.v.count : g.v.count - 1;
  for (int j = 0; j < jv; ++j) {
    for (int i = 0; i < iu; ++i) {
      const int i1 = (i + 1) % g.u.count, j1 = (j + 1) % g.v.count;
      faces.push_back({g.index(i, j), g.index(i1, j), g.index(i1, j1), g.index(i, j1)});
    }
  }
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
  for (const auto& s : patch.samples) {
    lo = lo.cwiseMin(s.X);
    hi = hi.cwiseMax(s.X);
  }
  const double extent2 = (hi - lo).squaredNorm();
  int degenerate = 0;
  for (const Face& f : faces) {
    const auto& P = patch.samples;
    const Vec3 area = 0.5 * (P[f.c].X - P[f.a].X).cross(P[f.d].X - P[f.b].X);
    if (!(area.norm() > 1e-12 * extent2)) ++degenerate;
  }
  if (degenerate > 0) {
    throw Error(ErrorCode::DegenerateFace, "io",
                std::to_string(degenerate) + " of " + std::to_string(faces.size()) +
                    " quad faces have zero area; OBJ export refused (use CSV)");
  }
  out << "# " << to_string(patch.origin) << ' ' << g.u.count << 'x' << g.v.count << '\n';
  for (const auto& s : patch.samples) {
    out << "v " << number(s.X.x()) << ' ' << number(s.X.y()) << ' ' << number(s.X.z()) << '\n';
  }
  for (const auto& s : patch.samples) {
    out << "vn " << number(s.N.x()) << ' ' << number(s.N.y()) << ' ' << number(s.N.z()) << '\n';
  }
  for (const Face& f : faces) {
    out << "f";
    for (int k : {f.a, f.b, f.c, f.d}) out << ' ' << k + 1 << "//" << k + 1;
    out << '\n';
  }
}

void export_mesh(const SurfacePatch& patch, MeshFormat format, const std::string& path) {
  std::ostringstream buf;
  export_mesh(patch, format, buf);
  write_text_file(path, buf.str());
}

std::string dump_json(const json& value, int indent) {
  std::string out;
  dump(value, indent, 0, out);
  out += '\n';
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "io", "cannot write " + path);
  out << text;
  if (!out.flush()) throw Error(ErrorCode::Io, "io", "write failed for " + path);
}

json report_to_json(const DiagnosticsReport& r) {
  const StructureResiduals& s = r.structure;
  json rows = json::array();
  for (const auto& row : r.area_table.rows) {
    rows.push_back({{"v_min", row.v_min}, {"area", row.area},
                    {"total_mean_curvature", row.total_mean_curvature}});
  }
  json doc = {
      {"curve", r.curve},
      {"verdict", r.verdict},
      {"origin", r.origin},
      {"taylor_order", r.taylor_order},
      {"modes", r.modes},
      {"trust_height", r.trust_height},
      {"v_min", r.v_min},
      {"v_max", r.v_max},
      {"u_count", r.u_count},
      {"v_count", r.v_count},
      {"orientation", r.orientation},
      {"K_minus_1", s.K_minus_1},
      {"holo_Q", s.holo_Q},
      {"romu", s.romu},
      {"sinh_gordon", s.sinh_gordon},
      {"H_consistency", s.H_consistency},
      {"q_routes", s.q_routes},
      {"frontal", s.frontal},
      {"conformal", s.conformal},
      {"umbilic_fraction", s.umbilic_fraction},
      {"norm_defect", r.norm_defect},
      {"compat", r.compat},
      {"boundary_omega", r.boundary.omega_v_defect},
      {"boundary_omega_doubled", r.boundary.omega_v_defect_doubled},
      {"axis_value_defect", r.boundary.axis_value_defect},
      {"singular_scan", r.boundary.singular_scan},
      {"scan_height", r.boundary.scan_height},
      {"area", r.area},
      {"total_mean_curvature", r.total_mean_curvature},
      {"area_table", rows},
      {"area_ratios", r.area_table.area_ratios},
      {"tmc_ratios", r.area_table.tmc_ratios},
      {"warnings", r.warnings},
      {"failures", r.failures},
      {"surface_emitted", r.surface_emitted},
      {"status", r.failures.empty() ? "pass" : "fail"},
  };
  if (r.has_cone_angle) {
    doc["cone_angle"] = {{"angle_area", r.cone.angle_area},
                         {"angle_gb", r.cone.angle_gb},
                         {"discrepancy", r.cone.discrepancy},
                         {"theta", r.cone.angle_gb / (2 * std::numbers::pi)}};
  } else {
    doc["cone_angle"] = nullptr;
  }
  return doc;
}

}  // namespace ksurf
