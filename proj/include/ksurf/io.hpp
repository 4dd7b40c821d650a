#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ksurf/diagnostics.hpp"
#include "ksurf/sphere_curves.hpp"
#include "ksurf/surface_builder.hpp"

namespace ksurf {

/// Curve JSON: {"cos": [[x,y,z], ...], "sin": [[x,y,z], ...], "normalize": bool}.
/// "cos" starts at the constant term, "sin" at mode 1. Errors: Parse for
/// malformed input, OriginCrossing when min |gamma| <= 1e-6, Resolution when
/// the normalized curve cannot be resolved.
SphericalCurve parse_curve_spec(std::string_view text);
SphericalCurve load_curve_file(const std::string& path);
nlohmann::json curve_to_json(const SphericalCurve& curve);

enum class MeshFormat { Obj, Csv };

/// OBJ: `v` lines in grid order (u fastest), matching `vn` lines from the
/// stored normals, quad faces; periodic axes are stitched. A face whose
/// vector area is <= 1e-12 of the squared patch extent is degenerate and
/// the OBJ is refused with a DegenerateFace error.
/// CSV: header u,v,x,y,z,nx,ny,nz,H,K with H and K from the raw samples.
void export_mesh(const SurfacePatch& patch, MeshFormat format, std::ostream& out);
void export_mesh(const SurfacePatch& patch, MeshFormat format, const std::string& path);

/// All floating point numbers are written with 17 significant digits;
/// non-finite numbers become null.
std::string dump_json(const nlohmann::json& value, int indent = 2);
void write_text_file(const std::string& path, const std::string& text);

nlohmann::json report_to_json(const DiagnosticsReport& report);

}  // namespace ksurf
