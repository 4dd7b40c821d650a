#include <cmath>
#include <sstream>
#include <functional>
#include <numbers>
#include <string>

#include "doctest.h"
#include "ksurf/error.hpp"
#include "ksurf/io.hpp"
#include "ksurf/pipeline.hpp"

using namespace ksurf;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InternalConsistency;
}

int count_lines(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  int n = 0;
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

SurfacePatch circle_patch(int u_count, int v_count) {
  const auto jet = solve_cauchy(builtin::circle(0.5), 24, 8);
  return sample_patch(integrate_surface(jet, Vec3::Zero()), u_count,
                      Axis::chebyshev(0.01, 0.3, v_count));
}

}  // namespace

TEST_CASE("curve specs") {
  SUBCASE("constant north pole") {
    const auto c = parse_curve_spec(R"({"cos":[[0,0,1]],"sin":[],"normalize":true})");
    CHECK((c(1.0) - Vec3(0, 0, 1)).norm() <= 1e-15);
  }
  SUBCASE("circle of height 0.5") {
    const double r = std::sqrt(0.75);
    std::ostringstream spec;
    spec.precision(17);
    spec << R"({"cos":[[0,0,0.5],[)" << r << R"(,0,0]],"sin":[[0,)" << r << R"(,0]],"normalize":true})";
    const auto c = parse_curve_spec(spec.str());
    CHECK(c.norm_defect() <= 1e-12);
    CHECK((c(0.7) - builtin::circle(0.5)(0.7)).norm() <= 1e-12);
  }
  SUBCASE("unnormalized spec must already lie on the sphere") {
    CHECK(code_of([] { parse_curve_spec(R"({"cos":[[0,0,2]],"normalize":false})"); }) ==
          ErrorCode::Domain);
  }
  SUBCASE("round trip") {
    const auto c = builtin::cusp_demo();
    const auto back = parse_curve_spec(dump_json(curve_to_json(c)));
    for (double s : {0.0, 1.0, 4.0}) CHECK((back(s) - c(s)).norm() == 0.0);
  }
  SUBCASE("distinct error codes") {
    CHECK(code_of([] { parse_curve_spec(R"({"cos":[[0,0,0]],"sin":[],"normalize":true})"); }) ==
          ErrorCode::OriginCrossing);
    CHECK(code_of([] { parse_curve_spec(R"({"cos":[[0,0,1]")"); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse_curve_spec(R"({"sin":[]})"); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse_curve_spec(R"({"cos":[[0,0]]})"); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse_curve_spec(R"({"cos":[[0,0,1]],"normalize":"yes"})"); }) ==
          ErrorCode::Parse);
    CHECK(code_of([] { parse_curve_spec(R"({"cos":[[0,0,1]],"colour":1})"); }) == ErrorCode::Parse);
    // passes 1e-3 from the origin: the radial projection is not resolvable
    CHECK(code_of([] {
            parse_curve_spec(R"({"cos":[[0.999,0,0],[1,0,0]],"sin":[[0,0.01,0]],"normalize":true})");
          }) == ErrorCode::Resolution);
    CHECK(code_of([] { load_curve_file("/nonexistent/curve.json"); }) == ErrorCode::Io);
  }
}

TEST_CASE("mesh export") {
  SUBCASE("OBJ counts and periodic stitching") {
    const auto patch = circle_patch(16, 6);
    std::ostringstream out;
    export_mesh(patch, MeshFormat::Obj, out);
    const std::string obj = out.str();
    CHECK(count_lines(obj, "v ") == 16 * 6);
    CHECK(count_lines(obj, "vn ") == 16 * 6);
    CHECK(count_lines(obj, "f ") == 16 * 5);
    // last column of the first row is joined to the first column
    CHECK(obj.find("f 16//16 1//1 17//17 32//32") != std::string::npos);
  }
  SUBCASE("CSV") {
    const auto patch = circle_patch(8, 4);
    std::ostringstream out;
    export_mesh(patch, MeshFormat::Csv, out);
    const std::string csv = out.str();
    CHECK(csv.rfind("u,v,x,y,z,nx,ny,nz,H,K\n", 0) == 0);
    CHECK(count_lines(csv, "") == 1 + 8 * 4);
  }
  SUBCASE("degenerate patch: CSV only") {
    const auto sjet = integrate_surface(solve_cauchy(builtin::equator()), Vec3::Zero());
    const auto patch = sample_patch(sjet, 16, Axis::chebyshev(0.01, 0.3, 4));
    std::ostringstream csv, obj;
    CHECK_NOTHROW(export_mesh(patch, MeshFormat::Csv, csv));
    CHECK(code_of([&] { export_mesh(patch, MeshFormat::Obj, obj); }) == ErrorCode::DegenerateFace);
  }
  SUBCASE("write failure") {
    CHECK(code_of([] { export_mesh(circle_patch(8, 4), MeshFormat::Csv, "/nonexistent/x.csv"); }) ==
          ErrorCode::Io);
  }
}

TEST_CASE("JSON numbers carry 17 significant digits") {
  CHECK(dump_json({{"x", 0.1}}, 0) == "{\"x\":0.10000000000000001}\n");
  CHECK(dump_json({{"x", std::nan("")}}, 0) == "{\"x\":null}\n");
  CHECK(dump_json({{"n", 3}, {"b", true}}, 0) == "{\"b\":true,\"n\":3}\n");
}

TEST_CASE("pipeline") {
  SUBCASE("circle passes") {
    PipelineConfig cfg;
    const auto res = run_pipeline(cfg);
    CHECK(res.exit_code == 0);
    CHECK(res.report.failures.empty());
    CHECK(res.report.surface_emitted);
    CHECK(res.report.verdict == "RegularConvexJordan");
    CHECK(res.report.has_cone_angle);
    CHECK(std::abs(res.report.cone.angle_gb - std::numbers::pi) <= 1e-8);
  }
  SUBCASE("equator takes the violation path") {
    PipelineConfig cfg;
    cfg.curve.kind = CurveSource::Kind::Equator;
    const auto res = run_pipeline(cfg);
    CHECK(res.exit_code == 2);
    CHECK_FALSE(res.report.surface_emitted);
    CHECK_FALSE(res.patch.has_value());
    CHECK_FALSE(res.report.boundary.singular_scan);
  }
  SUBCASE("cusp curve passes with automatic resolution") {
    PipelineConfig cfg;
    cfg.curve.kind = CurveSource::Kind::CuspDemo;
    const auto res = run_pipeline(cfg);
    CHECK(res.exit_code == 0);
    CHECK(res.report.verdict == "AdmissibleCuspCurve");
    CHECK(res.report.modes >= 32);
  }
  SUBCASE("config keys override") {
    PipelineConfig cfg;
    apply_config(nlohmann::json::parse(
                     R"({"builtin":"perturbed","seed":4,"cos_phi":0.3,"v_max":0.2,"checks":["boundary"]})"),
                 cfg);
    CHECK(cfg.curve.kind == CurveSource::Kind::Perturbed);
    CHECK(cfg.curve.seed == 4);
    CHECK(cfg.curve.cos_phi == 0.3);
    CHECK(cfg.v_max == 0.2);
    CHECK_FALSE(cfg.check_structure);
    CHECK(cfg.check_boundary);
    CHECK(code_of([&] { apply_config(nlohmann::json::parse(R"({"speed":1})"), cfg); }) ==
          ErrorCode::Parse);
    CHECK(code_of([&] { apply_config(nlohmann::json::parse(R"({"v_max":"high"})"), cfg); }) ==
          ErrorCode::Parse);
  }
  SUBCASE("repeated runs give identical reports") {
    PipelineConfig cfg;
    cfg.curve.kind = CurveSource::Kind::Perturbed;
    cfg.u_count = 32;
    cfg.v_count = 16;
    const auto a = dump_json(report_to_json(run_pipeline(cfg).report));
    const auto b = dump_json(report_to_json(run_pipeline(cfg).report));
    CHECK(a == b);
  }
  SUBCASE("invalid parameters") {
    PipelineConfig cfg;
    cfg.v_min = 0.5;
    cfg.v_max = 0.3;
    CHECK(code_of([&] { run_pipeline(cfg); }) == ErrorCode::Domain);
  }
  SUBCASE("exit codes") {
    CHECK(exit_code_for(ErrorCode::Parse) == 3);
    CHECK(exit_code_for(ErrorCode::OriginCrossing) == 3);
    CHECK(exit_code_for(ErrorCode::Divergence) == 4);
    CHECK(exit_code_for(ErrorCode::Resolution) == 4);
  }
}
