#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "shapeopt/errors.hpp"
#include "shapeopt/harness.hpp"
#include "shapeopt/io.hpp"
#include "shapeopt/svg.hpp"

using namespace shapeopt;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("shapeopt_test_" + name);
  fs::remove_all(p);
  return p;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::size_t data_rows(const std::string& csv) { return count(csv, "\n") - 1; }

}  // namespace

TEST_CASE("initial shape") {
  const DiscreteCurve c = initial_shape(100);
  // CCW normalization must keep node 0 first
  CHECK(c.node(0).isApprox(Vec2(0.425, 0.0)));
  CHECK(std::abs(c.node(25).x()) < 1e-15);
  CHECK(c.node(25).y() == doctest::Approx(0.5));
  CHECK_THROWS_AS(initial_shape(4), InvalidInput);
}

TEST_CASE("reference ellipse") {
  const DiscreteCurve circle = reference_ellipse(40, 1.0);
  for (std::size_t i = 0; i < 40; ++i) CHECK(circle.node(i).norm() == doctest::Approx(1.0).epsilon(1e-15));
  const DiscreteCurve e = reference_ellipse(100, 2.0);
  CHECK(std::abs(e.node(25).x()) < 1e-15);
  CHECK(e.node(25).y() == doctest::Approx(0.5));
  CHECK(std::abs(evaluate_mso(e, 2.0) + 0.7854) < 1e-3);
  CHECK_THROWS_AS(reference_ellipse(100, 0.9), InvalidInput);
}

TEST_CASE("experiment settings") {
  ExperimentSpec spec;
  CHECK(spec.mu == 2.0);
  CHECK(spec.nodes == 100);
  CHECK(spec.metric_a == 0.0);
  CHECK_NOTHROW(spec.validate());

  const ExperimentSpec overlay =
      ExperimentSpec::from_json(nlohmann::json::parse(R"({"mu": 1.5, "methods": ["sd"], "output_dir": "x"})"));
  CHECK(overlay.mu == 1.5);
  CHECK(overlay.nodes == 100);
  CHECK(overlay.methods == std::vector<Method>{Method::kSteepestDescent});
  CHECK(overlay.output_dir == fs::path("x"));

  const ExperimentSpec back = ExperimentSpec::from_json(overlay.to_json());
  CHECK(back.to_json() == overlay.to_json());

  CHECK_THROWS_AS(ExperimentSpec::from_json(nlohmann::json::parse(R"({"mu": "two"})")), InvalidInput);
  CHECK_THROWS_AS(ExperimentSpec::from_json(nlohmann::json::parse(R"({"methods": ["lbfgs"]})")), InvalidInput);
  spec.nodes = 5;
  CHECK_THROWS_AS(spec.validate(), InvalidInput);
}

TEST_CASE("number formatting") {
  CHECK(format_fortran_e(0.92223) == "0.9222E+00");
  CHECK(format_fortran_e(0.13739) == "0.1374E+00");
  CHECK(format_fortran_e(1.736e-10) == "0.1736E-09");
  CHECK(format_fortran_e(0.99999) == "0.1000E+01");
  CHECK(format_fortran_e(0.0) == "0.0000E+00");
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(kPi)) == kPi);
}

TEST_CASE("curve file round trips are exact") {
  const DiscreteCurve c = initial_shape(100);
  const std::vector<Vec2> nodes(c.nodes().begin(), c.nodes().end());
  CHECK(curve_from_csv(curve_to_csv(nodes)) == nodes);
  CHECK(curve_from_json(curve_to_json(nodes)) == nodes);

  const fs::path dir = scratch_dir("roundtrip");
  write_curve_file(dir / "c.csv", nodes);
  write_curve_file(dir / "c.json", nodes);
  CHECK(read_curve_file(dir / "c.csv") == nodes);
  CHECK(read_curve_file(dir / "c.json") == nodes);
  fs::remove_all(dir);
}

TEST_CASE("curve readers reject malformed input") {
  CHECK(curve_from_csv("1,2\n3,4\n").size() == 2);
  CHECK_THROWS_AS(curve_from_csv("x,y\n1,abc\n"), InvalidInput);
  CHECK_THROWS_AS(curve_from_csv("1 2\n"), InvalidInput);
  CHECK_THROWS_AS(curve_from_json(nlohmann::json::parse(R"({"points": []})")), InvalidInput);
  CHECK_THROWS_AS(curve_from_json(nlohmann::json::parse(R"({"nodes": [[1, 2, 3]]})")), InvalidInput);
  CHECK_THROWS_AS(read_curve_file("/nonexistent/curve.csv"), InvalidInput);
}

TEST_CASE("svg output") {
  const std::vector<std::vector<Vec2>> curves{{{0, 0}, {1, 0}, {0, 1}}, {{0, 0}, {0.5, 0}, {0, 0.5}}};
  const std::string svg = render_iterates_svg(curves);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("viewBox=\"-1.2 -1.2 2.4 2.4\"") != std::string::npos);
  CHECK(count(svg, "<polyline") == 2);
  CHECK(svg.find("#0000ff") != std::string::npos);
  CHECK(svg.find("#ff0000") != std::string::npos);
  // every opened element is closed
  CHECK(count(svg, "<svg") == count(svg, "</svg>"));
  CHECK(count(svg, "<g ") == count(svg, "</g>"));
  CHECK(count(svg, "/>") == count(svg, "<polyline") + count(svg, "<rect"));
}

TEST_CASE("table1 end to end") {
  ExperimentSpec spec;
  spec.output_dir = scratch_dir("table1");
  const Table1Report report = run_table1(spec);
  REQUIRE(report.runs.size() == 2);

  const std::string newton_csv = read_text_file(spec.output_dir / "newton.csv");
  const std::string sd_csv = read_text_file(spec.output_dir / "sd.csv");
  CHECK(newton_csv.rfind("k,f,distance,alpha,step_norm,contraction_ratio,quadratic_ratio\n", 0) == 0);
  CHECK(data_rows(newton_csv) <= 6);
  CHECK(data_rows(sd_csv) >= 15);
  CHECK(data_rows(sd_csv) <= 21);

  for (const MethodRun& run : report.runs) {
    CHECK_FALSE(run.error);
    CHECK(*run.records.back().distance <= 1e-7);
    CHECK(std::abs(run.records.back().objective + 0.7854) < 1e-3);
    const std::string svg = read_text_file(spec.output_dir / (to_string(run.method) + ".svg"));
    CHECK(count(svg, "<polyline") == run.records.size());
  }

  const std::string text = read_text_file(spec.output_dir / "table1.txt");
  CHECK(text.find("0.9222E+00") != std::string::npos);
  CHECK(text.find("-0.5571") != std::string::npos);
  const auto json = nlohmann::json::parse(read_text_file(spec.output_dir / "table1.json"));
  CHECK(json["methods"]["newton"]["records"].size() == report.runs[1].records.size());

  // same spec, same bytes
  ExperimentSpec again = spec;
  again.output_dir = scratch_dir("table1_again");
  run_table1(again);
  for (const char* name : {"newton.csv", "sd.csv", "newton.svg", "table1.txt"}) {
    CHECK(read_text_file(spec.output_dir / name) == read_text_file(again.output_dir / name));
  }
  fs::remove_all(spec.output_dir);
  fs::remove_all(again.output_dir);
}

TEST_CASE("table1 flushes partial output before reporting a solver failure") {
  ExperimentSpec spec;
  spec.methods = {Method::kNewtonGeneralForm};
  spec.output_dir = scratch_dir("table1_fail");
  CHECK_THROWS_AS(run_table1(spec), SolverError);
  CHECK(fs::exists(spec.output_dir / "newton-general.csv"));
  CHECK(read_text_file(spec.output_dir / "table1.txt").find("stopped early") != std::string::npos);
  fs::remove_all(spec.output_dir);
}

TEST_CASE("property suite") {
  const PropertyReport report = run_property_suite(ExperimentSpec{});
  CHECK(report.all_passed());
  const auto json = report.to_json();
  CHECK(json["all_passed"] == true);
  std::vector<std::string> names;
  for (const auto& c : json["checks"]) names.push_back(c["name"]);
  for (const char* expected : {"hessian_symmetry", "taylor_cubic_min_slope", "gradient_fd"}) {
    CHECK(std::find(names.begin(), names.end(), expected) != names.end());
  }
  // seeded: identical reports
  CHECK(run_property_suite(ExperimentSpec{}).to_json() == json);
}
