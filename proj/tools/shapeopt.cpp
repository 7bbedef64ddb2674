#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "shapeopt/errors.hpp"
#include "shapeopt/harness.hpp"
#include "shapeopt/io.hpp"
#include "shapeopt/svg.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvariantFailure = 1;
constexpr int kSolverError = 2;
constexpr int kBadInput = 3;

struct SpecFlags {
  std::optional<double> mu;
  std::optional<std::size_t> nodes;
  std::optional<double> metric_a;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::string config;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mu", mu, "ellipse aspect ratio (>= 1)");
    cmd->add_option("--nodes", nodes, "number of curve nodes");
    cmd->add_option("--metric-a", metric_a, "curvature weight A of the metric");
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--config", config, "JSON file with experiment settings")->check(CLI::ExistingFile);
  }

  // Config file first, then explicit flags on top.
  shapeopt::ExperimentSpec resolve() const {
    shapeopt::ExperimentSpec spec;
    if (!config.empty()) {
      try {
        spec = shapeopt::ExperimentSpec::from_json(nlohmann::json::parse(shapeopt::read_text_file(config)));
      } catch (const nlohmann::json::parse_error& e) {
        throw shapeopt::InvalidInput(config + ": " + e.what());
      }
    }
    if (mu) spec.mu = *mu;
    if (nodes) spec.nodes = *nodes;
    if (metric_a) spec.metric_a = *metric_a;
    if (out) spec.output_dir = *out;
    if (seed) spec.seed = *seed;
    spec.validate();
    return spec;
  }
};

void print_summary(const std::string& name, const std::vector<shapeopt::IterationRecord>& records) {
  if (records.empty()) return;
  const auto& last = records.back();
  std::cout << name << ": " << records.size() - 1 << " steps, f = " << shapeopt::format_double(last.objective);
  if (last.distance) std::cout << ", distance = " << shapeopt::format_fortran_e(*last.distance);
  std::cout << "\n";
}

int cmd_table1(const SpecFlags& flags) {
  const shapeopt::ExperimentSpec spec = flags.resolve();
  try {
    const shapeopt::Table1Report report = shapeopt::run_table1(spec);
    std::cout << report.table_text;
  } catch (const shapeopt::SolverError& e) {
    std::cout << shapeopt::read_text_file(spec.output_dir / "table1.txt");
    std::cerr << "solver error: " << e.what() << " (partial output in " << spec.output_dir.string() << ")\n";
    return kSolverError;
  }
  return kOk;
}

int cmd_run(const SpecFlags& flags, const std::string& method_name, const std::string& input, int max_iterations,
            bool resample) {
  shapeopt::ExperimentSpec spec = flags.resolve();
  const shapeopt::Method method = shapeopt::parse_method(method_name);
  const shapeopt::DiscreteCurve start = input.empty() ? shapeopt::initial_shape(spec.nodes)
                                                      : shapeopt::DiscreteCurve(shapeopt::read_curve_file(input));
  shapeopt::SolverConfig config = shapeopt::experiment_config(spec, method);
  config.max_iterations = max_iterations;
  config.resample = resample;
  const shapeopt::VolumeFunctional f = shapeopt::VolumeFunctional::quadratic_mso(spec.mu);
  const shapeopt::DiscreteCurve reference = shapeopt::reference_ellipse(start.size(), spec.mu);

  std::vector<shapeopt::IterationRecord> records;
  int status = kOk;
  try {
    records = shapeopt::optimize(start, f, config, reference);
  } catch (const shapeopt::SolverError& e) {
    records = e.partial();
    std::cerr << "solver error: " << e.what() << "\n";
    status = kSolverError;
  }

  const auto& dir = spec.output_dir;
  shapeopt::write_text_file(dir / (method_name + ".csv"), shapeopt::records_to_csv(records));
  shapeopt::write_text_file(dir / (method_name + ".json"), shapeopt::records_to_json(records).dump(2) + "\n");
  std::vector<std::vector<shapeopt::Vec2>> curves;
  for (const auto& r : records) curves.push_back(r.nodes);
  shapeopt::write_text_file(dir / (method_name + ".svg"), shapeopt::render_iterates_svg(curves));
  if (!records.empty()) shapeopt::write_curve_file(dir / (method_name + "_final.csv"), records.back().nodes);
  print_summary(method_name, records);
  return status;
}

int cmd_verify(const SpecFlags& flags, const std::string& json_out) {
  const shapeopt::ExperimentSpec spec = flags.resolve();
  const shapeopt::PropertyReport report = shapeopt::run_property_suite(spec);
  const std::string text = report.to_json().dump(2) + "\n";
  if (json_out.empty()) {
    std::cout << text;
  } else {
    shapeopt::write_text_file(json_out, text);
  }
  for (const auto& c : report.checks) {
    std::cerr << (c.passed ? "ok   " : "FAIL ") << c.name << " = " << shapeopt::format_double(c.measured) << "\n";
  }
  return report.all_passed() ? kOk : kInvariantFailure;
}

int cmd_render(const std::string& input, const std::string& out) {
  const std::vector<shapeopt::Vec2> nodes = shapeopt::read_curve_file(input);
  if (nodes.size() < 3) throw shapeopt::InvalidInput(input + ": need at least three nodes");
  shapeopt::write_text_file(out, shapeopt::render_iterates_svg({nodes}));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemannian shape optimization on discretized planar curves"};
  app.require_subcommand(1);

  SpecFlags table_flags;
  auto* table1 = app.add_subcommand("table1", "steepest descent vs Newton from the standard start shape");
  table_flags.attach(table1);

  SpecFlags run_flags;
  std::string method = "newton";
  std::string run_input;
  int max_iterations = 50;
  bool resample = false;
  auto* run = app.add_subcommand("run", "run a single optimizer");
  run_flags.attach(run);
  run->add_option("--method", method, "sd, newton or newton-general")
      ->check(CLI::IsMember({"sd", "newton", "newton-general"}));
  run->add_option("--input", run_input, "start curve (CSV or JSON); default is the standard start shape");
  run->add_option("--max-iterations", max_iterations, "iteration cap")->check(CLI::PositiveNumber);
  run->add_flag("--resample", resample, "redistribute nodes by arc length after each step");

  SpecFlags verify_flags;
  std::string verify_json;
  auto* verify = app.add_subcommand("verify", "run the seeded property suite");
  verify->add_option("--seed", verify_flags.seed, "random seed");
  verify->add_option("--mu", verify_flags.mu, "ellipse aspect ratio (>= 1)");
  verify->add_option("--nodes", verify_flags.nodes, "number of curve nodes");
  verify->add_option("--json", verify_json, "write the report here instead of stdout");

  std::string render_input;
  std::string render_out;
  auto* render = app.add_subcommand("render", "draw a curve file as SVG");
  render->add_option("--input", render_input, "curve CSV or JSON")->required();
  render->add_option("--out", render_out, "SVG file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*table1) return cmd_table1(table_flags);
    if (*run) return cmd_run(run_flags, method, run_input, max_iterations, resample);
    if (*verify) return cmd_verify(verify_flags, verify_json);
    if (*render) return cmd_render(render_input, render_out);
  } catch (const shapeopt::InvalidInput& e) {
    std::cerr << "bad input: " << e.what() << "\n";
    return kBadInput;
  } catch (const shapeopt::DegenerateCurve& e) {
    std::cerr << "bad input: " << e.what() << "\n";
    return kBadInput;
  } catch (const shapeopt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "bad input: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
