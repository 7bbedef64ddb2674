#include "shapeopt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>

#include "shapeopt/errors.hpp"
#include "shapeopt/io.hpp"
#include "shapeopt/svg.hpp"

namespace shapeopt {

namespace {

constexpr double kPi = std::numbers::pi;

MethodRun run_method(const ExperimentSpec& spec, Method method) {
  const VolumeFunctional f = VolumeFunctional::quadratic_mso(spec.mu);
  const DiscreteCurve start = initial_shape(spec.nodes);
  const DiscreteCurve reference = reference_ellipse(spec.nodes, spec.mu);
  MethodRun run{method, {}, std::nullopt};
  try {
    run.records = optimize(start, f, experiment_config(spec, method), reference);
  } catch (const SolverError& e) {
    run.records = e.partial();
    run.error = e.what();
  }
  return run;
}

std::string cell(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (!std::isfinite(mu) || mu < 1.0) throw InvalidInput("mu must be finite and >= 1");
  if (nodes < DiscreteCurve::kMinNodes) throw InvalidInput("nodes must be at least 8");
  if (!std::isfinite(metric_a) || metric_a < 0.0) throw InvalidInput("metric_a must be finite and >= 0");
  if (methods.empty()) throw InvalidInput("at least one method is required");
}

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& doc, ExperimentSpec base) {
  if (!doc.is_object()) throw InvalidInput("experiment config must be a JSON object");
  try {
    if (doc.contains("mu")) base.mu = doc.at("mu").get<double>();
    if (doc.contains("nodes")) {
      const auto n = doc.at("nodes").get<long long>();
      if (n < 0) throw InvalidInput("nodes must be nonnegative");
      base.nodes = static_cast<std::size_t>(n);
    }
    if (doc.contains("metric_a")) base.metric_a = doc.at("metric_a").get<double>();
    if (doc.contains("methods")) {
      base.methods.clear();
      for (const auto& m : doc.at("methods")) base.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (doc.contains("seed")) base.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("output_dir")) base.output_dir = doc.at("output_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("experiment config: ") + e.what());
  }
  return base;
}

nlohmann::json ExperimentSpec::to_json() const {
  nlohmann::json methods_json = nlohmann::json::array();
  for (Method m : methods) methods_json.push_back(to_string(m));
  return {{"mu", mu},
          {"nodes", nodes},
          {"metric_a", metric_a},
          {"methods", methods_json},
          {"seed", seed},
          {"output_dir", output_dir.string()}};
}

DiscreteCurve initial_shape(std::size_t nodes) {
  if (nodes < DiscreteCurve::kMinNodes) throw InvalidInput("initial shape needs at least 8 nodes");
  std::vector<Vec2> pts(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double s = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(nodes);
    const double c = std::cos(s);
    pts[i] = 0.5 * Vec2(c - 0.15 * std::abs(1.0 - std::sin(2.0 * s)) * c,
                        std::sin(s) - 0.15 * std::abs(1.0 - std::cos(2.0 * s)) * c);
  }
  return DiscreteCurve(std::move(pts));
}

DiscreteCurve reference_ellipse(std::size_t nodes, double mu) {
  if (nodes < DiscreteCurve::kMinNodes) throw InvalidInput("reference ellipse needs at least 8 nodes");
  if (!std::isfinite(mu) || mu < 1.0) throw InvalidInput("mu must be finite and >= 1");
  std::vector<Vec2> pts(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double s = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(nodes);
    pts[i] = Vec2(std::cos(s), std::sin(s) / mu);
  }
  return DiscreteCurve(std::move(pts));
}

SolverConfig experiment_config(const ExperimentSpec& spec, Method method) {
  SolverConfig config;
  config.method = method;
  config.metric = MetricParams::make(spec.metric_a);
  config.line_search = ExactLineSearch{};
  return config;
}

Table1Report compute_table1(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<std::future<MethodRun>> pending;
  for (Method m : spec.methods) pending.push_back(std::async(std::launch::async, run_method, spec, m));

  Table1Report report;
  report.spec = spec;
  for (auto& fut : pending) report.runs.push_back(fut.get());
  report.table_text = format_table(report.runs);

  nlohmann::json methods = nlohmann::json::object();
  for (const MethodRun& run : report.runs) {
    nlohmann::json entry{{"records", records_to_json(run.records)}};
    entry["error"] = run.error ? nlohmann::json(*run.error) : nlohmann::json(nullptr);
    methods[to_string(run.method)] = entry;
  }
  report.table_json = {{"spec", spec.to_json()}, {"methods", methods}};
  return report;
}

Table1Report run_table1(const ExperimentSpec& spec) {
  Table1Report report = compute_table1(spec);
  const auto& dir = spec.output_dir;
  for (const MethodRun& run : report.runs) {
    const std::string name = to_string(run.method);
    write_text_file(dir / (name + ".csv"), records_to_csv(run.records));
    std::vector<std::vector<Vec2>> curves;
    for (const IterationRecord& r : run.records) curves.push_back(r.nodes);
    write_text_file(dir / (name + ".svg"), render_iterates_svg(curves));
  }
  write_text_file(dir / "table1.txt", report.table_text);
  write_text_file(dir / "table1.json", report.table_json.dump(2) + "\n");

  for (const MethodRun& run : report.runs) {
    if (run.error) throw SolverError(to_string(run.method) + ": " + *run.error, run.records);
  }
  return report;
}

std::string format_table(const std::vector<MethodRun>& runs) {
  constexpr std::size_t kWidth = 11;
  std::size_t rows = 0;
  for (const MethodRun& run : runs) rows = std::max(rows, run.records.size());

  std::string header = pad("k", 3);
  std::string rule;
  for (const MethodRun& run : runs) {
    header += " | " + pad(to_string(run.method) + " f", kWidth) + pad("d", kWidth) + pad("alpha", 7);
  }
  rule.assign(header.size(), '-');
  std::string out = header + "\n" + rule + "\n";
  for (std::size_t k = 0; k < rows; ++k) {
    std::string line = pad(std::to_string(k), 3);
    for (const MethodRun& run : runs) {
      line += " | ";
      if (k >= run.records.size()) {
        line += std::string(2 * kWidth + 7, ' ');
        continue;
      }
      const IterationRecord& r = run.records[k];
      line += pad(cell("%.4f", r.objective), kWidth);
      line += pad(r.distance ? format_fortran_e(*r.distance) : "", kWidth);
      line += pad(r.step_scale ? cell("%.2f", *r.step_scale) : "", 7);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  for (const MethodRun& run : runs) {
    if (run.error) out += to_string(run.method) + " stopped early: " + *run.error + "\n";
  }
  return out;
}

bool PropertyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

nlohmann::json PropertyReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const PropertyCheck& c : checks) {
    arr.push_back({{"name", c.name},
                   {"measured", c.measured},
                   {"bound", c.bound},
                   {"relation", c.relation},
                   {"passed", c.passed}});
  }
  return {{"all_passed", all_passed()}, {"checks", arr}};
}

}  // namespace shapeopt
