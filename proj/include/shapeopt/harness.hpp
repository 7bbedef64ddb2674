#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "shapeopt/curve.hpp"
#include "shapeopt/solver.hpp"

namespace shapeopt {

/// Defaults are the published ellipse experiment: mu = 2, 100 nodes, A = 0.
struct ExperimentSpec {
  double mu = 2.0;
  std::size_t nodes = 100;
  double metric_a = 0.0;
  std::vector<Method> methods{Method::kSteepestDescent, Method::kNewtonMultiplicative};
  std::uint64_t seed = 20120101;
  std::filesystem::path output_dir = "out";

  void validate() const;
  /// Overlays keys present in `doc` ("mu", "nodes", "metric_a", "methods",
  /// "seed", "output_dir") onto `base`.
  static ExperimentSpec from_json(const nlohmann::json& doc, ExperimentSpec base);
  static ExperimentSpec from_json(const nlohmann::json& doc) { return from_json(doc, ExperimentSpec{}); }
  nlohmann::json to_json() const;
};

/// c0(s) = 1/2 (cos s - 0.15 |1 - sin 2s| cos s, sin s - 0.15 |1 - cos 2s| cos s)
/// at s_i = 2 pi i / N.
DiscreteCurve initial_shape(std::size_t nodes);

/// Nodes (cos s_i, sin s_i / mu) of the optimal boundary x1^2 + mu^2 x2^2 = 1.
DiscreteCurve reference_ellipse(std::size_t nodes, double mu);

/// Smooth random star-shaped curve around the origin: radius
/// 1 + (modes 2..4 with amplitude <= 0.08), scaled anisotropically by
/// factors in [0.35, 0.9] and shifted by at most 0.05.
DiscreteCurve random_star_curve(std::mt19937_64& rng, std::size_t nodes);

/// Independent uniform values in [-1, 1] at every node.
NormalField random_field(std::mt19937_64& rng, std::size_t nodes);

/// 1 + 0.15 * (random combination of cos/sin modes 1..3), evaluated on the
/// equidistant parameters.
NormalField smooth_random_field(std::mt19937_64& rng, std::size_t nodes);

/// Solver settings used by the experiments for `method`.
SolverConfig experiment_config(const ExperimentSpec& spec, Method method);

struct MethodRun {
  Method method;
  std::vector<IterationRecord> records;
  std::optional<std::string> error;  // set when the solver failed part way
};

struct Table1Report {
  ExperimentSpec spec;
  std::vector<MethodRun> runs;
  std::string table_text;
  nlohmann::json table_json;
};

/// Runs every requested method from the initial shape (concurrently) and
/// builds the side-by-side comparison table.
Table1Report compute_table1(const ExperimentSpec& spec);

/// compute_table1 plus files in spec.output_dir: <method>.csv, <method>.svg,
/// table1.txt and table1.json.
Table1Report run_table1(const ExperimentSpec& spec);

std::string format_table(const std::vector<MethodRun>& runs);

struct PropertyCheck {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  std::string relation;  // how measured compares with bound, e.g. "<" or ">="
  bool passed = false;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;
  bool all_passed() const;
  nlohmann::json to_json() const;
};

/// Seeded run of the library invariants as named checks.
PropertyReport run_property_suite(const ExperimentSpec& spec);

}  // namespace shapeopt
