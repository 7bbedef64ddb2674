#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shapeopt/calculus.hpp"
#include "shapeopt/curve.hpp"
#include "shapeopt/errors.hpp"
#include "shapeopt/functional.hpp"
#include "shapeopt/metric.hpp"

namespace shapeopt {

enum class Method { kSteepestDescent, kNewtonMultiplicative, kNewtonGeneralForm };

std::string to_string(Method method);
/// Accepts "sd", "newton", "newton-general". Throws InvalidInput otherwise.
Method parse_method(const std::string& name);

struct ExactLineSearch {
  double bracket_max = 2.0;
  double tolerance = 1e-10;
};
struct FixedStep {
  double t = 1.0;
};
struct UnitStep {};

using LineSearch = std::variant<ExactLineSearch, FixedStep, UnitStep>;

struct SolverConfig {
  Method method = Method::kSteepestDescent;
  MetricParams metric;
  int max_iterations = 50;
  double stop_distance = 1e-7;
  LineSearch line_search = ExactLineSearch{};
  // Redistribute nodes uniformly in arc length after every step.
  bool resample = false;

  /// Throws InvalidInput when a field is out of range.
  void validate() const;
};

struct IterationRecord {
  int index = 0;
  double objective = 0.0;
  std::optional<double> distance;
  std::optional<double> step_scale;  // absent on the final row
  double step_norm = 0.0;            // G^A norm of the search direction
  std::optional<double> contraction_ratio;  // step_norm[k+1] / step_norm[k]
  std::optional<double> quadratic_ratio;    // distance[k+1] / distance[k]^2
  std::vector<Vec2> nodes;
};

/// Raised by optimize(); carries every record produced before the failure.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::vector<IterationRecord> partial)
      : Error(what), partial_(std::move(partial)) {}
  const std::vector<IterationRecord>& partial() const { return partial_; }

 private:
  std::vector<IterationRecord> partial_;
};

/// x_i + t alpha_i n_i. Throws ShapeDegenerate when the moved polygon
/// self-intersects, reverses orientation, or reverses any edge relative to
/// the source curve (the step folded through a focal point).
DiscreteCurve retract(const DiscreteCurve& curve, const NormalField& h, double t);

/// Uniform arc-length redistribution of the nodes (same node count).
DiscreteCurve resample_uniform(const DiscreteCurve& curve);

NormalField step_direction(const DiscreteCurve& curve, const VolumeFunctional& f, const SolverConfig& config);

/// Approximate minimizer of phi(t) = f(retract(curve, direction, t)) on
/// (0, bracket_max]: doubling bracket from t = 1e-3, then golden section.
double line_search_exact(const DiscreteCurve& curve, const VolumeFunctional& f, const NormalField& direction,
                         double bracket_max, double tolerance);

/// direction -> line search -> retract until the distance (or, without a
/// reference, the step norm) drops below config.stop_distance. The distance
/// is distance_bar for the quadratic family and distance_tilde to
/// `reference` otherwise.
std::vector<IterationRecord> optimize(const DiscreteCurve& start, const VolumeFunctional& f,
                                      const SolverConfig& config,
                                      const std::optional<DiscreteCurve>& reference = std::nullopt);

struct ConvergenceSummary {
  double geometric_factor = 0.0;      // median contraction ratio, last 5 steps
  std::optional<double> quadratic_coefficient;  // median quadratic ratio
  double omega_estimate = 0.0;        // 2 max step_norm[k+1] / step_norm[k]^2
};

/// Throws InsufficientData for fewer than three records.
ConvergenceSummary convergence_diagnostics(const std::vector<IterationRecord>& records);

}  // namespace shapeopt
