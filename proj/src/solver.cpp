#include "shapeopt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shapeopt {

namespace {

constexpr double kInitialTrialStep = 1e-3;
constexpr double kInvGolden = 0.6180339887498949;  // (sqrt(5) - 1) / 2

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::optional<double> reference_distance(const DiscreteCurve& curve, const VolumeFunctional& f,
                                         const std::optional<DiscreteCurve>& reference) {
  if (!reference) return std::nullopt;
  if (f.family == FamilyTag::kQuadraticMso) return distance_bar(curve, f.mu);
  return distance_tilde(curve, *reference);
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::kSteepestDescent:
      return "sd";
    case Method::kNewtonMultiplicative:
      return "newton";
    case Method::kNewtonGeneralForm:
      return "newton-general";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "sd") return Method::kSteepestDescent;
  if (name == "newton") return Method::kNewtonMultiplicative;
  if (name == "newton-general") return Method::kNewtonGeneralForm;
  throw InvalidInput("unknown method '" + name + "' (expected sd, newton or newton-general)");
}

void SolverConfig::validate() const {
  if (!(metric.a >= 0.0) || !std::isfinite(metric.a)) throw InvalidInput("metric parameter A must be >= 0");
  if (max_iterations <= 0) throw InvalidInput("max_iterations must be positive");
  if (!(stop_distance > 0.0)) throw InvalidInput("stop_distance must be positive");
  if (const auto* exact = std::get_if<ExactLineSearch>(&line_search)) {
    if (!(exact->bracket_max > 0.0)) throw InvalidInput("bracket_max must be positive");
    if (!(exact->tolerance > 0.0 && exact->tolerance < exact->bracket_max)) {
      throw InvalidInput("line search tolerance must lie in (0, bracket_max)");
    }
  }
  if (const auto* fixed = std::get_if<FixedStep>(&line_search)) {
    if (!(fixed->t > 0.0)) throw InvalidInput("fixed step must be positive");
  }
}

DiscreteCurve retract(const DiscreteCurve& curve, const NormalField& h, double t) {
  require_matching(curve, h);
  const std::size_t n = curve.size();
  const CurveGeometry& geo = curve.geometry();
  std::vector<Vec2> moved(n);
  for (std::size_t i = 0; i < n; ++i) moved[i] = curve.node(i) + (t * h[i]) * geo.normal[i];

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = curve.next(i);
    const Vec2 before = curve.node(j) - curve.node(i);
    const Vec2 after = moved[j] - moved[i];
    if (!(before.dot(after) > 0.0)) {
      throw ShapeDegenerate("retraction folds edge " + std::to_string(i) + " back on itself");
    }
  }
  if (!(signed_area(moved) > 0.0)) throw ShapeDegenerate("retraction reverses the curve orientation");
  if (!check_simple(moved)) throw ShapeDegenerate("retracted curve self-intersects");
  try {
    return DiscreteCurve(std::move(moved), std::vector<double>(curve.params().begin(), curve.params().end()));
  } catch (const DegenerateCurve& e) {
    throw ShapeDegenerate(std::string("retracted curve is degenerate: ") + e.what());
  }
}

DiscreteCurve resample_uniform(const DiscreteCurve& curve) {
  const std::size_t n = curve.size();
  std::vector<double> cumulative(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    cumulative[i + 1] = cumulative[i] + (curve.node(curve.next(i)) - curve.node(i)).norm();
  }
  const double total = cumulative[n];
  std::vector<Vec2> nodes(n);
  std::size_t edge = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = total * static_cast<double>(k) / static_cast<double>(n);
    while (edge + 1 < n && cumulative[edge + 1] <= s) ++edge;
    const double len = cumulative[edge + 1] - cumulative[edge];
    const double u = (s - cumulative[edge]) / len;
    nodes[k] = (1.0 - u) * curve.node(edge) + u * curve.node(curve.next(edge));
  }
  return DiscreteCurve(std::move(nodes));
}

NormalField step_direction(const DiscreteCurve& curve, const VolumeFunctional& f, const SolverConfig& config) {
  const BoundaryKernel kernels = boundary_kernel(curve, f);
  const NormalField gradient = riesz_gradient(curve, config.metric, kernels.g);
  switch (config.method) {
    case Method::kSteepestDescent:
      return gradient.scaled(-1.0);
    case Method::kNewtonMultiplicative: {
      if (f.family != FamilyTag::kQuadraticMso) {
        throw InvalidInput("the multiplication Hessian is only defined for the quadratic family");
      }
      const HessianOperator hessian = hessian_at_solution(curve, f.mu);
      return solve_hessian(hessian, gradient, config.metric).scaled(-1.0);
    }
    case Method::kNewtonGeneralForm: {
      const HessianOperator hessian = GeneralFormHessian{curve, config.metric, kernels};
      return solve_hessian(hessian, gradient, config.metric).scaled(-1.0);
    }
  }
  throw InvalidInput("unknown method");
}

double line_search_exact(const DiscreteCurve& curve, const VolumeFunctional& f, const NormalField& direction,
                         double bracket_max, double tolerance) {
  auto phi = [&](double t) {
    try {
      const double value = objective_excess(retract(curve, direction, t), f);
      return std::isfinite(value) ? value : std::numeric_limits<double>::infinity();
    } catch (const ShapeDegenerate&) {
      return std::numeric_limits<double>::infinity();
    } catch (const NotStarShaped&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const double phi0 = objective_excess(curve, f);

  // First trial step with a decrease; shrink toward the tolerance if needed.
  double b = std::min(kInitialTrialStep, bracket_max);
  double fb = phi(b);
  while (!(fb < phi0)) {
    b *= 0.5;
    if (b < tolerance) throw LineSearchFailed("no decrease along the search direction");
    fb = phi(b);
  }

  // Expand by doubling; a degenerate or worse trial closes the bracket.
  double a = 0.0;
  double c = b;
  while (true) {
    const double trial = std::min(2.0 * b, bracket_max);
    if (trial <= b) {
      c = b;
      break;
    }
    const double ft = phi(trial);
    if (ft < fb) {
      a = b;
      b = trial;
      fb = ft;
      continue;
    }
    c = trial;
    break;
  }
  if (c == b) return b;  // minimum pinned at bracket_max

  // Golden section on [a, c].
  double x1 = c - kInvGolden * (c - a);
  double x2 = a + kInvGolden * (c - a);
  double f1 = phi(x1);
  double f2 = phi(x2);
  while (c - a > tolerance) {
    if (f1 < f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - kInvGolden * (c - a);
      f1 = phi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvGolden * (c - a);
      f2 = phi(x2);
    }
  }
  double best = f1 < f2 ? x1 : x2;
  double f_best = std::min(f1, f2);
  if (fb < f_best) {
    best = b;
    f_best = fb;
  }
  if (!(f_best < phi0)) throw LineSearchFailed("golden section found no decrease");
  return best;
}

std::vector<IterationRecord> optimize(const DiscreteCurve& start, const VolumeFunctional& f,
                                      const SolverConfig& config, const std::optional<DiscreteCurve>& reference) {
  config.validate();
  std::vector<IterationRecord> records;
  DiscreteCurve current = start;

  for (int k = 0;; ++k) {
    IterationRecord record;
    record.index = k;
    record.nodes.assign(current.nodes().begin(), current.nodes().end());
    try {
      record.objective = evaluate(current, f);
      record.distance = reference_distance(current, f, reference);
      const NormalField direction = step_direction(current, f, config);
      record.step_norm = norm(current, config.metric, direction);

      const bool converged = record.distance ? *record.distance < config.stop_distance
                                             : record.step_norm < config.stop_distance;
      if (converged || k >= config.max_iterations) {
        records.push_back(std::move(record));
        break;
      }

      double t = 1.0;
      if (const auto* exact = std::get_if<ExactLineSearch>(&config.line_search)) {
        t = line_search_exact(current, f, direction, exact->bracket_max, exact->tolerance);
      } else if (const auto* fixed = std::get_if<FixedStep>(&config.line_search)) {
        t = fixed->t;
      }
      record.step_scale = t;
      DiscreteCurve next = retract(current, direction, t);
      records.push_back(std::move(record));
      current = config.resample ? resample_uniform(next) : std::move(next);
    } catch (const SolverError&) {
      throw;
    } catch (const Error& e) {
      if (records.empty() || records.back().index != k) records.push_back(std::move(record));
      throw SolverError(e.what(), std::move(records));
    }
  }

  for (std::size_t k = 0; k + 1 < records.size(); ++k) {
    if (records[k].step_norm > 0.0) {
      records[k].contraction_ratio = records[k + 1].step_norm / records[k].step_norm;
    }
    if (records[k].distance && records[k + 1].distance && *records[k].distance > 0.0) {
      const double d = *records[k].distance;
      records[k].quadratic_ratio = *records[k + 1].distance / (d * d);
    }
  }
  return records;
}

ConvergenceSummary convergence_diagnostics(const std::vector<IterationRecord>& records) {
  if (records.size() < 3) throw InsufficientData("convergence diagnostics need at least three records");
  ConvergenceSummary summary;

  std::vector<double> ratios;
  double omega = 0.0;
  for (std::size_t k = 0; k + 1 < records.size(); ++k) {
    const double s = records[k].step_norm;
    if (!(s > 0.0)) continue;
    ratios.push_back(records[k + 1].step_norm / s);
    omega = std::max(omega, 2.0 * records[k + 1].step_norm / (s * s));
  }
  if (ratios.empty()) throw InsufficientData("no nonzero step norms");
  const std::size_t tail = std::min<std::size_t>(5, ratios.size());
  summary.geometric_factor = median(std::vector<double>(ratios.end() - static_cast<std::ptrdiff_t>(tail), ratios.end()));
  summary.omega_estimate = omega;

  std::vector<double> quadratic;
  for (std::size_t k = 0; k + 1 < records.size(); ++k) {
    const auto& d0 = records[k].distance;
    const auto& d1 = records[k + 1].distance;
    if (d0 && d1 && *d0 > 0.0) quadratic.push_back(*d1 / (*d0 * *d0));
  }
  if (!quadratic.empty()) summary.quadratic_coefficient = median(std::move(quadratic));
  return summary;
}

}  // namespace shapeopt
