#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "shapeopt/calculus.hpp"
#include "shapeopt/errors.hpp"
#include "shapeopt/harness.hpp"
#include "shapeopt/metric.hpp"

namespace shapeopt {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

PropertyCheck below(std::string name, double measured, double bound) {
  return {std::move(name), measured, bound, "<", measured < bound};
}

PropertyCheck at_least(std::string name, double measured, double bound) {
  return {std::move(name), measured, bound, ">=", measured >= bound};
}

PropertyCheck within(std::string name, double measured, double lo, double hi) {
  // The bound column holds the half-width around the interval midpoint.
  const double mid = 0.5 * (lo + hi);
  return {std::move(name), measured, 0.5 * (hi - lo), "within " + std::to_string(mid) + " +/-",
          measured >= lo && measured <= hi};
}

double ellipse_speed(double s, double mu) {
  const double a = std::sin(s);
  const double b = std::cos(s) / mu;
  return std::sqrt(a * a + b * b);
}

double ellipse_perimeter(double mu) {
  // The trapezoid rule converges geometrically for periodic integrands.
  constexpr int kSamples = 20000;
  double sum = 0.0;
  for (int i = 0; i < kSamples; ++i) sum += ellipse_speed(2.0 * kPi * i / kSamples, mu);
  return sum * 2.0 * kPi / kSamples;
}

double curvature_error(std::size_t n, double mu) {
  const DiscreteCurve c = reference_ellipse(n, mu);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    const double exact = (1.0 / mu) / std::pow(ellipse_speed(s, mu), 3);
    worst = std::max(worst, std::abs(c.geometry().curvature[i] - exact));
  }
  return worst;
}

double perimeter_error(std::size_t n, double mu) {
  return std::abs(perimeter(reference_ellipse(n, mu).nodes()) - ellipse_perimeter(mu));
}

double optimum_value_error(std::size_t n, double mu) {
  const VolumeFunctional fan = VolumeFunctional::custom(VolumeFunctional::quadratic_mso(mu).psi,
                                                        VolumeFunctional::quadratic_mso(mu).grad_psi);
  return std::abs(evaluate_general(reference_ellipse(n, mu), fan) - mso_optimal_value(mu));
}

// A volume functional whose integrand does not vanish on typical test
// curves, so every Hessian term is exercised.
VolumeFunctional wavy_functional() {
  return VolumeFunctional::custom(
      [](const Vec2& x) { return x.x() * x.x() + 2.0 * x.y() * x.y() + 0.3 * std::sin(2.0 * x.x()) - 0.5; },
      [](const Vec2& x) { return Vec2(2.0 * x.x() + 0.6 * std::cos(2.0 * x.x()), 4.0 * x.y()); });
}

}  // namespace

DiscreteCurve random_star_curve(std::mt19937_64& rng, std::size_t nodes) {
  double a[5] = {};
  double b[5] = {};
  for (int k = 2; k <= 4; ++k) {
    a[k] = uniform(rng, -0.08, 0.08);
    b[k] = uniform(rng, -0.08, 0.08);
  }
  const double sx = uniform(rng, 0.35, 0.9);
  const double sy = uniform(rng, 0.35, 0.9);
  const Vec2 shift(uniform(rng, -0.05, 0.05), uniform(rng, -0.05, 0.05));
  std::vector<Vec2> pts(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double s = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(nodes);
    double r = 1.0;
    for (int k = 2; k <= 4; ++k) r += a[k] * std::cos(k * s) + b[k] * std::sin(k * s);
    pts[i] = shift + Vec2(sx * r * std::cos(s), sy * r * std::sin(s));
  }
  return DiscreteCurve(std::move(pts));
}

NormalField random_field(std::mt19937_64& rng, std::size_t nodes) {
  std::vector<double> v(nodes);
  for (double& x : v) x = uniform(rng, -1.0, 1.0);
  return NormalField(std::move(v));
}

NormalField smooth_random_field(std::mt19937_64& rng, std::size_t nodes) {
  double a[4] = {};
  double b[4] = {};
  for (int k = 1; k <= 3; ++k) {
    a[k] = uniform(rng, -1.0, 1.0);
    b[k] = uniform(rng, -1.0, 1.0);
  }
  std::vector<double> v(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double s = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(nodes);
    double wave = 0.0;
    for (int k = 1; k <= 3; ++k) wave += a[k] * std::cos(k * s) + b[k] * std::sin(k * s);
    v[i] = 1.0 + 0.15 * wave;
  }
  return NormalField(std::move(v));
}

PropertyReport run_property_suite(const ExperimentSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  PropertyReport report;
  const double mu = spec.mu;

  {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const DiscreteCurve c = random_star_curve(rng, spec.nodes);
      const CurveGeometry& g = c.geometry();
      for (std::size_t i = 0; i < c.size(); ++i) {
        worst = std::max({worst, std::abs(g.tangent[i].dot(g.normal[i])), std::abs(g.normal[i].norm() - 1.0),
                          std::abs(g.tangent[i].norm() - 1.0)});
      }
    }
    report.checks.push_back(below("frame_orthonormality", worst, 1e-12));
  }

  report.checks.push_back(at_least("curvature_order", curvature_error(100, mu) / curvature_error(200, mu), 3.5));
  report.checks.push_back(at_least("perimeter_order", perimeter_error(100, mu) / perimeter_error(200, mu), 3.5));
  report.checks.push_back(
      at_least("optimum_value_order", optimum_value_error(100, mu) / optimum_value_error(200, mu), 3.5));

  {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const DiscreteCurve c = random_star_curve(rng, spec.nodes);
      const NormalField d2 = tangential_second_derivative(c, NormalField::constant(c.size(), 3.7));
      for (std::size_t i = 0; i < c.size(); ++i) worst = std::max(worst, std::abs(d2[i]));
    }
    report.checks.push_back(below("second_derivative_kills_constants", worst, 1e-9));
  }

  {
    double asym = 0.0;
    double min_ratio = std::numeric_limits<double>::infinity();
    double monotone_violation = 0.0;
    double riesz = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const DiscreteCurve c = random_star_curve(rng, spec.nodes);
      const MetricParams m = MetricParams::make(uniform(rng, 0.0, 2.0));
      for (int pair = 0; pair < 10; ++pair) {
        const NormalField h = random_field(rng, c.size());
        const NormalField k = random_field(rng, c.size());
        const double hk = inner(c, m, h, k);
        const double scale = norm(c, m, h) * norm(c, m, k);
        asym = std::max(asym, std::abs(hk - inner(c, m, k, h)) / scale);
        min_ratio = std::min(min_ratio, inner(c, m, h, h) / boundary_pairing(c, h, h));
        const double lower = inner(c, MetricParams{m.a * 0.5}, h, h);
        monotone_violation = std::max(monotone_violation, lower - inner(c, m, h, h));
        const double lhs = inner(c, m, riesz_gradient(c, m, k), h);
        const double rhs = boundary_pairing(c, k, h);
        riesz = std::max(riesz, std::abs(lhs - rhs) / std::max(1e-300, boundary_pairing(c, k, k) + boundary_pairing(c, h, h)));
      }
    }
    report.checks.push_back(below("metric_symmetry", asym, 1e-14));
    report.checks.push_back(at_least("metric_positive_definite", min_ratio, 1.0 - 1e-12));
    report.checks.push_back(below("metric_monotone_in_a", monotone_violation, 1e-12));
    report.checks.push_back(below("riesz_identity", riesz, 1e-13));
  }

  {
    // 10 random curves with 10 field pairs each.
    const VolumeFunctional f = wavy_functional();
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const DiscreteCurve c = random_star_curve(rng, spec.nodes);
      const MetricParams m = MetricParams::make(uniform(rng, 0.0, 1.0));
      const BoundaryKernel kernels = boundary_kernel(c, f);
      for (int pair = 0; pair < 10; ++pair) {
        const NormalField a = random_field(rng, c.size());
        const NormalField b = random_field(rng, c.size());
        const double ab = riemannian_hessian_form(c, m, kernels, a, b);
        const double ba = riemannian_hessian_form(c, m, kernels, b, a);
        const double magnitude = std::max({std::abs(ab), std::abs(ba), 1e-300});
        worst = std::max(worst, std::abs(ab - ba) / magnitude);
      }
    }
    report.checks.push_back(below("hessian_symmetry", worst, 1e-12));
  }

  {
    const DiscreteCurve ellipse = reference_ellipse(spec.nodes, mu);
    const VolumeFunctional f = VolumeFunctional::quadratic_mso(mu);
    const BoundaryKernel kernels = boundary_kernel(ellipse, f);
    const MultiplicationHessian nu = hessian_at_solution(ellipse, mu);
    const MetricParams m = MetricParams::make(spec.metric_a);
    double worst = 0.0;
    for (int pair = 0; pair < 50; ++pair) {
      const NormalField a = random_field(rng, ellipse.size());
      const NormalField b = random_field(rng, ellipse.size());
      const double form = riemannian_hessian_form(ellipse, m, kernels, a, b);
      double mult = 0.0;
      double magnitude = 0.0;
      for (std::size_t i = 0; i < ellipse.size(); ++i) {
        const double w = ellipse.geometry().weights[i];
        mult += nu.nu[i] * a[i] * b[i] * w;
        magnitude += std::abs(nu.nu[i] * a[i] * b[i]) * w;
      }
      worst = std::max(worst, std::abs(form - mult) / magnitude);
    }
    report.checks.push_back(below("stationary_consistency", worst, 1e-6));
    const auto values = nu.nu.values();
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    report.checks.push_back(at_least("hessian_coercivity", *lo, 1.9));
    report.checks.push_back(within("hessian_upper_range", *hi, 2.0 * mu - 1e-3, 2.0 * mu + 1e-3));
  }

  {
    // Central differences under the retraction against sum g alpha w.
    constexpr double kEps = 1e-3;
    const VolumeFunctional f = wavy_functional();
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const DiscreteCurve c = random_star_curve(rng, 200);
      const NormalField h = smooth_random_field(rng, c.size());
      const double fd = (evaluate(retract(c, h, kEps), f) - evaluate(retract(c, h, -kEps), f)) / (2.0 * kEps);
      const NormalField g = boundary_kernel(c, f).g;
      const double exact = boundary_pairing(c, g, h);
      // Scale by the integral of |g alpha| so sign changes of psi along the
      // curve do not shrink the denominator.
      double magnitude = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) magnitude += std::abs(g[i] * h[i]) * c.geometry().weights[i];
      worst = std::max(worst, std::abs(fd - exact) / magnitude);
    }
    report.checks.push_back(below("gradient_fd", worst, 1e-2));
  }

  {
    // At a stationary shape the retraction's own second-order term vanishes,
    // so the remainder is cubic.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int trial = 0; trial < 10; ++trial) {
      const double m = uniform(rng, 1.0, 3.0);
      const std::size_t n = 100 + static_cast<std::size_t>(uniform(rng, 0.0, 100.0));
      const DiscreteCurve c = reference_ellipse(n, m);
      const VolumeFunctional f = VolumeFunctional::quadratic_mso(m, Quadrature::kPolarStretchedAngle);
      const NormalField h = smooth_random_field(rng, n);
      const double slope = log_log_slope(taylor_remainder_probe(f, c, MetricParams{}, h, {0.04, 0.02, 0.01}));
      lo = std::min(lo, slope);
      hi = std::max(hi, slope);
    }
    report.checks.push_back(within("taylor_cubic_min_slope", lo, 2.5, 3.5));
    report.checks.push_back(within("taylor_cubic_max_slope", hi, 2.5, 3.5));
  }

  {
    // The two quadratures agree to within the fan rule's O(h^2) error.
    const DiscreteCurve c = initial_shape(4096);
    const VolumeFunctional fan = VolumeFunctional::custom(VolumeFunctional::quadratic_mso(mu).psi,
                                                          VolumeFunctional::quadratic_mso(mu).grad_psi);
    const double polar = evaluate_mso(c, mu, Quadrature::kPolarStretchedAngle);
    report.checks.push_back(
        below("fan_polar_agreement", std::abs(evaluate_general(c, fan) - polar) / std::abs(polar), 1e-6));
  }

  return report;
}

}  // namespace shapeopt
