#include "shapeopt/functional.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "shapeopt/errors.hpp"

namespace shapeopt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kWindingTolerance = 1e-8;

double wrap_angle(double d) {
  // Reduce into (-pi, pi].
  while (d <= -kPi) d += 2.0 * kPi;
  while (d > kPi) d -= 2.0 * kPi;
  return d;
}

struct PolarSample {
  double dtheta;  // wrapped angle increment to the next node
  double q;       // |c^mu_i|^2 - 1
  double radius;  // |c^mu_i|
};

// Wrapped atan2 increments and stretched radii. Throws NotStarShaped unless
// the increments sum to 2*pi.
std::vector<PolarSample> polar_samples(const DiscreteCurve& curve, double mu, Quadrature angles) {
  if (angles != Quadrature::kPolarNodeAngle && angles != Quadrature::kPolarStretchedAngle) {
    throw InvalidInput("polar evaluation needs a polar angle convention");
  }
  const std::size_t n = curve.size();
  std::vector<double> theta(n);
  std::vector<PolarSample> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& x = curve.node(i);
    const Vec2 y(x.x(), mu * x.y());
    const Vec2& angle_point = angles == Quadrature::kPolarNodeAngle ? x : y;
    theta[i] = std::atan2(angle_point.y(), angle_point.x());
    samples[i].radius = y.norm();
    samples[i].q = std::fma(y.x(), y.x(), std::fma(y.y(), y.y(), -1.0));
  }
  long double winding = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    samples[i].dtheta = wrap_angle(theta[curve.next(i)] - theta[i]);
    winding += samples[i].dtheta;
  }
  if (std::abs(static_cast<double>(winding) - 2.0 * kPi) > kWindingTolerance) {
    throw NotStarShaped("polar angle increments sum to " + std::to_string(static_cast<double>(winding)) +
                        " instead of 2*pi; the curve does not wind once around the origin");
  }
  return samples;
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

VolumeFunctional VolumeFunctional::quadratic_mso(double mu, Quadrature quadrature) {
  if (!std::isfinite(mu) || mu < 1.0) throw InvalidInput("mu must be finite and >= 1");
  VolumeFunctional f;
  const double mu2 = mu * mu;
  f.psi = [mu2](const Vec2& x) { return x.x() * x.x() + mu2 * x.y() * x.y() - 1.0; };
  f.grad_psi = [mu2](const Vec2& x) { return Vec2(2.0 * x.x(), 2.0 * mu2 * x.y()); };
  f.family = FamilyTag::kQuadraticMso;
  f.mu = mu;
  f.quadrature = quadrature;
  return f;
}

VolumeFunctional VolumeFunctional::custom(std::function<double(const Vec2&)> psi,
                                          std::function<Vec2(const Vec2&)> grad_psi) {
  VolumeFunctional f;
  f.psi = std::move(psi);
  f.grad_psi = std::move(grad_psi);
  f.family = FamilyTag::kCustom;
  f.quadrature = Quadrature::kFan;
  return f;
}

double mso_excess(const DiscreteCurve& curve, double mu, Quadrature angles) {
  // r^4/4 - r^2/2 = -1/4 + (r^2 - 1)^2 / 4 and the increments sum to 2*pi,
  // so the trapezoid sum splits into -pi/(2 mu) plus this nonnegative part.
  const std::vector<PolarSample> samples = polar_samples(curve, mu, angles);
  long double sum = 0.0L;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const PolarSample& a = samples[i];
    const PolarSample& b = samples[curve.next(i)];
    sum += static_cast<long double>(a.dtheta) * (static_cast<long double>(a.q) * a.q + static_cast<long double>(b.q) * b.q);
  }
  return static_cast<double>(sum / (8.0L * mu));
}

double mso_optimal_value(double mu) { return -kPi / (2.0 * mu); }

double evaluate_mso(const DiscreteCurve& curve, double mu, Quadrature angles) {
  return mso_optimal_value(mu) + mso_excess(curve, mu, angles);
}

double evaluate_general(const DiscreteCurve& curve, const VolumeFunctional& f) {
  const std::size_t n = curve.size();
  Vec2 center = Vec2::Zero();
  for (const Vec2& p : curve.nodes()) center += p;
  center /= static_cast<double>(n);

  long double sum = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = curve.node(i);
    const Vec2& q = curve.node(curve.next(i));
    const double area = 0.5 * cross(p - center, q - center);
    const double mid = f.psi(0.5 * (p + q)) + f.psi(0.5 * (p + center)) + f.psi(0.5 * (q + center));
    sum += static_cast<long double>(area) * mid / 3.0L;
  }
  const double value = static_cast<double>(sum);
  if (!std::isfinite(value)) throw ShapeDegenerate("area integral is not finite");
  return value;
}

double evaluate(const DiscreteCurve& curve, const VolumeFunctional& f) {
  switch (f.quadrature) {
    case Quadrature::kPolarNodeAngle:
    case Quadrature::kPolarStretchedAngle:
      if (f.family != FamilyTag::kQuadraticMso) {
        throw InvalidInput("polar quadrature is only available for the quadratic family");
      }
      return evaluate_mso(curve, f.mu, f.quadrature);
    case Quadrature::kFan:
      return evaluate_general(curve, f);
  }
  return evaluate_general(curve, f);
}

double objective_excess(const DiscreteCurve& curve, const VolumeFunctional& f) {
  if (f.quadrature == Quadrature::kFan) return evaluate_general(curve, f);
  if (f.family != FamilyTag::kQuadraticMso) {
    throw InvalidInput("polar quadrature is only available for the quadratic family");
  }
  return mso_excess(curve, f.mu, f.quadrature);
}

BoundaryKernel boundary_kernel(const DiscreteCurve& curve, const VolumeFunctional& f) {
  const std::size_t n = curve.size();
  const CurveGeometry& geo = curve.geometry();
  std::vector<double> g(n);
  std::vector<double> dn(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = f.psi(curve.node(i));
    dn[i] = f.grad_psi(curve.node(i)).dot(geo.normal[i]);
  }
  return BoundaryKernel{NormalField(std::move(g)), NormalField(std::move(dn))};
}

double distance_bar(const DiscreteCurve& curve, double mu, Quadrature angles) {
  const std::vector<PolarSample> samples = polar_samples(curve, mu, angles);
  // |r - 1| = |r^2 - 1| / (r + 1) avoids cancellation near the unit circle.
  auto gap = [](const PolarSample& s) { return std::abs(s.q) / (s.radius + 1.0); };
  long double sum = 0.0L;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    sum += static_cast<long double>(samples[i].dtheta) * (gap(samples[i]) + gap(samples[curve.next(i)]));
  }
  return static_cast<double>(sum / (2.0L * mu));
}

double distance_tilde(const DiscreteCurve& curve, const DiscreteCurve& reference, double search_window) {
  const std::size_t m = reference.size();
  const std::size_t n = curve.size();
  const CurveGeometry& geo = reference.geometry();
  long double sum = 0.0L;
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& origin = reference.node(i);
    const Vec2& dir = geo.normal[i];
    std::optional<double> best;
    for (std::size_t j = 0; j < n; ++j) {
      const Vec2& a = curve.node(j);
      const Vec2& b = curve.node(curve.next(j));
      // origin + s * dir == a + u * (b - a)
      const Vec2 edge = b - a;
      const double denom = cross(dir, edge);
      if (denom == 0.0) continue;
      const Vec2 rel = a - origin;
      const double s = cross(rel, edge) / denom;
      const double u = cross(rel, dir) / denom;
      // Slack so a ray through a shared vertex is not lost to rounding.
      if (u < -1e-12 || u > 1.0 + 1e-12) continue;
      if (!best || std::abs(s) < std::abs(*best)) best = s;
    }
    if (!best || std::abs(*best) > search_window) {
      throw ProjectionFailed("normal ray at reference node " + std::to_string(i) +
                             " does not meet the curve within the search window");
    }
    sum += std::abs(*best) * static_cast<long double>(geo.weights[i]);
  }
  return static_cast<double>(sum);
}

}  // namespace shapeopt
