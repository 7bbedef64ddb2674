#include "shapeopt/metric.hpp"

#include <cmath>

#include "shapeopt/errors.hpp"

namespace shapeopt {

MetricParams MetricParams::make(double a) {
  if (!std::isfinite(a) || a < 0.0) throw InvalidInput("metric parameter A must be finite and >= 0");
  return MetricParams{a};
}

double inner(const DiscreteCurve& curve, MetricParams metric, const NormalField& h, const NormalField& k) {
  require_matching(curve, h);
  require_matching(curve, k);
  const CurveGeometry& geo = curve.geometry();
  double sum = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double kappa = geo.curvature[i];
    // h_i * k_i first so swapping the arguments is bit-identical.
    sum += (1.0 + metric.a * kappa * kappa) * (h[i] * k[i]) * geo.weights[i];
  }
  return sum;
}

double norm(const DiscreteCurve& curve, MetricParams metric, const NormalField& h) {
  return std::sqrt(inner(curve, metric, h, h));
}

NormalField riesz_gradient(const DiscreteCurve& curve, MetricParams metric, const NormalField& g) {
  require_matching(curve, g);
  const CurveGeometry& geo = curve.geometry();
  std::vector<double> out(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double kappa = geo.curvature[i];
    out[i] = g[i] / (1.0 + metric.a * kappa * kappa);
  }
  return NormalField(std::move(out));
}

double boundary_pairing(const DiscreteCurve& curve, const NormalField& u, const NormalField& v) {
  require_matching(curve, u);
  require_matching(curve, v);
  const CurveGeometry& geo = curve.geometry();
  double sum = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) sum += (u[i] * v[i]) * geo.weights[i];
  return sum;
}

}  // namespace shapeopt
