#pragma once

#include "shapeopt/curve.hpp"

namespace shapeopt {

/// Weight A >= 0 of the curvature term in the metric
/// G^A(h, k) = integral (1 + A kappa^2) alpha beta ds.
struct MetricParams {
  double a = 0.0;

  /// Throws InvalidInput for negative or non-finite A.
  static MetricParams make(double a);
};

double inner(const DiscreteCurve& curve, MetricParams metric, const NormalField& h, const NormalField& k);
double norm(const DiscreteCurve& curve, MetricParams metric, const NormalField& h);

/// Riesz representative of the shape derivative with boundary kernel `g`:
/// grad_i = g_i / (1 + A kappa_i^2). Satisfies
/// inner(curve, metric, grad, h) == sum_i g_i h_i w_i for every h.
NormalField riesz_gradient(const DiscreteCurve& curve, MetricParams metric, const NormalField& g);

/// Plain quadrature sum_i u_i v_i w_i (the L2 boundary pairing).
double boundary_pairing(const DiscreteCurve& curve, const NormalField& u, const NormalField& v);

}  // namespace shapeopt
