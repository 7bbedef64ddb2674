#pragma once

#include <functional>

#include "shapeopt/curve.hpp"

namespace shapeopt {

/// Which discrete rule computes f(Omega) = integral_Omega psi dx.
enum class Quadrature {
  // Polar trapezoid rule after the mu-stretch, with angle increments taken
  // from atan2 of the unstretched nodes. Reproduces the published experiment
  // values; exact on the optimal ellipse.
  kPolarNodeAngle,
  // Polar trapezoid rule with angles of the stretched nodes; a consistent
  // quadrature of the polar integral for any star-shaped curve.
  kPolarStretchedAngle,
  // Fan triangulation from the vertex centroid with the edge-midpoint rule
  // (exact for quadratic psi on the polygon).
  kFan,
};

enum class FamilyTag { kQuadraticMso, kCustom };

/// Volume objective f(Omega) = integral over Omega of psi.
struct VolumeFunctional {
  std::function<double(const Vec2&)> psi;
  std::function<Vec2(const Vec2&)> grad_psi;
  FamilyTag family = FamilyTag::kCustom;
  double mu = 1.0;  // meaningful for kQuadraticMso only
  Quadrature quadrature = Quadrature::kFan;

  /// psi(x) = x1^2 + mu^2 x2^2 - 1. Throws InvalidInput for mu < 1.
  static VolumeFunctional quadratic_mso(double mu, Quadrature quadrature = Quadrature::kPolarNodeAngle);
  static VolumeFunctional custom(std::function<double(const Vec2&)> psi,
                                 std::function<Vec2(const Vec2&)> grad_psi);
};

/// Boundary data of the shape derivative: g_i = psi(x_i) and
/// dpsi_dn_i = <grad psi(x_i), n_i>.
struct BoundaryKernel {
  NormalField g;
  NormalField dpsi_dn;
};

/// Polar trapezoid evaluation of the quadratic family. Throws NotStarShaped
/// unless the wrapped angle increments sum to 2*pi.
double evaluate_mso(const DiscreteCurve& curve, double mu,
                    Quadrature angles = Quadrature::kPolarNodeAngle);

/// evaluate_mso minus its curve-independent part -pi/(2 mu); nonnegative and
/// computed without cancellation, so it resolves differences far below the
/// rounding level of f itself.
double mso_excess(const DiscreteCurve& curve, double mu, Quadrature angles = Quadrature::kPolarNodeAngle);

/// Optimal value -pi/(2 mu) of the quadratic family.
double mso_optimal_value(double mu);

/// Generic area integral via fan triangulation.
double evaluate_general(const DiscreteCurve& curve, const VolumeFunctional& f);

/// Dispatches on `f.quadrature`.
double evaluate(const DiscreteCurve& curve, const VolumeFunctional& f);

/// f(curve) minus a constant depending only on `f` (zero for the fan rule).
/// Line searches and Taylor probes compare these values.
double objective_excess(const DiscreteCurve& curve, const VolumeFunctional& f);

BoundaryKernel boundary_kernel(const DiscreteCurve& curve, const VolumeFunctional& f);

/// Radial discrepancy of the mu-stretched curve from the unit circle,
/// (1/mu) integral | |c^mu| - 1 | dtheta, by the polar trapezoid rule.
double distance_bar(const DiscreteCurve& curve, double mu,
                    Quadrature angles = Quadrature::kPolarNodeAngle);

/// integral over the reference of |alpha| ds, where alpha_i is the signed
/// distance along the reference normal ray at node i to the nearest crossing
/// of `curve`. Throws ProjectionFailed when a ray finds no crossing within
/// `search_window`.
double distance_tilde(const DiscreteCurve& curve, const DiscreteCurve& reference,
                      double search_window = 1.0);

}  // namespace shapeopt
