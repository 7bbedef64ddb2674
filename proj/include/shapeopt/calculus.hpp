#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "shapeopt/curve.hpp"
#include "shapeopt/functional.hpp"
#include "shapeopt/metric.hpp"

namespace shapeopt {

/// Riemannian connection applied to normal fields h = alpha n, k = beta n:
///   (d beta/dn) alpha + 1/2 (kappa + 2 A kappa^3 / (1 + A kappa^2)) alpha beta
///     + A kappa (alpha beta)_tt
/// `dbeta_dn` is the normal derivative of the chosen extension of beta.
NormalField covariant_derivative(const DiscreteCurve& curve, MetricParams metric, const NormalField& alpha,
                                 const NormalField& beta, const NormalField& dbeta_dn);

/// Repeated shape derivative of a volume functional,
///   integral (dpsi/dn + kappa psi) alpha beta + psi <DW V, n> ds,
/// where `dw_normal` holds <DW V, n> for the extensions in use. Not symmetric
/// in (alpha, beta) in general.
double standard_shape_hessian_form(const DiscreteCurve& curve, const BoundaryKernel& kernels,
                                   const NormalField& alpha, const NormalField& beta,
                                   const NormalField& dw_normal);

/// Extension-free Riemannian shape Hessian of a volume functional,
///   integral (dpsi/dn + kappa psi / 2 - A kappa^3 psi / (1 + A kappa^2)) alpha beta
///     - psi A kappa (alpha beta)_tt ds.
/// Depends on alpha and beta only through their pointwise product, so it is
/// symmetric bit-for-bit.
double riemannian_hessian_form(const DiscreteCurve& curve, MetricParams metric, const BoundaryKernel& kernels,
                               const NormalField& alpha, const NormalField& beta);

/// Hessian acting pointwise: (H v)_i = nu_i v_i.
struct MultiplicationHessian {
  NormalField nu;
};

/// Hessian given by the full Riemannian bilinear form on a curve.
struct GeneralFormHessian {
  DiscreteCurve curve;
  MetricParams metric;
  BoundaryKernel kernels;
};

using HessianOperator = std::variant<MultiplicationHessian, GeneralFormHessian>;

/// nu_i = 2 (x1 n1 + mu^2 x2 n2) at each node of `curve`, using its own
/// normals. Equals the Riemannian Hessian of the quadratic family at the
/// optimal ellipse.
MultiplicationHessian hessian_at_solution(const DiscreteCurve& curve, double mu);

GeneralFormHessian general_form_hessian(const DiscreteCurve& curve, MetricParams metric,
                                        const VolumeFunctional& f);

/// Symmetric matrix M_ij = riemannian_hessian_form(e_i, e_j) over nodal
/// indicator fields. Also reports the largest |M_ij - M_ji| seen before
/// symmetrization.
struct AssembledHessian {
  Eigen::MatrixXd matrix;
  double asymmetry = 0.0;
};
AssembledHessian assemble_hessian(const GeneralFormHessian& hessian);

/// Solves H delta = rhs. For the general form the equation is taken weakly
/// against nodal fields with G^A mass weights on the right:
///   form(delta, e_j) = (1 + A kappa_j^2) rhs_j w_j.
/// Throws SingularHessian when the operator is not invertible.
NormalField solve_hessian(const HessianOperator& hessian, const NormalField& rhs, MetricParams metric);

struct TaylorSample {
  double t = 0.0;
  double remainder = 0.0;
};

/// |f(r(t h)) - f - t G(grad f, h) - t^2/2 Hess(h, h)| for each t, with the
/// retraction r(t h) = nodes + t alpha n. Throws ShapeDegenerate if a probe
/// leaves the simple-curve set.
std::vector<TaylorSample> taylor_remainder_probe(const VolumeFunctional& f, const DiscreteCurve& curve,
                                                 MetricParams metric, const NormalField& h,
                                                 const std::vector<double>& t_values);

/// Least-squares slope of log(remainder) against log(t), skipping t = 0.
double log_log_slope(const std::vector<TaylorSample>& samples);

}  // namespace shapeopt
