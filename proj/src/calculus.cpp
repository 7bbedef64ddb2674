#include "shapeopt/calculus.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "shapeopt/errors.hpp"
#include "shapeopt/solver.hpp"

namespace shapeopt {

namespace {

constexpr double kMinMultiplier = 1e-12;
constexpr double kMaxAssemblyAsymmetry = 1e-12;

NormalField pointwise_product(const NormalField& a, const NormalField& b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return NormalField(std::move(out));
}

// Evaluates the Riemannian form given the product field p = alpha * beta.
double riemannian_form_of_product(const DiscreteCurve& curve, MetricParams metric, const BoundaryKernel& kernels,
                                  const NormalField& product) {
  const CurveGeometry& geo = curve.geometry();
  const double a = metric.a;
  NormalField product_tt;
  if (a != 0.0) product_tt = tangential_second_derivative(curve, product);
  double sum = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double kappa = geo.curvature[i];
    const double psi = kernels.g[i];
    const double coef = kernels.dpsi_dn[i] + 0.5 * kappa * psi - a * kappa * kappa * kappa * psi / (1.0 + a * kappa * kappa);
    double term = coef * product[i];
    if (a != 0.0) term -= psi * a * kappa * product_tt[i];
    sum += term * geo.weights[i];
  }
  return sum;
}

}  // namespace

NormalField covariant_derivative(const DiscreteCurve& curve, MetricParams metric, const NormalField& alpha,
                                 const NormalField& beta, const NormalField& dbeta_dn) {
  require_matching(curve, alpha);
  require_matching(curve, beta);
  require_matching(curve, dbeta_dn);
  const CurveGeometry& geo = curve.geometry();
  const double a = metric.a;
  const NormalField product = pointwise_product(alpha, beta);
  const NormalField product_tt = tangential_second_derivative(curve, product);
  std::vector<double> out(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double kappa = geo.curvature[i];
    const double k2 = kappa * kappa;
    out[i] = dbeta_dn[i] * alpha[i] + 0.5 * (kappa + 2.0 * a * k2 * kappa / (1.0 + a * k2)) * product[i] +
             a * kappa * product_tt[i];
  }
  return NormalField(std::move(out));
}

double standard_shape_hessian_form(const DiscreteCurve& curve, const BoundaryKernel& kernels,
                                   const NormalField& alpha, const NormalField& beta,
                                   const NormalField& dw_normal) {
  require_matching(curve, kernels.g);
  require_matching(curve, kernels.dpsi_dn);
  require_matching(curve, alpha);
  require_matching(curve, beta);
  require_matching(curve, dw_normal);
  const CurveGeometry& geo = curve.geometry();
  double sum = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double psi = kernels.g[i];
    const double density = (kernels.dpsi_dn[i] + geo.curvature[i] * psi) * (alpha[i] * beta[i]) + psi * dw_normal[i];
    sum += density * geo.weights[i];
  }
  return sum;
}

double riemannian_hessian_form(const DiscreteCurve& curve, MetricParams metric, const BoundaryKernel& kernels,
                               const NormalField& alpha, const NormalField& beta) {
  require_matching(curve, kernels.g);
  require_matching(curve, kernels.dpsi_dn);
  require_matching(curve, alpha);
  require_matching(curve, beta);
  return riemannian_form_of_product(curve, metric, kernels, pointwise_product(alpha, beta));
}

MultiplicationHessian hessian_at_solution(const DiscreteCurve& curve, double mu) {
  const CurveGeometry& geo = curve.geometry();
  const double mu2 = mu * mu;
  std::vector<double> nu(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Vec2& s = curve.node(i);
    const Vec2& n = geo.normal[i];
    nu[i] = 2.0 * (s.x() * n.x() + mu2 * s.y() * n.y());
  }
  return MultiplicationHessian{NormalField(std::move(nu))};
}

GeneralFormHessian general_form_hessian(const DiscreteCurve& curve, MetricParams metric,
                                        const VolumeFunctional& f) {
  return GeneralFormHessian{curve, metric, boundary_kernel(curve, f)};
}

AssembledHessian assemble_hessian(const GeneralFormHessian& hessian) {
  const std::size_t n = hessian.curve.size();
  AssembledHessian out;
  out.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> ei(n, 0.0);
  std::vector<double> ej(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    ei.assign(n, 0.0);
    ei[i] = 1.0;
    const NormalField basis_i(ei);
    for (std::size_t j = 0; j < n; ++j) {
      ej.assign(n, 0.0);
      ej[j] = 1.0;
      out.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          riemannian_hessian_form(hessian.curve, hessian.metric, hessian.kernels, basis_i, NormalField(ej));
    }
  }
  out.asymmetry = (out.matrix - out.matrix.transpose()).cwiseAbs().maxCoeff();
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose());
  return out;
}

NormalField solve_hessian(const HessianOperator& hessian, const NormalField& rhs, MetricParams metric) {
  if (const auto* mult = std::get_if<MultiplicationHessian>(&hessian)) {
    if (mult->nu.size() != rhs.size()) throw DimensionMismatch("Hessian and right-hand side sizes differ");
    std::vector<double> out(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      if (!(std::abs(mult->nu[i]) > kMinMultiplier)) {
        throw SingularHessian("multiplication Hessian vanishes at node " + std::to_string(i));
      }
      out[i] = rhs[i] / mult->nu[i];
    }
    return NormalField(std::move(out));
  }

  const auto& general = std::get<GeneralFormHessian>(hessian);
  const DiscreteCurve& curve = general.curve;
  require_matching(curve, rhs);
  const AssembledHessian assembled = assemble_hessian(general);
  if (assembled.asymmetry >= kMaxAssemblyAsymmetry) {
    throw SingularHessian("assembled Hessian is not symmetric (asymmetry " +
                          std::to_string(assembled.asymmetry) + ")");
  }
  const CurveGeometry& geo = curve.geometry();
  Eigen::VectorXd b(static_cast<Eigen::Index>(curve.size()));
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double kappa = geo.curvature[i];
    b(static_cast<Eigen::Index>(i)) = (1.0 + metric.a * kappa * kappa) * rhs[i] * geo.weights[i];
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(assembled.matrix);
  if (!lu.isInvertible()) throw SingularHessian("assembled Hessian is singular");
  const Eigen::VectorXd x = lu.solve(b);
  return NormalField(std::vector<double>(x.data(), x.data() + x.size()));
}

std::vector<TaylorSample> taylor_remainder_probe(const VolumeFunctional& f, const DiscreteCurve& curve,
                                                 MetricParams metric, const NormalField& h,
                                                 const std::vector<double>& t_values) {
  require_matching(curve, h);
  const double f0 = objective_excess(curve, f);
  const BoundaryKernel kernels = boundary_kernel(curve, f);
  const double slope = inner(curve, metric, riesz_gradient(curve, metric, kernels.g), h);
  const double curvature = riemannian_hessian_form(curve, metric, kernels, h, h);

  std::vector<TaylorSample> samples;
  samples.reserve(t_values.size());
  for (double t : t_values) {
    if (t == 0.0) {
      samples.push_back({t, 0.0});
      continue;
    }
    const DiscreteCurve moved = retract(curve, h, t);
    const double model = f0 + t * slope + 0.5 * t * t * curvature;
    samples.push_back({t, std::abs(objective_excess(moved, f) - model)});
  }
  return samples;
}

double log_log_slope(const std::vector<TaylorSample>& samples) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (const TaylorSample& s : samples) {
    if (s.t == 0.0) continue;
    const double x = std::log(std::abs(s.t));
    const double y = std::log(s.remainder);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) throw InsufficientData("slope fit needs at least two nonzero step sizes");
  const double denom = count * sxx - sx * sx;
  return (count * sxy - sx * sy) / denom;
}

}  // namespace shapeopt
