#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "shapeopt/calculus.hpp"
#include "shapeopt/errors.hpp"
#include "shapeopt/harness.hpp"

using namespace shapeopt;

namespace {

constexpr double kPi = std::numbers::pi;

DiscreteCurve unit_circle(std::size_t n) { return reference_ellipse(n, 1.0); }

double weighted_product(const DiscreteCurve& c, const NormalField& nu, const NormalField& a, const NormalField& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) sum += nu[i] * a[i] * b[i] * c.geometry().weights[i];
  return sum;
}

}  // namespace

TEST_CASE("covariant derivative") {
  const DiscreteCurve c = unit_circle(100);
  const NormalField one = NormalField::constant(100, 1.0);
  const NormalField zero = NormalField::constant(100, 0.0);

  const NormalField d0 = covariant_derivative(c, MetricParams{0.0}, one, one, zero);
  for (std::size_t i = 0; i < 100; ++i) CHECK(d0[i] == doctest::Approx(0.5).epsilon(1e-3));

  const NormalField d1 = covariant_derivative(c, MetricParams{1.0}, one, one, zero);
  for (std::size_t i = 0; i < 100; ++i) CHECK(d1[i] == doctest::Approx(1.0).epsilon(1e-3));

  std::mt19937_64 rng(1);
  const DiscreteCurve r = random_star_curve(rng, 60);
  const NormalField dz = covariant_derivative(r, MetricParams{0.3}, random_field(rng, 60),
                                              NormalField::constant(60, 0.0), NormalField::constant(60, 0.0));
  for (std::size_t i = 0; i < 60; ++i) CHECK(dz[i] == 0.0);

  CHECK_THROWS_AS(covariant_derivative(c, MetricParams{}, one, NormalField::constant(99, 1.0), zero),
                  DimensionMismatch);
}

TEST_CASE("standard shape Hessian form") {
  const DiscreteCurve c = unit_circle(100);
  std::mt19937_64 rng(2);
  const NormalField a = random_field(rng, 100);
  const NormalField b = random_field(rng, 100);
  const NormalField zero = NormalField::constant(100, 0.0);

  CHECK(standard_shape_hessian_form(c, BoundaryKernel{zero, zero}, a, b, random_field(rng, 100)) == 0.0);

  SUBCASE("reduces to the Riemannian form where psi vanishes") {
    const DiscreteCurve e = reference_ellipse(100, 2.0);
    const BoundaryKernel k = boundary_kernel(e, VolumeFunctional::quadratic_mso(2.0));
    const double standard = standard_shape_hessian_form(e, k, a, b, random_field(rng, 100));
    const double riemannian = riemannian_hessian_form(e, MetricParams{}, k, a, b);
    CHECK(std::abs(standard - riemannian) < 1e-12 * std::abs(riemannian) + 1e-14);
  }

  SUBCASE("asymmetric under different extensions") {
    // psi vanishes on the unit circle for mu = 1, which would hide the
    // extension term; mu = 2 keeps it.
    const BoundaryKernel k = boundary_kernel(c, VolumeFunctional::quadratic_mso(2.0));
    const NormalField dw = random_field(rng, 100);
    const NormalField dv = random_field(rng, 100);
    const double ab = standard_shape_hessian_form(c, k, a, b, dw);
    const double ba = standard_shape_hessian_form(c, k, b, a, dv);
    CHECK(std::abs(ab - ba) > 1e-3);
  }
}

TEST_CASE("Riemannian Hessian form") {
  SUBCASE("zero field") {
    std::mt19937_64 rng(3);
    const DiscreteCurve c = random_star_curve(rng, 50);
    const BoundaryKernel k = boundary_kernel(c, VolumeFunctional::quadratic_mso(1.5));
    CHECK(riemannian_hessian_form(c, MetricParams{0.5}, k, NormalField::constant(50, 0.0), random_field(rng, 50)) ==
          0.0);
  }
  SUBCASE("unit circle, mu = 1, any A") {
    const DiscreteCurve c = unit_circle(100);
    const BoundaryKernel k = boundary_kernel(c, VolumeFunctional::quadratic_mso(1.0));
    std::mt19937_64 rng(4);
    const NormalField a = random_field(rng, 100);
    const NormalField b = random_field(rng, 100);
    for (double A : {0.0, 0.5, 3.0}) {
      const double expected = 2.0 * boundary_pairing(c, a, b);
      CHECK(riemannian_hessian_form(c, MetricParams{A}, k, a, b) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("optimal ellipse matches the multiplication operator") {
    const DiscreteCurve e = reference_ellipse(100, 2.0);
    const BoundaryKernel k = boundary_kernel(e, VolumeFunctional::quadratic_mso(2.0));
    const MultiplicationHessian h = hessian_at_solution(e, 2.0);
    std::mt19937_64 rng(5);
    for (int pair = 0; pair < 50; ++pair) {
      const NormalField a = random_field(rng, 100);
      const NormalField b = random_field(rng, 100);
      const double mult = weighted_product(e, h.nu, a, b);
      CHECK(std::abs(riemannian_hessian_form(e, MetricParams{}, k, a, b) - mult) < 1e-10);
    }
    // nu = 2 sqrt(s1^2 + mu^4 s2^2) along the ellipse
    for (std::size_t i = 0; i < 100; ++i) {
      const Vec2& s = e.node(i);
      CHECK(h.nu[i] == doctest::Approx(2.0 * std::sqrt(s.x() * s.x() + 16.0 * s.y() * s.y())).epsilon(2e-3));
    }
  }
  SUBCASE("symmetric on random curves") {
    std::mt19937_64 rng(6);
    const VolumeFunctional f = VolumeFunctional::custom(
        [](const Vec2& x) { return std::exp(x.x()) - x.y() * x.y(); },
        [](const Vec2& x) { return Vec2(std::exp(x.x()), -2.0 * x.y()); });
    for (int trial = 0; trial < 10; ++trial) {
      const DiscreteCurve c = random_star_curve(rng, 90);
      const BoundaryKernel k = boundary_kernel(c, f);
      const MetricParams m{std::uniform_real_distribution<double>(0.0, 2.0)(rng)};
      for (int pair = 0; pair < 10; ++pair) {
        const NormalField a = random_field(rng, 90);
        const NormalField b = random_field(rng, 90);
        CHECK(riemannian_hessian_form(c, m, k, a, b) == riemannian_hessian_form(c, m, k, b, a));
      }
    }
  }
}

TEST_CASE("coercivity at the optimum") {
  const DiscreteCurve e = reference_ellipse(100, 2.0);
  const BoundaryKernel k = boundary_kernel(e, VolumeFunctional::quadratic_mso(2.0));
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const NormalField a = random_field(rng, 100);
    CHECK(riemannian_hessian_form(e, MetricParams{}, k, a, a) >= 1.9 * boundary_pairing(e, a, a));
  }
}

TEST_CASE("hessian_at_solution") {
  const MultiplicationHessian circle = hessian_at_solution(unit_circle(64), 1.0);
  for (std::size_t i = 0; i < 64; ++i) CHECK(circle.nu[i] == doctest::Approx(2.0).epsilon(1e-12));

  const MultiplicationHessian h = hessian_at_solution(reference_ellipse(100, 2.0), 2.0);
  const auto v = h.nu.values();
  CHECK(*std::min_element(v.begin(), v.end()) == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(*std::max_element(v.begin(), v.end()) == doctest::Approx(4.0).epsilon(1e-3));
  CHECK(h.nu[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(h.nu[25] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("solve_hessian") {
  const NormalField rhs = NormalField::constant(10, 1.0);
  const NormalField half = solve_hessian(MultiplicationHessian{NormalField::constant(10, 2.0)}, rhs, MetricParams{});
  for (std::size_t i = 0; i < 10; ++i) CHECK(half[i] == 0.5);

  std::vector<double> nu(10, 2.0);
  nu[3] = 0.0;
  CHECK_THROWS_AS(solve_hessian(MultiplicationHessian{NormalField(nu)}, rhs, MetricParams{}), SingularHessian);
  CHECK_THROWS_AS(solve_hessian(MultiplicationHessian{NormalField::constant(9, 2.0)}, rhs, MetricParams{}),
                  DimensionMismatch);

  SUBCASE("general form agrees with the multiplication operator at the optimum") {
    const DiscreteCurve e = reference_ellipse(100, 2.0);
    const VolumeFunctional f = VolumeFunctional::quadratic_mso(2.0);
    std::mt19937_64 rng(8);
    for (double A : {0.0, 0.5}) {
      const MetricParams m{A};
      const NormalField b = random_field(rng, 100);
      const NormalField general = solve_hessian(general_form_hessian(e, m, f), b, m);
      // With A > 0 the mass weight (1 + A kappa^2) moves to the right side.
      std::vector<double> scaled(100);
      for (std::size_t i = 0; i < 100; ++i) {
        const double kappa = e.geometry().curvature[i];
        scaled[i] = (1.0 + A * kappa * kappa) * b[i];
      }
      const NormalField mult = solve_hessian(hessian_at_solution(e, 2.0), NormalField(scaled), m);
      for (std::size_t i = 0; i < 100; ++i) CHECK(std::abs(general[i] - mult[i]) < 1e-6);
    }
  }

  SUBCASE("assembled matrix is symmetric before averaging") {
    std::mt19937_64 rng(9);
    const DiscreteCurve c = random_star_curve(rng, 40);
    const AssembledHessian a =
        assemble_hessian(general_form_hessian(c, MetricParams{0.8}, VolumeFunctional::quadratic_mso(1.3)));
    CHECK(a.asymmetry < 1e-12);
  }

  SUBCASE("zero functional gives a singular general form") {
    const DiscreteCurve c = unit_circle(20);
    const VolumeFunctional zero =
        VolumeFunctional::custom([](const Vec2&) { return 0.0; }, [](const Vec2&) { return Vec2(0.0, 0.0); });
    CHECK_THROWS_AS(solve_hessian(general_form_hessian(c, MetricParams{}, zero), NormalField::constant(20, 1.0),
                                  MetricParams{}),
                    SingularHessian);
  }
}

TEST_CASE("Taylor remainder") {
  SUBCASE("t = 0") {
    const DiscreteCurve e = reference_ellipse(100, 2.0);
    const auto s = taylor_remainder_probe(VolumeFunctional::quadratic_mso(2.0), e, MetricParams{},
                                          NormalField::constant(100, 1.0), {0.0});
    CHECK(s.at(0).remainder == 0.0);
  }
  SUBCASE("cubic decay at the optimal ellipse") {
    std::mt19937_64 rng(10);
    const VolumeFunctional f = VolumeFunctional::quadratic_mso(2.0, Quadrature::kPolarStretchedAngle);
    const DiscreteCurve e = reference_ellipse(100, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
      const NormalField h = smooth_random_field(rng, 100);
      const double slope = log_log_slope(taylor_remainder_probe(f, e, MetricParams{}, h, {0.04, 0.02, 0.01}));
      CHECK(slope >= 2.5);
      CHECK(slope <= 3.5);
    }
  }
  SUBCASE("area functional on a circle: the retraction leaves a t^2 defect") {
    // Away from a stationary shape the straight-line retraction adds
    // t^2/2 * integral kappa psi alpha^2 / 2 ds relative to the Riemannian
    // model; here that is pi/2 * t^2.
    const VolumeFunctional area = VolumeFunctional::custom([](const Vec2&) { return 1.0; },
                                                           [](const Vec2&) { return Vec2(0.0, 0.0); });
    const DiscreteCurve c = unit_circle(400);
    const auto samples =
        taylor_remainder_probe(area, c, MetricParams{}, NormalField::constant(400, 1.0), {0.04, 0.02, 0.01});
    for (const TaylorSample& s : samples) CHECK(s.remainder / (s.t * s.t) == doctest::Approx(kPi / 2.0).epsilon(0.05));
    const double slope = log_log_slope(samples);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("log-log slope") {
  std::vector<TaylorSample> s{{0.0, 0.0}, {0.1, 5e-3}, {0.2, 4e-2}, {0.4, 0.32}};
  CHECK(log_log_slope(s) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS(log_log_slope({{0.0, 0.0}, {0.1, 1.0}}), InsufficientData);
}
