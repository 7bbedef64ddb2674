#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shapeopt/errors.hpp"
#include "shapeopt/functional.hpp"
#include "shapeopt/harness.hpp"
#include "shapeopt/solver.hpp"

using namespace shapeopt;

namespace {

constexpr double kPi = std::numbers::pi;

DiscreteCurve circle(std::size_t n, double r, Vec2 center = Vec2::Zero()) {
  std::vector<Vec2> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    pts[i] = center + r * Vec2(std::cos(s), std::sin(s));
  }
  return DiscreteCurve(std::move(pts));
}

VolumeFunctional constant_one() {
  return VolumeFunctional::custom([](const Vec2&) { return 1.0; }, [](const Vec2&) { return Vec2(0.0, 0.0); });
}

VolumeFunctional fan_mso(double mu) {
  const VolumeFunctional m = VolumeFunctional::quadratic_mso(mu);
  return VolumeFunctional::custom(m.psi, m.grad_psi);
}

}  // namespace

TEST_CASE("quadratic family construction") {
  CHECK_THROWS_AS(VolumeFunctional::quadratic_mso(0.5), InvalidInput);
  const VolumeFunctional f = VolumeFunctional::quadratic_mso(2.0);
  CHECK(f.psi(Vec2(0.3, -0.2)) == doctest::Approx(0.09 + 4 * 0.04 - 1.0));
  CHECK(f.grad_psi(Vec2(0.3, -0.2)).isApprox(Vec2(0.6, -1.6)));
}

TEST_CASE("evaluate_mso") {
  CHECK(std::abs(evaluate_mso(circle(100, 1.0), 1.0) + kPi / 2.0) < 1e-3);
  CHECK(std::abs(evaluate_mso(reference_ellipse(100, 2.0), 2.0) + 0.7854) < 1e-3);
  CHECK(std::abs(evaluate_mso(initial_shape(100), 2.0) + 0.5571) < 1e-3);
  // the exact rule with stretched angles also recovers the optimum
  CHECK(std::abs(evaluate_mso(reference_ellipse(100, 2.0), 2.0, Quadrature::kPolarStretchedAngle) + kPi / 4.0) <
        1e-12);
}

TEST_CASE("excess form matches the direct value") {
  const DiscreteCurve c = initial_shape(100);
  CHECK(mso_optimal_value(2.0) + mso_excess(c, 2.0) == doctest::Approx(evaluate_mso(c, 2.0)).epsilon(1e-14));
  CHECK(mso_excess(c, 2.0) >= 0.0);
}

TEST_CASE("polar rules need a star-shaped curve") {
  const DiscreteCurve away = circle(50, 0.5, Vec2(3.0, 0.0));
  CHECK_THROWS_AS(evaluate_mso(away, 2.0), NotStarShaped);
  CHECK_THROWS_AS(distance_bar(away, 2.0), NotStarShaped);
  CHECK_THROWS_AS(evaluate_mso(away, 2.0, Quadrature::kFan), InvalidInput);
}

TEST_CASE("evaluate_general areas") {
  CHECK(std::abs(evaluate_general(circle(200, 1.0), constant_one()) - kPi) < 1e-3);
  CHECK(std::abs(evaluate_general(reference_ellipse(200, 2.0), constant_one()) - kPi / 2.0) < 1e-3);
  // the fan rule on psi = 1 is the polygon area
  const DiscreteCurve c = initial_shape(100);
  CHECK(evaluate_general(c, constant_one()) == doctest::Approx(signed_area(c.nodes())).epsilon(1e-13));
}

TEST_CASE("fan and polar quadratures agree on the quadratic family") {
  const DiscreteCurve c = initial_shape(4096);
  const double polar = evaluate_mso(c, 2.0, Quadrature::kPolarStretchedAngle);
  CHECK(std::abs(evaluate_general(c, fan_mso(2.0)) - polar) / std::abs(polar) < 1e-6);

  // On general star-shaped curves the gap is the fan rule's O(h^2) error.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint64_t seed = rng();
    auto gap = [&](std::size_t n) {
      std::mt19937_64 shape_rng(seed);
      const DiscreteCurve r = random_star_curve(shape_rng, n);
      const double p = evaluate_mso(r, 2.0, Quadrature::kPolarStretchedAngle);
      return std::abs(evaluate_general(r, fan_mso(2.0)) - p) / std::abs(p);
    };
    CHECK(gap(400) / gap(800) >= 3.5);
    CHECK(gap(4096) < 1e-5);
  }
}

TEST_CASE("evaluate dispatches on the quadrature") {
  const DiscreteCurve c = initial_shape(100);
  CHECK(evaluate(c, VolumeFunctional::quadratic_mso(2.0)) == evaluate_mso(c, 2.0));
  CHECK(evaluate(c, fan_mso(2.0)) == evaluate_general(c, fan_mso(2.0)));
  VolumeFunctional bad = constant_one();
  bad.quadrature = Quadrature::kPolarNodeAngle;
  CHECK_THROWS_AS(evaluate(c, bad), InvalidInput);
}

TEST_CASE("boundary kernel") {
  const DiscreteCurve ellipse = reference_ellipse(100, 2.0);
  const BoundaryKernel at_opt = boundary_kernel(ellipse, VolumeFunctional::quadratic_mso(2.0));
  for (std::size_t i = 0; i < 100; ++i) CHECK(std::abs(at_opt.g[i]) < 1e-14);

  const DiscreteCurve unit = circle(100, 1.0);
  const BoundaryKernel k1 = boundary_kernel(unit, VolumeFunctional::quadratic_mso(1.0));
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(std::abs(k1.g[i]) < 1e-14);
    CHECK(k1.dpsi_dn[i] == doctest::Approx(2.0).epsilon(1e-12));
  }

  const BoundaryKernel k2 = boundary_kernel(unit, VolumeFunctional::quadratic_mso(2.0));
  CHECK(k2.g[25] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(k2.dpsi_dn[25] == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("distance_bar") {
  CHECK(distance_bar(reference_ellipse(100, 2.0), 2.0) < 1e-6);
  CHECK(std::abs(distance_bar(initial_shape(100), 2.0) - 0.9222) < 1e-3);
  CHECK(std::abs(distance_bar(circle(100, 1.1), 1.0) - 2.0 * kPi * 0.1) < 1e-3);
}

TEST_CASE("distance_tilde") {
  const DiscreteCurve unit = circle(100, 1.0);
  CHECK(distance_tilde(unit, unit) < 1e-12);
  CHECK(std::abs(distance_tilde(circle(100, 1.05), unit) - 2.0 * kPi * 0.05) < 1e-2);

  // The start shape is too far from the ellipse for every normal ray to hit it.
  const DiscreteCurve ellipse = reference_ellipse(100, 2.0);
  CHECK_THROWS_AS(distance_tilde(initial_shape(100), ellipse), ProjectionFailed);

  // After one Newton step both surrogates are available and comparable.
  SolverConfig config;
  config.method = Method::kNewtonMultiplicative;
  config.max_iterations = 1;
  const auto records = optimize(initial_shape(100), VolumeFunctional::quadratic_mso(2.0), config, ellipse);
  const DiscreteCurve first(records.at(1).nodes);
  const double bar = distance_bar(first, 2.0);
  CHECK(std::abs(distance_tilde(first, ellipse) - bar) / bar < 0.15);
}
