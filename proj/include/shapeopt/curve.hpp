#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace shapeopt {

using Vec2 = Eigen::Vector2d;

/// Scalar normal velocity per node. Represents the tangent vector
/// h = alpha * n of the shape manifold at the owning curve.
class NormalField {
 public:
  NormalField() = default;
  /// Throws InvalidInput if any value is not finite.
  explicit NormalField(std::vector<double> values);

  static NormalField constant(std::size_t size, double value);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  NormalField scaled(double factor) const;

 private:
  std::vector<double> values_;
};

/// Local geometry of a closed polygon, one entry per node.
struct CurveGeometry {
  std::vector<Vec2> tangent;
  std::vector<Vec2> normal;  // outward for counterclockwise curves
  std::vector<double> curvature;
  std::vector<double> weights;  // length measure; sums to the perimeter
};

/// Closed planar polygon with periodic indexing, normalized to
/// counterclockwise orientation. Immutable once built; geometry is computed
/// eagerly in the constructor.
class DiscreteCurve {
 public:
  static constexpr std::size_t kMinNodes = 8;

  /// Equidistant parameters 2*pi*i/N.
  explicit DiscreteCurve(std::vector<Vec2> nodes);
  /// `params` must be strictly increasing and span less than 2*pi.
  DiscreteCurve(std::vector<Vec2> nodes, std::vector<double> params);

  std::size_t size() const { return nodes_.size(); }
  std::span<const Vec2> nodes() const { return nodes_; }
  const Vec2& node(std::size_t i) const { return nodes_[i]; }
  std::span<const double> params() const { return params_; }
  const CurveGeometry& geometry() const { return geometry_; }

  std::size_t next(std::size_t i) const { return i + 1 == size() ? 0 : i + 1; }
  std::size_t prev(std::size_t i) const { return i == 0 ? size() - 1 : i - 1; }

 private:
  std::vector<Vec2> nodes_;
  std::vector<double> params_;
  CurveGeometry geometry_;
};

std::vector<double> equidistant_params(std::size_t n);

/// Central-difference tangent, outward normal, curvature and node weights.
/// Throws DegenerateCurve for N < 8, coincident neighbours or a vanishing
/// tangent stencil.
CurveGeometry build_geometry(std::span<const Vec2> nodes, std::span<const double> params);
CurveGeometry build_geometry(const DiscreteCurve& curve);

/// Second derivative with respect to arc length using the three-point stencil
/// on unequally spaced nodes (chord lengths as spacing).
NormalField tangential_second_derivative(const DiscreteCurve& curve, const NormalField& u);

double signed_area(std::span<const Vec2> nodes);
double perimeter(std::span<const Vec2> nodes);

/// True iff no two non-adjacent edges of the closed polygon intersect.
bool check_simple(std::span<const Vec2> nodes);
bool check_simple(const DiscreteCurve& curve);

/// Throws DimensionMismatch unless `field` has one value per node.
void require_matching(const DiscreteCurve& curve, const NormalField& field);

}  // namespace shapeopt
