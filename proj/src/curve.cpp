#include "shapeopt/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "shapeopt/errors.hpp"

namespace shapeopt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Sign of the turn a -> b -> c.
int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double v = cross(b - a, c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

// Periodic parameter gap from params[i] to params[i+1].
double param_gap(std::span<const double> params, std::size_t i) {
  const std::size_t n = params.size();
  return i + 1 == n ? params[0] + kTwoPi - params[i] : params[i + 1] - params[i];
}

void validate_params(std::span<const double> params) {
  for (std::size_t i = 0; i + 1 < params.size(); ++i) {
    if (!(params[i + 1] > params[i])) {
      throw DegenerateCurve("curve parameters must be strictly increasing");
    }
  }
  if (!params.empty() && !(params.back() - params.front() < kTwoPi)) {
    throw DegenerateCurve("curve parameters must span less than 2*pi");
  }
}

}  // namespace

NormalField::NormalField(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("normal field contains a non-finite value");
  }
}

NormalField NormalField::constant(std::size_t size, double value) {
  return NormalField(std::vector<double>(size, value));
}

NormalField NormalField::scaled(double factor) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= factor;
  return NormalField(std::move(out));
}

std::vector<double> equidistant_params(std::size_t n) {
  std::vector<double> params(n);
  for (std::size_t i = 0; i < n; ++i) {
    params[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
  }
  return params;
}

DiscreteCurve::DiscreteCurve(std::vector<Vec2> nodes)
    : DiscreteCurve(nodes, equidistant_params(nodes.size())) {}

DiscreteCurve::DiscreteCurve(std::vector<Vec2> nodes, std::vector<double> params)
    : nodes_(std::move(nodes)), params_(std::move(params)) {
  if (nodes_.size() < kMinNodes) {
    throw DegenerateCurve("a curve needs at least " + std::to_string(kMinNodes) + " nodes, got " +
                          std::to_string(nodes_.size()));
  }
  if (params_.size() != nodes_.size()) {
    throw DimensionMismatch("parameter count does not match node count");
  }
  validate_params(params_);
  for (const Vec2& p : nodes_) {
    if (!p.allFinite()) throw DegenerateCurve("curve node is not finite");
  }
  if (signed_area(nodes_) < 0.0) {
    // Reverse traversal; node 0 and its parameter stay in place.
    const std::size_t n = nodes_.size();
    std::vector<Vec2> nodes_ccw(n);
    std::vector<double> params_ccw(n);
    nodes_ccw[0] = nodes_[0];
    params_ccw[0] = params_[0];
    for (std::size_t i = 1; i < n; ++i) {
      nodes_ccw[i] = nodes_[n - i];
      params_ccw[i] = params_[0] + kTwoPi - (params_[n - i] - params_[0]);
    }
    nodes_ = std::move(nodes_ccw);
    params_ = std::move(params_ccw);
  }
  geometry_ = build_geometry(nodes_, params_);
  if (!check_simple(nodes_)) throw DegenerateCurve("curve polygon self-intersects");
}

CurveGeometry build_geometry(std::span<const Vec2> nodes, std::span<const double> params) {
  const std::size_t n = nodes.size();
  if (n < DiscreteCurve::kMinNodes) throw DegenerateCurve("a curve needs at least 8 nodes");
  if (params.size() != n) throw DimensionMismatch("parameter count does not match node count");

  CurveGeometry geo;
  geo.tangent.resize(n);
  geo.normal.resize(n);
  geo.curvature.resize(n);
  geo.weights.resize(n);

  std::vector<double> edge(n);
  for (std::size_t i = 0; i < n; ++i) {
    edge[i] = (nodes[(i + 1) % n] - nodes[i]).norm();
    if (!(edge[i] > 0.0)) {
      throw DegenerateCurve("consecutive nodes " + std::to_string(i) + " and " +
                            std::to_string((i + 1) % n) + " coincide");
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = (i + 1) % n;
    const std::size_t im = (i + n - 1) % n;
    const Vec2& a = nodes[im];
    const Vec2& b = nodes[i];
    const Vec2& c = nodes[ip];

    const Vec2 chord = c - a;
    const double len = chord.norm();
    if (!(len > 0.0)) throw DegenerateCurve("zero central-difference tangent at node " + std::to_string(i));
    geo.tangent[i] = chord / len;
    geo.normal[i] = Vec2(geo.tangent[i].y(), -geo.tangent[i].x());

    // Nonuniform first and second differences in the curve parameter.
    const double h1 = param_gap(params, im);
    const double h2 = param_gap(params, i);
    const Vec2 d1 = (-h2 / (h1 * (h1 + h2))) * a + ((h2 - h1) / (h1 * h2)) * b + (h1 / (h2 * (h1 + h2))) * c;
    const Vec2 d2 = 2.0 * (a / (h1 * (h1 + h2)) - b / (h1 * h2) + c / (h2 * (h1 + h2)));
    const double speed = d1.norm();
    if (!(speed > 0.0)) throw DegenerateCurve("zero parametric velocity at node " + std::to_string(i));
    geo.curvature[i] = cross(d1, d2) / (speed * speed * speed);

    geo.weights[i] = 0.5 * (edge[im] + edge[i]);
  }
  return geo;
}

CurveGeometry build_geometry(const DiscreteCurve& curve) {
  return build_geometry(curve.nodes(), curve.params());
}

NormalField tangential_second_derivative(const DiscreteCurve& curve, const NormalField& u) {
  require_matching(curve, u);
  const std::size_t n = curve.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = curve.prev(i);
    const std::size_t ip = curve.next(i);
    const double dm = (curve.node(i) - curve.node(im)).norm();
    const double dp = (curve.node(ip) - curve.node(i)).norm();
    out[i] = 2.0 * (u[im] / (dm * (dm + dp)) - u[i] / (dm * dp) + u[ip] / (dp * (dm + dp)));
  }
  return NormalField(std::move(out));
}

double signed_area(std::span<const Vec2> nodes) {
  const std::size_t n = nodes.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) twice += cross(nodes[i], nodes[(i + 1) % n]);
  return 0.5 * twice;
}

double perimeter(std::span<const Vec2> nodes) {
  const std::size_t n = nodes.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += (nodes[(i + 1) % n] - nodes[i]).norm();
  return total;
}

bool check_simple(std::span<const Vec2> nodes) {
  const std::size_t n = nodes.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p1 = nodes[i];
    const Vec2& p2 = nodes[(i + 1) % n];
    // Adjacent edge folding back onto this one.
    const Vec2& p3 = nodes[(i + 2) % n];
    if (orientation(p1, p2, p3) == 0 && (p3 - p2).dot(p1 - p2) > 0.0) return false;
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // edges share node 0
      if (segments_intersect(p1, p2, nodes[j], nodes[(j + 1) % n])) return false;
    }
  }
  return true;
}

bool check_simple(const DiscreteCurve& curve) { return check_simple(curve.nodes()); }

void require_matching(const DiscreteCurve& curve, const NormalField& field) {
  if (field.size() != curve.size()) {
    throw DimensionMismatch("field has " + std::to_string(field.size()) + " values but the curve has " +
                            std::to_string(curve.size()) + " nodes");
  }
}

}  // namespace shapeopt
