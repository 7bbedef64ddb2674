#pragma once

#include <stdexcept>
#include <string>

namespace shapeopt {

// Base of every error raised by the library. Each failure class from the
// domain gets its own subtype so callers can catch selectively.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Curve construction or differencing stencil failed (too few nodes,
// coincident nodes, self-intersection, zero tangent).
class DegenerateCurve : public Error {
 public:
  using Error::Error;
};

// A retracted or evaluated shape left the set of simple, positively
// oriented polygons.
class ShapeDegenerate : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SingularHessian : public Error {
 public:
  using Error::Error;
};

class NotStarShaped : public Error {
 public:
  using Error::Error;
};

class ProjectionFailed : public Error {
 public:
  using Error::Error;
};

class LineSearchFailed : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

// Malformed user input: files, config values, CLI arguments.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace shapeopt
