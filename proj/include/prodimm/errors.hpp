#pragma once

#include <stdexcept>
#include <string>

namespace prodimm {

// Base for every failure raised by the geometry engine.
struct GeometryError : std::runtime_error {
  explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

// Point fails the level-set constraints of the product target.
struct OffManifoldError : GeometryError {
  using GeometryError::GeometryError;
};

// A vector expected to be tangent has a radial component.
struct NonTangentError : GeometryError {
  using GeometryError::GeometryError;
};

// Induced metric is singular at the sample: smallest eigenvalue below
// 1e-8 times the largest.
struct DegenerateImmersionError : GeometryError {
  using GeometryError::GeometryError;
};

// Frame field could not be propagated across a stencil (orientation jump).
struct FrameContinuityError : GeometryError {
  using GeometryError::GeometryError;
};

// A finite-difference stencil would leave the chart box.
struct ChartBoundaryError : GeometryError {
  using GeometryError::GeometryError;
};

// Bad run configuration, expression syntax error, unknown check name, ...
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace prodimm
