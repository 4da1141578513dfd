#pragma once

#include <utility>

#include "prodimm/errors.hpp"
#include "prodimm/linalg.hpp"

namespace prodimm {

enum class FactorKind { Spherical, Euclidean, Hyperbolic };

// One constant-curvature factor, realized inside its flat embedding space:
//   c > 0 : round sphere  <x,x> = 1/c        in R^{n+1}
//   c = 0 : R^n itself (identity embedding)
//   c < 0 : hyperboloid   <x,x>_L = 1/c, x0 > 0, in Lorentz R^{1,n}
// The Lorentz form is diag(-1, +1, ..., +1) with the timelike slot first.
struct SpaceFormFactor {
  double curvature = 0.0;
  int dim = 0;
  FactorKind kind = FactorKind::Euclidean;
  int embed_dim = 0;

  static SpaceFormFactor make(double curvature, int dim);

  bool curved() const { return kind != FactorKind::Euclidean; }

  // Signature form of the embedding space.
  double form(const Vec& a, const Vec& b) const;

  // |<x,x> - 1/c| for curved factors (plus sheet check when c < 0); 0 when flat.
  double constraint_residual(const Vec& x) const;

  // Orthogonal projection onto the tangent space of the factor at x:
  //   v - c <v,x> x   (identity when flat).
  Vec project_tangent(const Vec& x, const Vec& v) const;
};

// Product Q^{n1}_{c1} x Q^{n2}_{c2} of two space forms.
struct AmbientProduct {
  SpaceFormFactor f1, f2;

  static AmbientProduct make(double c1, int n1, double c2, int n2);

  int total_dim() const { return f1.dim + f2.dim; }       // m
  int flat_dim() const { return f1.embed_dim + f2.embed_dim; }

  bool factor2_is_line() const {
    return f2.dim == 1 && f2.kind == FactorKind::Euclidean;
  }
};

// Point or vector in the flat embedding space of the product,
// stored per factor block.
struct AmbientVector {
  Vec b1, b2;

  AmbientVector() = default;
  AmbientVector(Vec a, Vec b) : b1(std::move(a)), b2(std::move(b)) {}

  static AmbientVector zero(const AmbientProduct& A);

  AmbientVector& operator+=(const AmbientVector& o);
  AmbientVector& operator-=(const AmbientVector& o);
  AmbientVector& operator*=(double s);
  friend AmbientVector operator+(AmbientVector a, const AmbientVector& b) { return a += b; }
  friend AmbientVector operator-(AmbientVector a, const AmbientVector& b) { return a -= b; }
  friend AmbientVector operator*(double s, AmbientVector a) { return a *= s; }
  friend AmbientVector operator*(AmbientVector a, double s) { return a *= s; }
};

// Product signature form (sum of the factor forms).
double inner(const AmbientVector& a, const AmbientVector& b, const AmbientProduct& A);

// sqrt(inner(v,v)); only meaningful on vectors where the form is
// positive (anything tangent to the product manifold qualifies).
double norm(const AmbientVector& v, const AmbientProduct& A);

// Distance of p from the product manifold's defining constraints.
double on_manifold_residual(const AmbientVector& p, const AmbientProduct& A);

// Per-factor tangent projection at p. p must satisfy the constraints.
AmbientVector tangent_project(const AmbientVector& p, const AmbientVector& v,
                              const AmbientProduct& A);

// Levi-Civita derivative of the product: flat derivative followed by
// tangent projection at p. X is unused beyond tangency validation of the
// data (the flat derivative dY already encodes the direction).
AmbientVector ambient_covariant_derivative(const AmbientVector& p, const AmbientVector& X,
                                           const AmbientVector& dY, const AmbientProduct& A);

// Splits v into its factor projections (dpi1 v, dpi2 v), each padded with a
// zero block so both halves live in the full embedding space again.
std::pair<AmbientVector, AmbientVector> dpi_split(const AmbientVector& v,
                                                  const AmbientProduct& A);

}  // namespace prodimm
