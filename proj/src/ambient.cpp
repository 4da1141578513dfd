#include "prodimm/ambient.hpp"

#include <cmath>

namespace prodimm {

namespace {
constexpr double kOnManifoldTol = 1e-9;

double factor_form(const SpaceFormFactor& f, const Vec& a, const Vec& b) {
  double s = a.dot(b);
  if (f.kind == FactorKind::Hyperbolic) s -= 2.0 * a[0] * b[0];  // (-,+,...,+)
  return s;
}
}  // namespace

SpaceFormFactor SpaceFormFactor::make(double curvature, int dim) {
  if (dim < 1) throw GeometryError("space form factor needs dim >= 1");
  SpaceFormFactor f;
  f.curvature = curvature;
  f.dim = dim;
  if (curvature > 0.0) {
    f.kind = FactorKind::Spherical;
    f.embed_dim = dim + 1;
  } else if (curvature < 0.0) {
    f.kind = FactorKind::Hyperbolic;
    f.embed_dim = dim + 1;
  } else {
    f.kind = FactorKind::Euclidean;
    f.embed_dim = dim;
  }
  return f;
}

double SpaceFormFactor::form(const Vec& a, const Vec& b) const {
  return factor_form(*this, a, b);
}

double SpaceFormFactor::constraint_residual(const Vec& x) const {
  if (!curved()) return 0.0;
  double r = std::abs(form(x, x) - 1.0 / curvature);
  if (kind == FactorKind::Hyperbolic && x[0] <= 0.0)
    r += 1.0 + std::abs(x[0]);  // wrong sheet counts as far away
  return r;
}

Vec SpaceFormFactor::project_tangent(const Vec& x, const Vec& v) const {
  if (!curved()) return v;
  return v - curvature * form(v, x) * x;
}

AmbientProduct AmbientProduct::make(double c1, int n1, double c2, int n2) {
  AmbientProduct A;
  A.f1 = SpaceFormFactor::make(c1, n1);
  A.f2 = SpaceFormFactor::make(c2, n2);
  return A;
}

AmbientVector AmbientVector::zero(const AmbientProduct& A) {
  return {Vec::Zero(A.f1.embed_dim), Vec::Zero(A.f2.embed_dim)};
}

AmbientVector& AmbientVector::operator+=(const AmbientVector& o) {
  b1 += o.b1;
  b2 += o.b2;
  return *this;
}

AmbientVector& AmbientVector::operator-=(const AmbientVector& o) {
  b1 -= o.b1;
  b2 -= o.b2;
  return *this;
}

AmbientVector& AmbientVector::operator*=(double s) {
  b1 *= s;
  b2 *= s;
  return *this;
}

double inner(const AmbientVector& a, const AmbientVector& b, const AmbientProduct& A) {
  return factor_form(A.f1, a.b1, b.b1) + factor_form(A.f2, a.b2, b.b2);
}

double norm(const AmbientVector& v, const AmbientProduct& A) {
  double q = inner(v, v, A);
  return q <= 0.0 ? 0.0 : std::sqrt(q);
}

double on_manifold_residual(const AmbientVector& p, const AmbientProduct& A) {
  return A.f1.constraint_residual(p.b1) + A.f2.constraint_residual(p.b2);
}

AmbientVector tangent_project(const AmbientVector& p, const AmbientVector& v,
                              const AmbientProduct& A) {
  if (on_manifold_residual(p, A) > kOnManifoldTol)
    throw OffManifoldError("tangent_project: base point off the product manifold");
  return {A.f1.project_tangent(p.b1, v.b1), A.f2.project_tangent(p.b2, v.b2)};
}

AmbientVector ambient_covariant_derivative(const AmbientVector& p, const AmbientVector& X,
                                           const AmbientVector& dY, const AmbientProduct& A) {
  // X must be tangent at p; the projection of the flat derivative is the
  // Levi-Civita connection of each level-set factor.
  AmbientVector Xt = tangent_project(p, X, A);
  Xt -= X;
  double drift = std::sqrt(Xt.b1.squaredNorm() + Xt.b2.squaredNorm());
  if (drift > 1e-6)
    throw NonTangentError("ambient_covariant_derivative: direction is not tangent");
  return tangent_project(p, dY, A);
}

std::pair<AmbientVector, AmbientVector> dpi_split(const AmbientVector& v,
                                                  const AmbientProduct& A) {
  AmbientVector p1{v.b1, Vec::Zero(A.f2.embed_dim)};
  AmbientVector p2{Vec::Zero(A.f1.embed_dim), v.b2};
  return {p1, p2};
}

}  // namespace prodimm
