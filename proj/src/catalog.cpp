#include "prodimm/catalog.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "prodimm/errors.hpp"

namespace prodimm {

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

Vec sphere2(double u1, double u2) {
  Vec p(3);
  p << std::sin(u1) * std::cos(u2), std::sin(u1) * std::sin(u2), std::cos(u1);
  return p;
}

Vec sphere2_d1(double u1, double u2) {
  Vec p(3);
  p << std::cos(u1) * std::cos(u2), std::cos(u1) * std::sin(u2), -std::sin(u1);
  return p;
}

Vec sphere2_d2(double u1, double u2) {
  Vec p(3);
  p << -std::sin(u1) * std::sin(u2), std::sin(u1) * std::cos(u2), 0.0;
  return p;
}

// pi/2 rotation compatible with any metric conformal to
// diag(1, sin^2 u1): J d1 = d2 / sin u1, J d2 = -sin u1 d1.
Mat polar_j(const Vec& u) {
  Mat J(2, 2);
  J << 0.0, -std::sin(u[0]), 1.0 / std::sin(u[0]), 0.0;
  return J;
}

Mat flat_j() {
  Mat J(2, 2);
  J << 0.0, -1.0, 1.0, 0.0;
  return J;
}

Chart box(std::initializer_list<double> lo, std::initializer_list<double> hi) {
  Chart c;
  c.lo = Vec(static_cast<Eigen::Index>(lo.size()));
  c.hi = Vec(static_cast<Eigen::Index>(hi.size()));
  int i = 0;
  for (double x : lo) c.lo[i++] = x;
  i = 0;
  for (double x : hi) c.hi[i++] = x;
  return c;
}

// Non-affine angle: keeps the submanifold but makes the pullback metric
// non-constant, so FD convergence studies have something to converge on.
inline double warp(double u) { return u + 0.2 * std::sin(u); }
inline double dwarp(double u) { return 1.0 + 0.2 * std::cos(u); }

ImmersionDefinition make_clifford_torus_slice() {
  ImmersionDefinition e;
  e.name = "clifford_torus_slice";
  e.summary = "Clifford torus inside the 3-sphere factor of S3 x R";
  e.target = AmbientProduct::make(1.0, 3, 0.0, 1);
  e.domain_dim = 2;
  e.chart = box({0.2, 0.2}, {6.1, 6.1});
  e.map = [](const Vec& u) {
    double t1 = warp(u[0]);
    Vec b1(4);
    b1 << std::cos(t1), std::sin(t1), std::cos(u[1]), std::sin(u[1]);
    return AmbientVector(kInvSqrt2 * b1, Vec::Zero(1));
  };
  e.dmap = [](const Vec& u) {
    double t1 = warp(u[0]), a = dwarp(u[0]);
    Vec d0(4), d1(4);
    d0 << -a * std::sin(t1), a * std::cos(t1), 0.0, 0.0;
    d1 << 0.0, 0.0, -std::sin(u[1]), std::cos(u[1]);
    return std::vector<AmbientVector>{{kInvSqrt2 * d0, Vec::Zero(1)},
                                      {kInvSqrt2 * d1, Vec::Zero(1)}};
  };
  e.jmat = [](const Vec& u) {
    double a = dwarp(u[0]);
    Mat J(2, 2);
    J << 0.0, -1.0 / a, a, 0.0;
    return J;
  };
  e.expected.minimal = true;
  e.expected.pluriharmonic = true;
  e.expected.anti_pluriharmonic = false;
  e.expected.slice = SliceLabel::FirstFactorSlice;
  e.expected.trace_r = 0.0;
  e.expected.ricci_diag = 0.0;
  e.expected.scalar = 0.0;
  e.expected.equality_cases = {"takahashi_lower"};
  e.default_grid = {9, 9};
  return e;
}

ImmersionDefinition make_vertical_cylinder() {
  ImmersionDefinition e;
  e.name = "vertical_cylinder_S2xR";
  e.summary = "great circle of S2 crossed with the line factor";
  e.target = AmbientProduct::make(1.0, 2, 0.0, 1);
  e.domain_dim = 2;
  e.chart = box({0.2, -2.0}, {6.1, 2.0});
  e.map = [](const Vec& u) {
    Vec b1(3);
    b1 << std::cos(u[0]), std::sin(u[0]), 0.0;
    return AmbientVector(b1, vec1(u[1]));
  };
  e.dmap = [](const Vec& u) {
    Vec d0(3);
    d0 << -std::sin(u[0]), std::cos(u[0]), 0.0;
    return std::vector<AmbientVector>{{d0, Vec::Zero(1)}, {Vec::Zero(3), vec1(1.0)}};
  };
  e.jmat = [](const Vec&) { return flat_j(); };
  e.expected.minimal = true;
  e.expected.pluriharmonic = true;
  e.expected.anti_pluriharmonic = true;
  e.expected.slice = SliceLabel::Generic;
  e.expected.trace_r = 1.0;
  e.expected.ricci_diag = 0.0;
  e.expected.scalar = 0.0;
  e.expected.equality_cases = {"scalar_margin_sxr", "scalar_margin_general"};
  e.default_grid = {9, 9};
  return e;
}

ImmersionDefinition make_tg_slice_s2xr() {
  ImmersionDefinition e;
  e.name = "totally_geodesic_slice_S2xR";
  e.summary = "round sphere at a fixed height of S2 x R";
  e.target = AmbientProduct::make(1.0, 2, 0.0, 1);
  e.domain_dim = 2;
  e.chart = box({0.2, 0.2}, {kPi - 0.2, 6.1});
  e.map = [](const Vec& u) { return AmbientVector(sphere2(u[0], u[1]), vec1(0.7)); };
  e.dmap = [](const Vec& u) {
    return std::vector<AmbientVector>{{sphere2_d1(u[0], u[1]), Vec::Zero(1)},
                                      {sphere2_d2(u[0], u[1]), Vec::Zero(1)}};
  };
  e.jmat = polar_j;
  e.expected.minimal = true;
  e.expected.pluriharmonic = true;
  e.expected.anti_pluriharmonic = true;
  e.expected.slice = SliceLabel::FirstFactorSlice;
  e.expected.trace_r = 0.0;
  e.expected.ricci_diag = 1.0;
  e.expected.scalar = 2.0;
  e.expected.equality_cases = {"ricci_margin_sxr",  "scalar_margin_sxr",
                               "scalar_margin_general", "takahashi_lower",
                               "takahashi_upper",   "dajczer_rodriguez"};
  e.default_grid = {9, 9};
  return e;
}

ImmersionDefinition make_geodesic_plane_h2xr() {
  ImmersionDefinition e;
  e.name = "geodesic_plane_H2xR";
  e.summary = "hyperbolic plane slice of H2 x R in Fermi coordinates";
  e.target = AmbientProduct::make(-1.0, 2, 0.0, 1);
  e.domain_dim = 2;
  e.chart = box({-1.0, -1.0}, {1.0, 1.0});
  e.map = [](const Vec& u) {
    Vec b1(3);
    b1 << std::cosh(u[0]) * std::cosh(u[1]), std::sinh(u[0]),
        std::cosh(u[0]) * std::sinh(u[1]);
    return AmbientVector(b1, Vec::Zero(1));
  };
  e.dmap = [](const Vec& u) {
    Vec d0(3), d1(3);
    d0 << std::sinh(u[0]) * std::cosh(u[1]), std::cosh(u[0]),
        std::sinh(u[0]) * std::sinh(u[1]);
    d1 << std::cosh(u[0]) * std::sinh(u[1]), 0.0, std::cosh(u[0]) * std::cosh(u[1]);
    return std::vector<AmbientVector>{{d0, Vec::Zero(1)}, {d1, Vec::Zero(1)}};
  };
  e.jmat = [](const Vec& u) {
    Mat J(2, 2);
    J << 0.0, -std::cosh(u[0]), 1.0 / std::cosh(u[0]), 0.0;
    return J;
  };
  e.expected.minimal = true;
  e.expected.pluriharmonic = true;
  e.expected.anti_pluriharmonic = true;
  e.expected.slice = SliceLabel::FirstFactorSlice;
  e.expected.trace_r = 0.0;
  e.expected.ricci_diag = -1.0;
  e.expected.scalar = -2.0;
  e.expected.equality_cases = {"scalar_margin_general"};
  e.default_grid = {9, 9};
  return e;
}

ImmersionDefinition make_diagonal_sphere() {
  ImmersionDefinition e;
  e.name = "diagonal_sphere_S2xS2";
  e.summary = "diagonal embedding p -> (p, p) of the round sphere";
  e.target = AmbientProduct::make(1.0, 2, 1.0, 2);
  e.domain_dim = 2;
  e.chart = box({0.2, 0.2}, {kPi - 0.2, 6.1});
  e.map = [](const Vec& u) {
    Vec p = sphere2(u[0], u[1]);
    return AmbientVector(p, p);
  };
  e.dmap = [](const Vec& u) {
    Vec p1 = sphere2_d1(u[0], u[1]);
    Vec p2 = sphere2_d2(u[0], u[1]);
    return std::vector<AmbientVector>{{p1, p1}, {p2, p2}};
  };
  e.jmat = polar_j;
  e.expected.minimal = true;
  e.expected.pluriharmonic = true;
  e.expected.anti_pluriharmonic = true;
  e.expected.slice = SliceLabel::Generic;
  e.expected.trace_r = 1.0;
  e.expected.ricci_diag = 0.5;
  e.expected.scalar = 1.0;
  e.expected.equality_cases = {"scalar_margin_general"};
  e.default_grid = {9, 9};
  return e;
}

ImmersionDefinition make_clifford_x_clifford() {
  ImmersionDefinition e;
  e.name = "clifford_x_clifford_S3xS3";
  e.summary = "product of Clifford tori, one in each 3-sphere factor";
  e.target = AmbientProduct::make(1.0, 3, 1.0, 3);
  e.domain_dim = 4;
  e.chart = box({0.2, 0.2, 0.2, 0.2}, {6.1, 6.1, 6.1, 6.1});
  e.map = [](const Vec& u) {
    double t1 = warp(u[0]);
    Vec b1(4), b2(4);
    b1 << std::cos(t1), std::sin(t1), std::cos(u[1]), std::sin(u[1]);
    b2 << std::cos(u[2]), std::sin(u[2]), std::cos(u[3]), std::sin(u[3]);
    return AmbientVector(kInvSqrt2 * b1, kInvSqrt2 * b2);
  };
  e.dmap = [](const Vec& u) {
    double t1 = warp(u[0]), a = dwarp(u[0]);
    std::vector<AmbientVector> d(4, AmbientVector(Vec::Zero(4), Vec::Zero(4)));
    d[0].b1 << -a * std::sin(t1), a * std::cos(t1), 0.0, 0.0;
    d[1].b1 << 0.0, 0.0, -std::sin(u[1]), std::cos(u[1]);
    d[2].b2 << -std::sin(u[2]), std::cos(u[2]), 0.0, 0.0;
    d[3].b2 << 0.0, 0.0, -std::sin(u[3]), std::cos(u[3]);
    for (auto& v : d) v *= kInvSqrt2;
    return d;
  };
  e.jmat = [](const Vec& u) {
    double a = dwarp(u[0]);
    Mat J = Mat::Zero(4, 4);
    J(0, 1) = -1.0 / a;
    J(1, 0) = a;
    J(2, 3) = -1.0;
    J(3, 2) = 1.0;
    return J;
  };
  e.expected.minimal = true;
  e.expected.pluriharmonic = true;
  e.expected.anti_pluriharmonic = false;
  e.expected.slice = SliceLabel::Generic;
  e.expected.trace_r = 2.0;
  e.expected.ricci_diag = 0.0;
  e.expected.scalar = 0.0;
  e.default_grid = {5, 5, 5, 5};
  return e;
}

ImmersionDefinition make_geodesic_product_sxh() {
  ImmersionDefinition e;
  e.name = "geodesic_product_SxH";
  e.summary = "geodesic of S2 crossed with a geodesic of H2";
  e.target = AmbientProduct::make(1.0, 2, -1.0, 2);
  e.domain_dim = 2;
  e.chart = box({0.2, -1.5}, {6.1, 1.5});
  e.map = [](const Vec& u) {
    Vec b1(3), b2(3);
    b1 << std::cos(u[0]), std::sin(u[0]), 0.0;
    b2 << std::cosh(u[1]), std::sinh(u[1]), 0.0;
    return AmbientVector(b1, b2);
  };
  e.dmap = [](const Vec& u) {
    Vec d0(3), d1(3);
    d0 << -std::sin(u[0]), std::cos(u[0]), 0.0;
    d1 << std::sinh(u[1]), std::cosh(u[1]), 0.0;
    return std::vector<AmbientVector>{{d0, Vec::Zero(3)}, {Vec::Zero(3), d1}};
  };
  e.jmat = [](const Vec&) { return flat_j(); };
  e.expected.minimal = true;
  e.expected.pluriharmonic = true;
  e.expected.anti_pluriharmonic = true;
  e.expected.slice = SliceLabel::Generic;
  e.expected.trace_r = 1.0;
  e.expected.ricci_diag = 0.0;
  e.expected.scalar = 0.0;
  e.expected.equality_cases = {"scalar_margin_general"};
  e.default_grid = {9, 9};
  return e;
}

ImmersionDefinition make_latitude_sphere() {
  ImmersionDefinition e;
  e.name = "latitude_sphere_nonminimal";
  e.summary = "umbilic latitude 2-sphere of S3 at colatitude pi/4 (negative control)";
  e.target = AmbientProduct::make(1.0, 3, 0.0, 1);
  e.domain_dim = 2;
  e.chart = box({0.2, 0.2}, {kPi - 0.2, 6.1});
  const double c = std::cos(kPi / 4.0), s = std::sin(kPi / 4.0);
  e.map = [c, s](const Vec& u) {
    Vec b1(4);
    b1 << c, s * sphere2(u[0], u[1]);
    return AmbientVector(b1, Vec::Zero(1));
  };
  e.dmap = [s](const Vec& u) {
    Vec d0(4), d1(4);
    d0 << 0.0, s * sphere2_d1(u[0], u[1]);
    d1 << 0.0, s * sphere2_d2(u[0], u[1]);
    return std::vector<AmbientVector>{{d0, Vec::Zero(1)}, {d1, Vec::Zero(1)}};
  };
  e.jmat = polar_j;
  e.expected.minimal = false;
  e.expected.pluriharmonic = false;
  e.expected.anti_pluriharmonic = true;
  e.expected.slice = SliceLabel::FirstFactorSlice;
  e.expected.trace_r = 0.0;
  e.expected.ricci_diag = 2.0;
  e.expected.scalar = 4.0;
  e.default_grid = {9, 9};
  return e;
}

ImmersionDefinition make_tg_sphere_s3xh2() {
  ImmersionDefinition e;
  e.name = "totally_geodesic_sphere_S3xH2";
  e.summary = "great 2-sphere of the S3 factor at a fixed hyperbolic point";
  e.target = AmbientProduct::make(1.0, 3, -1.0, 2);
  e.domain_dim = 2;
  e.chart = box({0.2, 0.2}, {kPi - 0.2, 6.1});
  e.map = [](const Vec& u) {
    Vec b1(4), b2(3);
    b1 << sphere2(u[0], u[1]), 0.0;
    b2 << 1.0, 0.0, 0.0;
    return AmbientVector(b1, b2);
  };
  e.dmap = [](const Vec& u) {
    Vec d0(4), d1(4);
    d0 << sphere2_d1(u[0], u[1]), 0.0;
    d1 << sphere2_d2(u[0], u[1]), 0.0;
    return std::vector<AmbientVector>{{d0, Vec::Zero(3)}, {d1, Vec::Zero(3)}};
  };
  e.jmat = polar_j;
  e.expected.minimal = true;
  e.expected.pluriharmonic = true;
  e.expected.anti_pluriharmonic = true;
  e.expected.slice = SliceLabel::FirstFactorSlice;
  e.expected.trace_r = 0.0;
  e.expected.ricci_diag = 1.0;
  e.expected.scalar = 2.0;
  e.expected.equality_cases = {"ricci_margin_sxh", "scalar_margin_general",
                               "takahashi_lower", "takahashi_upper",
                               "dajczer_rodriguez"};
  e.default_grid = {9, 9};
  return e;
}

std::vector<ImmersionDefinition> build_catalog() {
  std::vector<ImmersionDefinition> all;
  all.push_back(make_clifford_torus_slice());
  all.push_back(make_vertical_cylinder());
  all.push_back(make_tg_slice_s2xr());
  all.push_back(make_geodesic_plane_h2xr());
  all.push_back(make_diagonal_sphere());
  all.push_back(make_clifford_x_clifford());
  all.push_back(make_geodesic_product_sxh());
  all.push_back(make_latitude_sphere());
  all.push_back(make_tg_sphere_s3xh2());
  for (const auto& e : all) e.validate();
  return all;
}

}  // namespace

const std::vector<ImmersionDefinition>& catalog_entries() {
  static const std::vector<ImmersionDefinition> entries = build_catalog();
  return entries;
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& e : catalog_entries()) names.push_back(e.name);
  return names;
}

const ImmersionDefinition& find_entry(const std::string& name) {
  for (const auto& e : catalog_entries())
    if (e.name == name) return e;
  std::ostringstream os;
  os << "unknown immersion '" << name << "'; available:";
  for (const auto& e : catalog_entries()) os << ' ' << e.name;
  throw ConfigError(os.str());
}

}  // namespace prodimm
