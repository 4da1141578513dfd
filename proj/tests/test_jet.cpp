#include "doctest.h"

#include <cmath>

#include "prodimm/catalog.hpp"
#include "prodimm/errors.hpp"
#include "prodimm/jet.hpp"

using namespace prodimm;

namespace {

Vec pt2(double a, double b) {
  Vec u(2);
  u << a, b;
  return u;
}

// analytic second partials of the reparametrized torus chart
void torus_d2(const Vec& u, AmbientVector& d11, AmbientVector& d22,
              const AmbientProduct& A) {
  const double th = u[0] + 0.2 * std::sin(u[0]);
  const double a = 1.0 + 0.2 * std::cos(u[0]);
  const double b = -0.2 * std::sin(u[0]);
  const double r = 1.0 / std::sqrt(2.0);
  d11 = AmbientVector::zero(A);
  d11.b1 << r * (-a * a * std::cos(th) - b * std::sin(th)),
      r * (-a * a * std::sin(th) + b * std::cos(th)), 0, 0;
  d22 = AmbientVector::zero(A);
  d22.b1 << 0, 0, -r * std::cos(u[1]), -r * std::sin(u[1]);
}

}  // namespace

TEST_CASE("jet second derivatives match analytic partials") {
  ImmersionDefinition imm = find_entry("clifford_torus_slice");
  Vec u = pt2(1.3, 2.1);
  Jet2 jet = compute_jet(imm, u, {});

  AmbientVector d11, d22;
  torus_d2(u, d11, d22, imm.target);
  CHECK((jet.d2(0, 0).b1 - d11.b1).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((jet.d2(1, 1).b1 - d22.b1).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(jet.d2(0, 1).b1.cwiseAbs().maxCoeff() < 1e-9);
  CHECK(jet.d2(0, 1).b2.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("exact first derivatives are taken from dmap verbatim") {
  ImmersionDefinition imm = find_entry("clifford_torus_slice");
  Vec u = pt2(0.9, 4.0);
  Jet2 jet = compute_jet(imm, u, {});
  std::vector<AmbientVector> d = imm.dmap(u);
  for (int a = 0; a < 2; ++a) {
    CHECK((jet.d1[a].b1 - d[a].b1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((jet.d1[a].b2 - d[a].b2).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("FD fallback for first derivatives stays close to exact ones") {
  ImmersionDefinition imm = find_entry("clifford_torus_slice");
  ImmersionDefinition nod = imm;
  nod.dmap = nullptr;
  Vec u = pt2(1.7, 3.3);
  std::vector<AmbientVector> exact = imm.dmap(u);
  std::vector<AmbientVector> fd = first_partials(nod, u, {});
  for (int a = 0; a < 2; ++a)
    CHECK((fd[a].b1 - exact[a].b1).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("halving the step shrinks the error estimate by 4x or better") {
  ImmersionDefinition imm = find_entry("clifford_torus_slice");
  Vec u = pt2(2.0, 1.5);
  JetOptions coarse, fine;
  coarse.h = 2e-3;
  fine.h = 1e-3;
  Jet2 jc = compute_jet(imm, u, coarse);
  Jet2 jf = compute_jet(imm, u, fine);
  REQUIRE(jc.error_estimate > 0.0);
  CHECK(jf.error_estimate / jc.error_estimate <= 0.3);
}

TEST_CASE("induced metric of the reparametrized torus chart") {
  ImmersionDefinition imm = find_entry("clifford_torus_slice");
  Vec u = pt2(1.1, 0.7);
  const double a = 1.0 + 0.2 * std::cos(u[0]);
  Mat g = metric_at(imm, u, {});
  CHECK(g(0, 0) == doctest::Approx(a * a / 2.0).epsilon(1e-12));
  CHECK(g(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(g(0, 1)) < 1e-14);
}

TEST_CASE("frames: orthonormal, tangent-normal split, coordinate change") {
  ImmersionDefinition imm = find_entry("clifford_torus_slice");
  const AmbientProduct& A = imm.target;
  Vec u = pt2(2.4, 5.0);
  Jet2 jet = compute_jet(imm, u, {});
  FrameSample fr = build_frames(jet, A);

  REQUIRE(fr.tangent.size() == 2);
  REQUIRE(fr.normal.size() == 2);  // 4-dim product, 2-dim submanifold

  for (size_t i = 0; i < fr.tangent.size(); ++i)
    for (size_t j = 0; j < fr.tangent.size(); ++j)
      CHECK(inner(fr.tangent[i], fr.tangent[j], A)
            == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
  for (size_t s = 0; s < fr.normal.size(); ++s) {
    for (size_t r = 0; r < fr.normal.size(); ++r)
      CHECK(inner(fr.normal[s], fr.normal[r], A)
            == doctest::Approx(s == r ? 1.0 : 0.0).epsilon(1e-12));
    for (size_t i = 0; i < fr.tangent.size(); ++i)
      CHECK(std::abs(inner(fr.normal[s], fr.tangent[i], A)) < 1e-12);
    // normals live in the product's tangent space at the point
    CHECK(std::abs(A.f1.form(fr.normal[s].b1, jet.point.b1)) < 1e-12);
  }

  // X_i = sum_a W(i,a) d1[a]
  for (int i = 0; i < 2; ++i) {
    AmbientVector x = AmbientVector::zero(A);
    for (int a = 0; a < 2; ++a) x += fr.coord_to_frame(i, a) * jet.d1[a];
    CHECK((x.b1 - fr.tangent[i].b1).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((x.b2 - fr.tangent[i].b2).cwiseAbs().maxCoeff() < 1e-12);
  }

  // W^T W = g^{-1}
  Mat g = induced_metric(jet, A);
  Mat gi = fr.coord_to_frame.transpose() * fr.coord_to_frame;
  CHECK((gi * g - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("degenerate differentials are rejected") {
  ImmersionDefinition imm = find_entry("clifford_torus_slice");
  ImmersionDefinition flat = imm;
  AmbientVector fixed = imm.map(pt2(1.0, 1.0));
  flat.map = [fixed](const Vec&) { return fixed; };
  flat.dmap = nullptr;
  CHECK_THROWS_AS((void)build_frames(compute_jet(flat, pt2(1.0, 1.0), {}), imm.target),
                  DegenerateImmersionError);
}

TEST_CASE("stencils must stay inside the chart") {
  ImmersionDefinition imm = find_entry("clifford_torus_slice");
  Vec u = pt2(imm.chart.lo[0], 1.0);  // on the edge: u - h leaves the box
  CHECK_THROWS_AS((void)compute_jet(imm, u, {}), ChartBoundaryError);
}
