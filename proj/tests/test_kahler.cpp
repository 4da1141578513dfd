#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "prodimm/errors.hpp"

using namespace prodimm;
using testutil::Bundle;
using testutil::bundle_at;
using testutil::v2;
using testutil::v4;

TEST_CASE("standard frame J: pairing convention and square") {
  Mat J = standard_jframe(4);
  CHECK((J * J + Mat::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(J(1, 0) == 1.0);   // J e_0 = +e_1
  CHECK(J(0, 1) == -1.0);  // J e_1 = -e_0
  CHECK(J(3, 2) == 1.0);
  CHECK(J(2, 3) == -1.0);
}

TEST_CASE("adapted frames pair each vector with its J rotation") {
  Bundle b = bundle_at("clifford_torus_slice", v2(0.8, 3.1));
  Mat Jc = b.imm.jmat(b.u);
  // rows of the coordinate change: W(1,:) = Jc applied to W(0,:)
  Vec expected = Jc * b.frame.coord_to_frame.row(0).transpose();
  CHECK((b.frame.coord_to_frame.row(1).transpose() - expected).cwiseAbs().maxCoeff()
        < 1e-13);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(inner(b.frame.tangent[i], b.frame.tangent[j], b.A)
            == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("adapted frames in four dimensions keep both pairs") {
  Bundle b = bundle_at("clifford_x_clifford_S3xS3", v4(1.1, 2.3, 0.7, 3.8));
  Mat Jc = b.imm.jmat(b.u);
  for (int k = 0; k < 2; ++k) {
    Vec expected = Jc * b.frame.coord_to_frame.row(2 * k).transpose();
    CHECK((b.frame.coord_to_frame.row(2 * k + 1).transpose() - expected)
              .cwiseAbs()
              .maxCoeff()
          < 1e-12);
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(inner(b.frame.tangent[i], b.frame.tangent[j], b.A)
            == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-11));
}

TEST_CASE("complex-structure residuals vanish on the torus slice") {
  ImmersionDefinition imm = find_entry("clifford_torus_slice");
  KahlerResiduals kr = kahler_residuals_at(imm, v2(1.9, 0.6));
  CHECK(kr.square < 1e-12);
  CHECK(kr.ortho < 1e-12);
  CHECK(kr.parallel < 1e-6);
  CHECK(kr.certified(1e-6, 1e-4));
}

TEST_CASE("christoffel symbols of the polar sphere chart") {
  ImmersionDefinition imm = find_entry("totally_geodesic_slice_S2xR");
  Vec u = v2(1.1, 2.0);
  std::vector<Mat> gam = christoffels(imm, u, {});
  const double th = u[0];
  // ds^2 = d\theta^2 + sin^2\theta d\phi^2
  CHECK(gam[0](1, 1) == doctest::Approx(-std::sin(th) * std::cos(th)).epsilon(1e-8));
  CHECK(gam[1](0, 1) == doctest::Approx(std::cos(th) / std::sin(th)).epsilon(1e-8));
  CHECK(gam[1](1, 0) == doctest::Approx(std::cos(th) / std::sin(th)).epsilon(1e-8));
  CHECK(std::abs(gam[0](0, 0)) < 1e-8);
  CHECK(std::abs(gam[0](0, 1)) < 1e-8);
  CHECK(std::abs(gam[1](0, 0)) < 1e-8);
  CHECK(std::abs(gam[1](1, 1)) < 1e-8);
}

TEST_CASE("three curvature routes agree on the geodesic sphere slice") {
  Bundle b = bundle_at("totally_geodesic_slice_S2xR", v2(1.3, 3.0));

  CurvaturePackage fd = intrinsic_curvature_fd(b.imm, b.u, b.frame, {});
  CurvaturePackage gauss = ricci_via_gauss(b.gs, b.pt, b.A);
  CurvaturePackage ki = ricci_via_kahler_identity(b.gs, b.pt, b.A);

  // unit round sphere in an orthonormal frame: Ric = Id, Scal = 2
  for (int i = 0; i < 2; ++i) {
    CHECK(gauss.ric(i, i) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ki.ric(i, i) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fd.ric(i, i) == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK(gauss.scal == doctest::Approx(2.0).epsilon(1e-9));
  CHECK((fd.ric - gauss.ric).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((gauss.ric.diagonal() - ki.ric.diagonal()).cwiseAbs().maxCoeff() < 1e-9);

  // sectional curvature <R(X,Y)Y,X> = 1 in the intrinsic tensor, with antisymmetry
  CHECK(fd.riem.at(1, 0, 0, 1) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fd.riem.at(1, 0, 1, 0) == doctest::Approx(-fd.riem.at(0, 1, 1, 0)).epsilon(1e-9));
}

TEST_CASE("routes agree with negative curvature in the hyperbolic slice") {
  Bundle b = bundle_at("geodesic_plane_H2xR", v2(0.3, -0.4));
  CurvaturePackage fd = intrinsic_curvature_fd(b.imm, b.u, b.frame, {});
  CurvaturePackage gauss = ricci_via_gauss(b.gs, b.pt, b.A);
  for (int i = 0; i < 2; ++i)
    CHECK(gauss.ric(i, i) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(gauss.scal == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK((fd.ric - gauss.ric).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("flat torus: intrinsic curvature vanishes despite a wavy chart") {
  Bundle b = bundle_at("clifford_torus_slice", v2(2.6, 1.2));
  CurvaturePackage fd = intrinsic_curvature_fd(b.imm, b.u, b.frame, {});
  CHECK(fd.ric.cwiseAbs().maxCoeff() < 1e-6);
  CurvaturePackage gauss = ricci_via_gauss(b.gs, b.pt, b.A);
  CHECK(gauss.ric.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("the diagonal-route shortcut refuses non-minimal data") {
  Bundle b = bundle_at("latitude_sphere_nonminimal", v2(1.4, 2.8));
  CHECK_THROWS_AS((void)ricci_via_kahler_identity(b.gs, b.pt, b.A), GeometryError);
}
