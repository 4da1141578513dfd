#pragma once

#include <vector>

#include "prodimm/tensors.hpp"

namespace prodimm {

// Certification residuals for the supplied almost-complex structure:
//   square   : ||J^2 + Id||_F                  (pointwise algebra)
//   ortho    : max |(J^T g J - g)_{ab}|        (isometry of J)
//   parallel : max |(nabla_a J)^c_b|           (FD Christoffels)
struct KahlerResiduals {
  double square = 0.0;
  double ortho = 0.0;
  double parallel = 0.0;

  bool certified(double alg_tol, double fd_tol) const {
    return square < alg_tol && ortho < alg_tol && parallel < fd_tol;
  }
};

double j_square_residual(const Mat& J);
double j_ortho_residual(const Mat& J, const Mat& g);
double j_parallel_residual(const ImmersionDefinition& imm, const Vec& u,
                           const JetOptions& opt = {});

KahlerResiduals kahler_residuals_at(const ImmersionDefinition& imm, const Vec& u,
                                    const JetOptions& opt = {});

// Orthonormal frame adapted to J: X_{2j} = J X_{2j-1} held exactly (the
// partner is constructed by applying J, never re-orthonormalized). Fails if
// J is not compatible with the metric at the sample.
FrameSample adapted_frame(const Jet2& jet, const FrameSample& fr, const Mat& g,
                          const Mat& jchart, const AmbientProduct& A);

// J over an adapted frame: block-diagonal rotation by pi/2 per pair.
Mat standard_jframe(int dim);

// Levi-Civita symbols Gamma[l](a,b) from central differences of the metric.
std::vector<Mat> christoffels(const ImmersionDefinition& imm, const Vec& u,
                              const JetOptions& opt = {});

// Curvature tensor over an orthonormal frame, all four indices down:
// at(i,j,k,l) = < R(X_i, X_j) X_k, X_l > with
// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z.
struct Riem4 {
  int dim = 0;
  std::vector<double> v;

  Riem4() = default;
  explicit Riem4(int d) : dim(d), v(static_cast<size_t>(d) * d * d * d, 0.0) {}
  double& at(int i, int j, int k, int l) {
    return v[((static_cast<size_t>(i) * dim + j) * dim + k) * dim + l];
  }
  double at(int i, int j, int k, int l) const {
    return v[((static_cast<size_t>(i) * dim + j) * dim + k) * dim + l];
  }
};

enum class CurvatureRoute { IntrinsicFD, GaussEquation, KahlerIdentity };

const char* curvature_route_name(CurvatureRoute r);

// ric(j,k) = sum_i <R(X_i, X_j) X_k, X_i>; scal = tr ric. The identity
// route only produces the adapted-frame diagonal of ric (that is the
// content of the identity); its riem stays empty.
struct CurvaturePackage {
  CurvatureRoute route = CurvatureRoute::IntrinsicFD;
  Riem4 riem;
  Mat ric;
  double scal = 0.0;
};

// Pure finite differences on the induced metric; no ambient data enters.
CurvaturePackage intrinsic_curvature_fd(const ImmersionDefinition& imm, const Vec& u,
                                        const FrameSample& fr, const JetOptions& opt = {});

// Curvature assembled from the target curvature + R + the second
// fundamental form (general form; no minimality assumed).
CurvaturePackage ricci_via_gauss(const GeometrySample& gs, const ProductTensors& pt,
                                 const AmbientProduct& A);

// Adapted-frame diagonal Ricci through the complex structure; requires an
// (numerically) minimal sample and an adapted frame.
CurvaturePackage ricci_via_kahler_identity(const GeometrySample& gs, const ProductTensors& pt,
                                           const AmbientProduct& A,
                                           double minimality_tol = 1e-6);

}  // namespace prodimm
