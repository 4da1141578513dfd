#pragma once

#include <vector>

#include "prodimm/jet.hpp"

namespace prodimm {

// Extrinsic data of one sample over an orthonormal tangent frame.
// alpha(i,j) is the normal-valued second fundamental form over the frame,
// coord_alpha(a,b) the same tensor over coordinate fields (frame-free),
// weingarten[s](i,j) = <alpha(X_i,X_j), xi_s>, H the mean curvature vector.
struct GeometrySample {
  int dim = 0;        // 2n
  int normal_rank = 0;
  std::vector<AmbientVector> alpha_store;        // packed symmetric
  std::vector<AmbientVector> coord_alpha_store;  // packed symmetric
  std::vector<Mat> weingarten;
  AmbientVector mean_curvature;

  const AmbientVector& alpha(int i, int j) const { return alpha_store[sym_index(i, j)]; }
  const AmbientVector& coord_alpha(int a, int b) const {
    return coord_alpha_store[sym_index(a, b)];
  }
};

GeometrySample second_fundamental_form(const Jet2& jet, const FrameSample& fr,
                                       const AmbientProduct& A);

// ||H|| at the sample; 0 exactly characterizes minimality.
double minimality_residual(const GeometrySample& gs, const AmbientProduct& A);

// Tensors induced by the product structure, over the same frames:
//   L = dpi2 o f_*   : TM -> TQ2      (lmat, n2 x 2n)
//   K = dpi2|normal  : T^perp -> TQ2  (kmat, n2 x (m-2n))
//   R = L^t L, S = K^t L, T = K^t K, and the dpi1 counterparts.
struct ProductTensors {
  Mat lmat, kmat, lmat_tilde, kmat_tilde;
  Mat rmat, smat, tmat, rmat_tilde;
  double trace_r = 0.0;
  double norm_r_sq = 0.0;  // Frobenius

  // <RJ, JR> = tr((RJ)^T (JR)) for a frame J.
  double rj_jr(const Mat& jframe) const;
};

ProductTensors product_tensors(const Jet2& jet, const FrameSample& fr,
                               const AmbientProduct& A);

// ||dpi2 restricted to TM||^2 = tr R for Q x R targets (the squared norm of
// the tangent part of the unit vertical field).
double vertical_projection_norm(const ProductTensors& pt, const AmbientProduct& A);

// Normal frame at a chart point near a reference point, obtained by
// projecting the reference normals onto the local normal space and
// re-orthonormalizing. Seeding every stencil point from one reference keeps
// the resulting frame field differentiable, which a pointwise construction
// does not guarantee; at the reference point itself the field reproduces the
// reference exactly. Throws FrameContinuityError if a projected reference
// vector loses more than half its length.
std::vector<AmbientVector> transported_normals(const ImmersionDefinition& imm, const Vec& u,
                                               const std::vector<AmbientVector>& ref,
                                               const JetOptions& opt = {});

// Connection of the normal bundle along coordinate direction a, applied to
// the frame field transported from the frame at u:
// out[a][s] = nabla^perp_{d_a} xi_s at u.
std::vector<std::vector<AmbientVector>> normal_connection(const ImmersionDefinition& imm,
                                                          const Vec& u,
                                                          const JetOptions& opt = {});

}  // namespace prodimm
