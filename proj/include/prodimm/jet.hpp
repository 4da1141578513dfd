#pragma once

#include <vector>

#include "prodimm/immersion.hpp"

namespace prodimm {

struct JetOptions {
  double h = 1e-3;        // absolute per-axis step
  bool richardson = true; // one extrapolation level on the difference stencils
};

// Second-order jet of the immersion at a chart point: exact (or high-order
// FD) first partials and FD second partials with error estimate.
struct Jet2 {
  Vec u;
  AmbientVector point;
  std::vector<AmbientVector> d1;       // size 2n
  std::vector<AmbientVector> d2_store; // packed symmetric, size 2n(2n+1)/2
  double step_used = 0.0;
  double error_estimate = 0.0;

  const AmbientVector& d2(int i, int j) const { return d2_store[sym_index(i, j)]; }
};

Jet2 compute_jet(const ImmersionDefinition& imm, const Vec& u, const JetOptions& opt = {});

// Pullback metric g_ab = <d1_a, d1_b>. Throws DegenerateImmersionError when
// lambda_min < 1e-8 * lambda_max.
Mat induced_metric(const Jet2& jet, const AmbientProduct& A);

// First partials only (cheap path for metric fields).
std::vector<AmbientVector> first_partials(const ImmersionDefinition& imm, const Vec& u,
                                          const JetOptions& opt = {});

Mat metric_at(const ImmersionDefinition& imm, const Vec& u, const JetOptions& opt = {});

// Orthonormal tangent frame (modified Gram-Schmidt over the coordinate
// partials, input order, one re-orthogonalization pass) plus an orthonormal
// basis of the normal space inside the product tangent space.
// coord_to_frame row i holds the chart components of frame vector i:
//   X_i = sum_a coord_to_frame(i,a) d1[a],  coord_to_frame^T coord_to_frame = g^{-1}.
struct FrameSample {
  std::vector<AmbientVector> tangent;
  std::vector<AmbientVector> normal;
  Mat coord_to_frame;
};

FrameSample build_frames(const Jet2& jet, const AmbientProduct& A);

}  // namespace prodimm
