#include "prodimm/tensors.hpp"

#include <cmath>

namespace prodimm {

namespace {

// Orthonormal basis of the factor tangent space at the base point, built
// from the standard basis of the factor's embedding space. Any orthonormal
// choice yields the same R, S, T; this one is deterministic.
std::vector<Vec> factor_basis(const SpaceFormFactor& f, const Vec& x) {
  std::vector<Vec> basis;
  for (int cand = 0; cand < f.embed_dim && static_cast<int>(basis.size()) < f.dim; ++cand) {
    Vec e = Vec::Zero(f.embed_dim);
    e[cand] = 1.0;
    Vec w = f.project_tangent(x, e);
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& b : basis) w -= f.form(w, b) * b;
    double q = f.form(w, w);
    if (q < 1e-12) continue;
    basis.push_back(w / std::sqrt(q));
  }
  if (static_cast<int>(basis.size()) != f.dim)
    throw DegenerateImmersionError("factor tangent basis incomplete");
  return basis;
}

AmbientVector normal_project(const AmbientVector& w, const std::vector<AmbientVector>& normal,
                             const AmbientProduct& A) {
  AmbientVector out = AmbientVector::zero(A);
  for (const AmbientVector& xi : normal) out += inner(w, xi, A) * xi;
  return out;
}

}  // namespace

GeometrySample second_fundamental_form(const Jet2& jet, const FrameSample& fr,
                                       const AmbientProduct& A) {
  const int d = static_cast<int>(jet.d1.size());
  const int r = static_cast<int>(fr.normal.size());
  GeometrySample gs;
  gs.dim = d;
  gs.normal_rank = r;

  // alpha(d_a, d_b) = normal part of the product covariant derivative of
  // f_* d_b along d_a, i.e. the normal projection of the flat Hessian after
  // removing the level-set radial components.
  gs.coord_alpha_store.resize(sym_count(d));
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      AmbientVector tang = tangent_project(jet.point, jet.d2(a, b), A);
      gs.coord_alpha_store[sym_index(a, b)] = normal_project(tang, fr.normal, A);
    }

  const Mat& W = fr.coord_to_frame;
  gs.alpha_store.resize(sym_count(d));
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      AmbientVector acc = AmbientVector::zero(A);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          double w = W(i, a) * W(j, b);
          if (w == 0.0) continue;
          acc += w * gs.coord_alpha(a, b);
        }
      gs.alpha_store[sym_index(i, j)] = acc;
    }

  gs.weingarten.assign(r, Mat::Zero(d, d));
  for (int s = 0; s < r; ++s)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        double v = inner(gs.alpha(i, j), fr.normal[s], A);
        gs.weingarten[s](i, j) = v;
        gs.weingarten[s](j, i) = v;
      }

  gs.mean_curvature = AmbientVector::zero(A);
  for (int i = 0; i < d; ++i) gs.mean_curvature += gs.alpha(i, i);
  gs.mean_curvature *= 1.0 / d;
  return gs;
}

double minimality_residual(const GeometrySample& gs, const AmbientProduct& A) {
  return norm(gs.mean_curvature, A);
}

double ProductTensors::rj_jr(const Mat& jframe) const {
  return ((rmat * jframe).transpose() * (jframe * rmat)).trace();
}

ProductTensors product_tensors(const Jet2& jet, const FrameSample& fr,
                               const AmbientProduct& A) {
  const int d = static_cast<int>(fr.tangent.size());
  const int r = static_cast<int>(fr.normal.size());
  const int n1 = A.f1.dim;
  const int n2 = A.f2.dim;

  std::vector<Vec> b1 = factor_basis(A.f1, jet.point.b1);
  std::vector<Vec> b2 = factor_basis(A.f2, jet.point.b2);

  ProductTensors pt;
  pt.lmat = Mat(n2, d);
  pt.kmat = Mat(n2, r);
  pt.lmat_tilde = Mat(n1, d);
  pt.kmat_tilde = Mat(n1, r);
  for (int s = 0; s < n2; ++s) {
    for (int i = 0; i < d; ++i) pt.lmat(s, i) = A.f2.form(b2[s], fr.tangent[i].b2);
    for (int i = 0; i < r; ++i) pt.kmat(s, i) = A.f2.form(b2[s], fr.normal[i].b2);
  }
  for (int s = 0; s < n1; ++s) {
    for (int i = 0; i < d; ++i) pt.lmat_tilde(s, i) = A.f1.form(b1[s], fr.tangent[i].b1);
    for (int i = 0; i < r; ++i) pt.kmat_tilde(s, i) = A.f1.form(b1[s], fr.normal[i].b1);
  }

  pt.rmat = pt.lmat.transpose() * pt.lmat;
  pt.smat = pt.kmat.transpose() * pt.lmat;
  pt.tmat = pt.kmat.transpose() * pt.kmat;
  pt.rmat_tilde = pt.lmat_tilde.transpose() * pt.lmat_tilde;
  pt.trace_r = pt.rmat.trace();
  pt.norm_r_sq = pt.rmat.squaredNorm();
  return pt;
}

double vertical_projection_norm(const ProductTensors& pt, const AmbientProduct& A) {
  if (!A.factor2_is_line())
    throw GeometryError("vertical projection needs a Q x R target");
  return pt.trace_r;
}

std::vector<AmbientVector> transported_normals(const ImmersionDefinition& imm, const Vec& u,
                                               const std::vector<AmbientVector>& ref,
                                               const JetOptions& opt) {
  const AmbientProduct& A = imm.target;
  Jet2 j = compute_jet(imm, u, opt);
  const int d = static_cast<int>(j.d1.size());
  const int r = static_cast<int>(ref.size());

  Mat g(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) g(a, b) = g(b, a) = inner(j.d1[a], j.d1[b], A);
  Mat ginv = g.inverse();

  std::vector<AmbientVector> out;
  out.reserve(r);
  for (int s = 0; s < r; ++s) {
    AmbientVector w = tangent_project(j.point, ref[s], A);
    Vec comp(d);
    for (int b = 0; b < d; ++b) comp[b] = inner(w, j.d1[b], A);
    Vec coeff = ginv * comp;
    for (int a = 0; a < d; ++a) w -= coeff[a] * j.d1[a];
    for (const AmbientVector& prev : out) w -= inner(w, prev, A) * prev;
    double nw = norm(w, A);
    if (nw < 0.5)
      throw FrameContinuityError(imm.name +
                                 ": reference normal degenerates at the stencil point");
    w *= 1.0 / nw;
    out.push_back(w);
  }
  return out;
}

std::vector<std::vector<AmbientVector>> normal_connection(const ImmersionDefinition& imm,
                                                          const Vec& u,
                                                          const JetOptions& opt) {
  const AmbientProduct& A = imm.target;
  const int d = imm.domain_dim;
  const double h = opt.h;

  Jet2 jc = compute_jet(imm, u, opt);
  FrameSample center = build_frames(jc, A);
  const int r = static_cast<int>(center.normal.size());

  std::vector<std::vector<AmbientVector>> out(d);
  for (int a = 0; a < d; ++a) {
    Vec up = u, um = u;
    up[a] += h;
    um[a] -= h;
    std::vector<AmbientVector> np = transported_normals(imm, up, center.normal, opt);
    std::vector<AmbientVector> nm = transported_normals(imm, um, center.normal, opt);
    out[a].reserve(r);
    for (int s = 0; s < r; ++s) {
      AmbientVector flat = (np[s] - nm[s]) * (1.0 / (2.0 * h));
      AmbientVector tang = tangent_project(jc.point, flat, A);
      // component inside the normal space = connection of the normal bundle
      AmbientVector conn = AmbientVector::zero(A);
      for (const AmbientVector& xi : center.normal) conn += inner(tang, xi, A) * xi;
      out[a].push_back(conn);
    }
  }
  return out;
}

}  // namespace prodimm
