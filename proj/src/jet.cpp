#include "prodimm/jet.hpp"

#include <cmath>

namespace prodimm {

namespace {

void require_inside(const ImmersionDefinition& imm, const Vec& u, double reach) {
  if (!imm.chart.contains(u, reach))
    throw ChartBoundaryError(imm.name + ": stencil leaves the chart box at the sample");
}

AmbientVector eval_map(const ImmersionDefinition& imm, const Vec& u) {
  return imm.map(u);
}

// 4th-order central difference of the map along axis a.
AmbientVector fd_partial(const ImmersionDefinition& imm, const Vec& u, int a, double h) {
  Vec up = u, um = u, up2 = u, um2 = u;
  up[a] += h;
  um[a] -= h;
  up2[a] += 2.0 * h;
  um2[a] -= 2.0 * h;
  AmbientVector r = 8.0 * (eval_map(imm, up) - eval_map(imm, um));
  r -= eval_map(imm, up2) - eval_map(imm, um2);
  return r * (1.0 / (12.0 * h));
}

std::vector<AmbientVector> partials_at(const ImmersionDefinition& imm, const Vec& u, double h) {
  if (imm.dmap) return imm.dmap(u);
  std::vector<AmbientVector> d;
  d.reserve(imm.domain_dim);
  for (int a = 0; a < imm.domain_dim; ++a) d.push_back(fd_partial(imm, u, a, h));
  return d;
}

double sup_norm(const AmbientVector& v) {
  double s = 0.0;
  for (int i = 0; i < v.b1.size(); ++i) s = std::max(s, std::abs(v.b1[i]));
  for (int i = 0; i < v.b2.size(); ++i) s = std::max(s, std::abs(v.b2[i]));
  return s;
}

}  // namespace

std::vector<AmbientVector> first_partials(const ImmersionDefinition& imm, const Vec& u,
                                          const JetOptions& opt) {
  if (imm.dmap) return imm.dmap(u);
  require_inside(imm, u, 2.0 * opt.h);
  return partials_at(imm, u, opt.h);
}

Jet2 compute_jet(const ImmersionDefinition& imm, const Vec& u, const JetOptions& opt) {
  const int d = imm.domain_dim;
  const double h = opt.h;
  // d1 field is sampled at u +- h; the FD fallback for d1 reaches 2h further.
  require_inside(imm, u, imm.dmap ? h : 3.0 * h);

  Jet2 jet;
  jet.u = u;
  jet.point = eval_map(imm, u);
  jet.step_used = h;
  jet.d1 = partials_at(imm, u, h);

  // Second derivatives: central difference of the first-partial field at
  // steps h and h/2; d2[i][j] averages d_i d1_j with d_j d1_i so the stored
  // tensor is symmetric by construction.
  auto d2_at_step = [&](double s) {
    std::vector<std::vector<AmbientVector>> plus(d), minus(d);
    for (int a = 0; a < d; ++a) {
      Vec up = u, um = u;
      up[a] += s;
      um[a] -= s;
      plus[a] = partials_at(imm, up, h);
      minus[a] = partials_at(imm, um, h);
    }
    std::vector<AmbientVector> store(sym_count(d));
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        AmbientVector mixed = (plus[i][j] - minus[i][j]) + (plus[j][i] - minus[j][i]);
        store[sym_index(i, j)] = mixed * (1.0 / (4.0 * s));
      }
    return store;
  };

  std::vector<AmbientVector> coarse = d2_at_step(h);
  std::vector<AmbientVector> fine = d2_at_step(0.5 * h);

  jet.d2_store.resize(sym_count(d));
  double est = 0.0;
  for (int k = 0; k < sym_count(d); ++k) {
    AmbientVector gap = fine[k] - coarse[k];
    est = std::max(est, sup_norm(gap));
    if (opt.richardson) {
      // (4 F - C)/3 removes the h^2 term of the central difference.
      jet.d2_store[k] = (4.0 * fine[k] - coarse[k]) * (1.0 / 3.0);
    } else {
      jet.d2_store[k] = coarse[k];
    }
  }
  // |F - C| ~ (3/4) a h^2; scale to bound the error of what was returned.
  jet.error_estimate = opt.richardson ? est / 3.0 : est * (4.0 / 3.0);
  return jet;
}

Mat induced_metric(const Jet2& jet, const AmbientProduct& A) {
  const int d = static_cast<int>(jet.d1.size());
  Mat g(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      g(a, b) = inner(jet.d1[a], jet.d1[b], A);
      g(b, a) = g(a, b);
    }
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 1e-8 * hi))
    throw DegenerateImmersionError("induced metric is numerically singular");
  return g;
}

Mat metric_at(const ImmersionDefinition& imm, const Vec& u, const JetOptions& opt) {
  std::vector<AmbientVector> d1 = first_partials(imm, u, opt);
  const int d = static_cast<int>(d1.size());
  Mat g(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      g(a, b) = inner(d1[a], d1[b], imm.target);
      g(b, a) = g(a, b);
    }
  return g;
}

FrameSample build_frames(const Jet2& jet, const AmbientProduct& A) {
  const int d = static_cast<int>(jet.d1.size());
  const int m = A.total_dim();
  FrameSample fr;
  fr.coord_to_frame = Mat::Zero(d, d);

  // Tangent frame: MGS over the coordinate partials in input order, with a
  // second subtraction pass. Chart components are carried along so that
  // coord_to_frame stays exact with respect to the produced vectors.
  std::vector<Vec> comps;
  for (int k = 0; k < d; ++k) {
    AmbientVector v = jet.d1[k];
    Vec c = Vec::Zero(d);
    c[k] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < static_cast<int>(fr.tangent.size()); ++j) {
        double r = inner(v, fr.tangent[j], A);
        v -= r * fr.tangent[j];
        c -= r * comps[j];
      }
    double nv = norm(v, A);
    if (nv < 1e-10)
      throw DegenerateImmersionError("tangent frame collapsed during orthonormalization");
    v *= 1.0 / nv;
    c *= 1.0 / nv;
    fr.tangent.push_back(v);
    comps.push_back(c);
    fr.coord_to_frame.row(k) = c.transpose();
  }

  // Normal frame: project the flat standard basis onto the product tangent
  // space and orthogonalize against everything accepted so far. The form is
  // positive definite there, so Gram-Schmidt is safe even for a Lorentzian
  // factor. Deterministic candidate order.
  const int want = m - d;
  const int e1 = A.f1.embed_dim;
  const int flat = A.flat_dim();
  for (int cand = 0; cand < flat && static_cast<int>(fr.normal.size()) < want; ++cand) {
    AmbientVector e = AmbientVector::zero(A);
    if (cand < e1)
      e.b1[cand] = 1.0;
    else
      e.b2[cand - e1] = 1.0;
    AmbientVector w = tangent_project(jet.point, e, A);
    for (int pass = 0; pass < 2; ++pass) {
      for (const AmbientVector& t : fr.tangent) w -= inner(w, t, A) * t;
      for (const AmbientVector& nrm : fr.normal) w -= inner(w, nrm, A) * nrm;
    }
    double nw = norm(w, A);
    if (nw < 1e-6) continue;
    w *= 1.0 / nw;
    fr.normal.push_back(w);
  }
  if (static_cast<int>(fr.normal.size()) != want)
    throw DegenerateImmersionError("could not complete the normal frame");
  return fr;
}

}  // namespace prodimm
