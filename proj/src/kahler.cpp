#include "prodimm/kahler.hpp"

#include <cmath>

namespace prodimm {

namespace {

// index of the J-partner in an adapted frame, and the sign of J X_i.
inline int jpartner(int i) { return (i % 2 == 0) ? i + 1 : i - 1; }
inline double jsign(int i) { return (i % 2 == 0) ? 1.0 : -1.0; }

// Central difference along one axis with the same optional Richardson
// refinement the jet engine applies to second derivatives. Reach stays
// within h, so the chart inset budget is unchanged.
template <typename F>
Mat central_diff(F&& f, const Vec& u, int axis, const JetOptions& opt) {
  const double h = opt.h;
  Vec up = u, um = u;
  up[axis] += h;
  um[axis] -= h;
  Mat coarse = (f(up) - f(um)) / (2.0 * h);
  if (!opt.richardson) return coarse;
  Vec up2 = u, um2 = u;
  up2[axis] += 0.5 * h;
  um2[axis] -= 0.5 * h;
  Mat fine = (f(up2) - f(um2)) / h;
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

double j_square_residual(const Mat& J) {
  Mat s = J * J + Mat::Identity(J.rows(), J.cols());
  return s.norm();
}

double j_ortho_residual(const Mat& J, const Mat& g) {
  Mat s = J.transpose() * g * J - g;
  return s.cwiseAbs().maxCoeff();
}

double j_parallel_residual(const ImmersionDefinition& imm, const Vec& u,
                           const JetOptions& opt) {
  const int d = imm.domain_dim;
  std::vector<Mat> gamma = christoffels(imm, u, opt);
  Mat J = imm.jmat(u);

  double worst = 0.0;
  for (int a = 0; a < d; ++a) {
    Mat dJ = central_diff([&](const Vec& q) { return imm.jmat(q); }, u, a, opt);
    // (nabla_a J)^c_b = d_a J^c_b + Gamma^c_{ae} J^e_b - Gamma^e_{ab} J^c_e
    for (int c = 0; c < d; ++c)
      for (int b = 0; b < d; ++b) {
        double v = dJ(c, b);
        for (int e = 0; e < d; ++e)
          v += gamma[c](a, e) * J(e, b) - gamma[e](a, b) * J(c, e);
        worst = std::max(worst, std::abs(v));
      }
  }
  return worst;
}

KahlerResiduals kahler_residuals_at(const ImmersionDefinition& imm, const Vec& u,
                                    const JetOptions& opt) {
  KahlerResiduals kr;
  Mat J = imm.jmat(u);
  Mat g = metric_at(imm, u, opt);
  kr.square = j_square_residual(J);
  kr.ortho = j_ortho_residual(J, g);
  kr.parallel = j_parallel_residual(imm, u, opt);
  return kr;
}

FrameSample adapted_frame(const Jet2& jet, const FrameSample& fr, const Mat& g,
                          const Mat& jchart, const AmbientProduct& A) {
  const int d = static_cast<int>(fr.tangent.size());
  std::vector<Vec> accepted;  // chart components, g-orthonormal
  int cand = 0;
  while (static_cast<int>(accepted.size()) < d) {
    if (cand >= d)
      throw GeometryError("adapted frame: candidate supply exhausted (J incompatible?)");
    Vec w = fr.coord_to_frame.row(cand++).transpose();
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& v : accepted) w -= (w.transpose() * g * v)(0) * v;
    double q = (w.transpose() * g * w)(0);
    if (q < 1e-12) continue;
    w /= std::sqrt(q);
    accepted.push_back(w);
    accepted.push_back(jchart * w);  // exact partner, not re-orthonormalized
  }

  // Orthonormality of the J partners is inherited from the certification of
  // J; verify instead of silently trusting it.
  double gram_err = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double gij = (accepted[i].transpose() * g * accepted[j])(0);
      gram_err = std::max(gram_err, std::abs(gij - (i == j ? 1.0 : 0.0)));
    }
  if (gram_err > 1e-6)
    throw GeometryError("adapted frame: J is not an isometry of the induced metric here");

  FrameSample out;
  out.normal = fr.normal;
  out.coord_to_frame = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    out.coord_to_frame.row(i) = accepted[i].transpose();
    AmbientVector X = AmbientVector::zero(A);
    for (int a = 0; a < d; ++a) X += accepted[i][a] * jet.d1[a];
    out.tangent.push_back(X);
  }
  return out;
}

Mat standard_jframe(int dim) {
  Mat J = Mat::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) J(jpartner(j), j) = jsign(j);
  return J;
}

std::vector<Mat> christoffels(const ImmersionDefinition& imm, const Vec& u,
                              const JetOptions& opt) {
  const int d = imm.domain_dim;
  Mat g = metric_at(imm, u, opt);
  Mat ginv = g.inverse();

  std::vector<Mat> dg(d);
  for (int a = 0; a < d; ++a)
    dg[a] = central_diff([&](const Vec& q) { return metric_at(imm, q, opt); }, u, a, opt);

  // Gamma^l_{ab} = 1/2 g^{lm} (d_a g_mb + d_b g_ma - d_m g_ab)
  std::vector<Mat> gamma(d, Mat::Zero(d, d));
  for (int l = 0; l < d; ++l)
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) {
        double s = 0.0;
        for (int m = 0; m < d; ++m)
          s += ginv(l, m) * (dg[a](m, b) + dg[b](m, a) - dg[m](a, b));
        gamma[l](a, b) = 0.5 * s;
        gamma[l](b, a) = gamma[l](a, b);
      }
  return gamma;
}

const char* curvature_route_name(CurvatureRoute r) {
  switch (r) {
    case CurvatureRoute::IntrinsicFD: return "IntrinsicFD";
    case CurvatureRoute::GaussEquation: return "GaussEquation";
    default: return "KahlerIdentity";
  }
}

CurvaturePackage intrinsic_curvature_fd(const ImmersionDefinition& imm, const Vec& u,
                                        const FrameSample& fr, const JetOptions& opt) {
  const int d = imm.domain_dim;
  const double h = opt.h;
  Mat g = metric_at(imm, u, opt);
  std::vector<Mat> gamma = christoffels(imm, u, opt);

  // d_a Gamma^l_{bk} by central difference of the Christoffel field, with the
  // same optional Richardson refinement as the scalar helper above.
  std::vector<std::vector<Mat>> dgamma(d);
  for (int a = 0; a < d; ++a) {
    auto diff_at = [&](double step) {
      Vec up = u, um = u;
      up[a] += step;
      um[a] -= step;
      std::vector<Mat> gp = christoffels(imm, up, opt);
      std::vector<Mat> gm = christoffels(imm, um, opt);
      std::vector<Mat> out(d);
      for (int l = 0; l < d; ++l) out[l] = (gp[l] - gm[l]) / (2.0 * step);
      return out;
    };
    dgamma[a] = diff_at(h);
    if (opt.richardson) {
      std::vector<Mat> fine = diff_at(0.5 * h);
      for (int l = 0; l < d; ++l)
        dgamma[a][l] = (4.0 * fine[l] - dgamma[a][l]) / 3.0;
    }
  }

  // R^l_{abk} = d_a Gamma^l_{bk} - d_b Gamma^l_{ak}
  //           + Gamma^l_{am} Gamma^m_{bk} - Gamma^l_{bm} Gamma^m_{ak}
  Riem4 coord(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double v = dgamma[a][l](b, k) - dgamma[b][l](a, k);
          for (int m = 0; m < d; ++m)
            v += gamma[l](a, m) * gamma[m](b, k) - gamma[l](b, m) * gamma[m](a, k);
          coord.at(a, b, k, l) = v;  // upper last index for now
        }

  // lower the last index, then push through the frame components
  Riem4 lowered(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int k = 0; k < d; ++k)
        for (int dd = 0; dd < d; ++dd) {
          double v = 0.0;
          for (int l = 0; l < d; ++l) v += g(dd, l) * coord.at(a, b, k, l);
          lowered.at(a, b, k, dd) = v;
        }

  const Mat& W = fr.coord_to_frame;
  CurvaturePackage pkg;
  pkg.route = CurvatureRoute::IntrinsicFD;
  pkg.riem = Riem4(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double v = 0.0;
          for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
              for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e)
                  v += W(i, a) * W(j, b) * W(k, c) * W(l, e) * lowered.at(a, b, c, e);
          pkg.riem.at(i, j, k, l) = v;
        }

  pkg.ric = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      double v = 0.0;
      for (int i = 0; i < d; ++i) v += pkg.riem.at(i, j, k, i);
      pkg.ric(j, k) = v;
    }
  pkg.scal = pkg.ric.trace();
  return pkg;
}

CurvaturePackage ricci_via_gauss(const GeometrySample& gs, const ProductTensors& pt,
                                 const AmbientProduct& A) {
  const int d = gs.dim;
  const double c1 = A.f1.curvature;
  const double c2 = A.f2.curvature;
  const Mat& R = pt.rmat;

  CurvaturePackage pkg;
  pkg.route = CurvatureRoute::GaussEquation;
  pkg.riem = Riem4(d);
  auto del = [](int i, int j) { return i == j ? 1.0 : 0.0; };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double v = c1 * (del(j, k) * del(i, l) - del(i, k) * del(j, l)
                           - R(j, k) * del(i, l) + del(i, k) * R(j, l)
                           - del(j, k) * R(i, l) + R(i, k) * del(j, l));
          v += (c1 + c2) * (R(j, k) * R(i, l) - R(i, k) * R(j, l));
          v += inner(gs.alpha(i, l), gs.alpha(j, k), A)
               - inner(gs.alpha(j, l), gs.alpha(i, k), A);
          pkg.riem.at(i, j, k, l) = v;
        }

  // contracted form: ric = c1[(2n-1-trR) Id - (2n-2) R]
  //                      + (c1+c2)[trR R - R^2] + 2n <H, alpha> - alpha.alpha
  Mat ha = Mat::Zero(d, d), aa = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = j; k < d; ++k) {
      double hjk = inner(gs.mean_curvature, gs.alpha(j, k), A);
      double ajk = 0.0;
      for (int i = 0; i < d; ++i) ajk += inner(gs.alpha(j, i), gs.alpha(i, k), A);
      ha(j, k) = ha(k, j) = hjk;
      aa(j, k) = aa(k, j) = ajk;
    }
  pkg.ric = c1 * ((d - 1 - pt.trace_r) * Mat::Identity(d, d) - (d - 2) * R)
            + (c1 + c2) * (pt.trace_r * R - Mat(R * R)) + d * ha - aa;
  pkg.scal = pkg.ric.trace();
  return pkg;
}

CurvaturePackage ricci_via_kahler_identity(const GeometrySample& gs, const ProductTensors& pt,
                                           const AmbientProduct& A, double minimality_tol) {
  const int d = gs.dim;
  if (minimality_residual(gs, A) > minimality_tol)
    throw GeometryError("Kahler identity route requires a minimal sample");

  const double c1 = A.f1.curvature;
  const double c2 = A.f2.curvature;
  const Mat J = standard_jframe(d);
  const Mat& R = pt.rmat;
  Mat jrj = J.transpose() * R * J;        // <R J X_i, J X_j>
  Mat jrjr = J.transpose() * R * J * R;   // <R J X_i, J R X_i> on the diagonal

  CurvaturePackage pkg;
  pkg.route = CurvatureRoute::KahlerIdentity;
  pkg.ric = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    double uv = 0.0;  // sum_j <alpha(X_i, J X_j), alpha(X_j, J X_i)>
    for (int j = 0; j < d; ++j)
      uv += jsign(j) * jsign(i)
            * inner(gs.alpha(i, jpartner(j)), gs.alpha(j, jpartner(i)), A);
    double ai = c1 * (1.0 - R(i, i) - jrj(i, i)) + (c1 + c2) * jrjr(i, i);
    pkg.ric(i, i) = ai - uv;
  }
  pkg.scal = pkg.ric.trace();
  return pkg;
}

}  // namespace prodimm
