#include "prodimm/checks.hpp"

#include <cmath>
#include <sstream>

namespace prodimm {

namespace {

inline int jpartner(int i) { return (i % 2 == 0) ? i + 1 : i - 1; }
inline double jsign(int i) { return (i % 2 == 0) ? 1.0 : -1.0; }

// alpha(X_i, J X_j) over an adapted frame, resolved through the pairing.
AmbientVector alpha_ij_j(const GeometrySample& gs, int i, int j) {
  return jsign(j) * gs.alpha(i, jpartner(j));
}

}  // namespace

const char* check_kind_name(CheckKind k) {
  switch (k) {
    case CheckKind::Residual: return "Residual";
    case CheckKind::Margin: return "Margin";
    default: return "Classifier";
  }
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    default: return "NotApplicable";
  }
}

const std::vector<std::string>& check_registry() {
  static const std::vector<std::string> names = {
      "on_manifold",       "kahler_square",
      "kahler_ortho",      "kahler_parallel",
      "minimality",        "pluriharmonic",
      "antipluriharmonic", "pluri_criterion",
      "defect_diff_identity", "defect_sum_identity",
      "gauss_residual",    "kahler_ricci_agreement",
      "spectral",          "codazzi",
      "ricci_equation",    "parallel_alpha",
      "ricci_margin_sxr",  "scalar_margin_sxr",
      "ricci_margin_sxh",  "scalar_margin_general",
      "takahashi_lower",   "takahashi_upper",
      "dajczer_rodriguez", "rj_commutator",
      "slice",             "obstruction",
      "equality_ricci_margin_sxr", "equality_ricci_margin_sxh",
  };
  return names;
}

bool is_grid_level_check(const std::string& name) {
  return name == "slice" || name == "obstruction" ||
         name == "equality_ricci_margin_sxr" || name == "equality_ricci_margin_sxh";
}

double pluriharmonic_residual(const GeometrySample& gs, const AmbientProduct& A) {
  double worst = 0.0;
  for (int i = 0; i < gs.dim; ++i)
    for (int j = 0; j < gs.dim; ++j) {
      AmbientVector gap = alpha_ij_j(gs, i, j) - alpha_ij_j(gs, j, i);
      worst = std::max(worst, norm(gap, A));
    }
  return worst;
}

double antipluriharmonic_residual(const GeometrySample& gs, const AmbientProduct& A) {
  double worst = 0.0;
  for (int i = 0; i < gs.dim; ++i)
    for (int j = 0; j < gs.dim; ++j) {
      AmbientVector s = alpha_ij_j(gs, i, j) + alpha_ij_j(gs, j, i);
      worst = std::max(worst, norm(s, A));
    }
  return worst;
}

double pluriharmonicity_gap(const ProductTensors& pt, const AmbientProduct& A, int n) {
  const double c1 = A.f1.curvature;
  const double c2 = A.f2.curvature;
  const Mat J = standard_jframe(static_cast<int>(pt.rmat.rows()));
  double tr = pt.trace_r;
  return 4.0 * c1 * (n - 1) * (n - tr)
         + (c1 + c2) * (tr * tr - pt.norm_r_sq - pt.rj_jr(J));
}

DefectVectors defect_vectors(const GeometrySample& gs, const AmbientProduct& A) {
  const int d = gs.dim;
  DefectVectors dv;
  dv.u_norms_sq = Vec::Zero(d);
  dv.v_norms_sq = Vec::Zero(d);
  dv.uv_dots = Vec::Zero(d);
  dv.diff_norms_sq = Vec::Zero(d);
  dv.sum_norms_sq = Vec::Zero(d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      AmbientVector ue = alpha_ij_j(gs, i, j);  // alpha(X_i, J X_j)
      AmbientVector ve = alpha_ij_j(gs, j, i);  // alpha(X_j, J X_i)
      dv.u_norms_sq[i] += inner(ue, ue, A);
      dv.v_norms_sq[i] += inner(ve, ve, A);
      dv.uv_dots[i] += inner(ue, ve, A);
      AmbientVector diff = ue - ve;
      AmbientVector sum = ue + ve;
      dv.diff_norms_sq[i] += inner(diff, diff, A);
      dv.sum_norms_sq[i] += inner(sum, sum, A);
    }
  }
  return dv;
}

RicciCoefficients ricci_coefficients(const ProductTensors& pt, const AmbientProduct& A,
                                     int n, int i) {
  const double c1 = A.f1.curvature;
  const double c2 = A.f2.curvature;
  const int d = static_cast<int>(pt.rmat.rows());
  const Mat J = standard_jframe(d);
  const Mat& R = pt.rmat;
  Mat jrj = J.transpose() * R * J;
  Mat r2 = R * R;
  Mat jr2j = J.transpose() * r2 * J;
  Mat jrjr = J.transpose() * R * J * R;
  double tr = pt.trace_r;

  RicciCoefficients rc;
  rc.a = c1 * (1.0 - R(i, i) - jrj(i, i)) + (c1 + c2) * jrjr(i, i);
  rc.b = c1 * ((2.0 * n - 1.0) - tr - 2.0 * (n - 1.0) * R(i, i))
         + (c1 + c2) * (R(i, i) * tr - r2(i, i));
  rc.c = c1 * ((2.0 * n - 1.0) - tr - 2.0 * (n - 1.0) * jrj(i, i))
         + (c1 + c2) * (jrj(i, i) * tr - jr2j(i, i));
  return rc;
}

double defect_diff_identity_residual(const DefectVectors& dv, double gap) {
  return std::abs(0.5 * dv.diff_norms_sq.sum() - gap);
}

double defect_sum_identity_residual(const DefectVectors& dv, const Vec& ric_diag,
                                    const ProductTensors& pt, const AmbientProduct& A,
                                    int n) {
  double worst = 0.0;
  for (int i = 0; i < dv.sum_norms_sq.size(); ++i) {
    RicciCoefficients rc = ricci_coefficients(pt, A, n, i);
    double rhs = -4.0 * ric_diag[i] + 2.0 * rc.a + rc.b + rc.c;
    worst = std::max(worst, std::abs(dv.sum_norms_sq[i] - rhs));
  }
  return worst;
}

SliceLabel classify_slice(const std::vector<double>& trace_r_samples, int dim, double tol) {
  double max_tr = 0.0, max_gap = 0.0;
  for (double tr : trace_r_samples) {
    max_tr = std::max(max_tr, std::abs(tr));
    max_gap = std::max(max_gap, std::abs(tr - dim));
  }
  if (max_tr < tol) return SliceLabel::FirstFactorSlice;
  if (max_gap < tol) return SliceLabel::SecondFactorSlice;
  return SliceLabel::Generic;
}

CheckResult obstruction_report(const AmbientProduct& A, int n, bool minimal,
                               bool pluriharmonic) {
  CheckResult r;
  r.check = "obstruction";
  r.kind = CheckKind::Classifier;
  if (!A.factor2_is_line() || !A.f1.curved()) {
    r.verdict = Verdict::NotApplicable;
    r.notes = "target is not Q x R";
    return r;
  }
  const double c = A.f1.curvature;
  bool premise = (c < 0.0 && minimal) || (c > 0.0 && pluriharmonic);
  r.value = static_cast<double>(n);
  if (!premise) {
    r.verdict = Verdict::Pass;
    r.notes = "premises not met; nothing is forced";
    return r;
  }
  if (n == 1) {
    r.verdict = Verdict::Pass;
    r.notes = c < 0.0 ? "minimal in H x R forces a surface; holds"
                      : "pluriharmonic in S x R forces a surface; holds";
  } else {
    r.verdict = Verdict::Fail;
    std::ostringstream os;
    os << "dimension obstruction violated: premises hold but n = " << n;
    r.notes = os.str();
  }
  return r;
}

CheckResult rj_commutator_check(const ProductTensors& pt, const AmbientProduct& A, int n,
                                double tol) {
  const int d = static_cast<int>(pt.rmat.rows());
  const Mat J = standard_jframe(d);
  Mat anti = pt.rmat * J + J * pt.rmat;
  double norm_anti = anti.cwiseAbs().maxCoeff();
  double norm_shift = (anti - 2.0 * J).cwiseAbs().maxCoeff();

  CheckResult r;
  r.check = "rj_commutator";
  r.kind = CheckKind::Classifier;
  const double c1 = A.f1.curvature;
  const double c2 = A.f2.curvature;
  if (norm_anti < tol) {
    bool dichotomy = (std::abs(c1) < tol) || (n == 1);
    bool trace_ok = std::abs(pt.trace_r) < tol;
    r.value = norm_anti;
    r.verdict = (dichotomy && trace_ok) ? Verdict::Pass : Verdict::Fail;
    r.notes = "RJ + JR = 0 branch: needs trR = 0 and (c1 = 0 or n = 1)";
  } else if (norm_shift < tol) {
    bool dichotomy = (std::abs(c2) < tol) || (n == 1);
    bool trace_ok = std::abs(pt.trace_r - d) < tol;
    r.value = norm_shift;
    r.verdict = (dichotomy && trace_ok) ? Verdict::Pass : Verdict::Fail;
    r.notes = "RJ + JR = 2J branch: needs trR = 2n and (c2 = 0 or n = 1)";
  } else {
    r.value = std::min(norm_anti, norm_shift);
    r.verdict = Verdict::NotApplicable;
    r.notes = "R neither anticommutes nor shift-commutes with J";
  }
  return r;
}

double ricci_margin_sxr(double ric_max, double trace_r, double c, int dim) {
  return 0.5 * c * (dim - trace_r) - ric_max;
}

double scalar_margin_sxr(double scal, double trace_r, double c, int n) {
  return 2.0 * n * c * (n - trace_r) - scal;
}

double ricci_margin_sxh(double ric_max, double trace_r, double c, int dim) {
  return 0.5 * c * (dim - trace_r) - ric_max;
}

double scalar_margin_general(double scal, const ProductTensors& pt,
                             const AmbientProduct& A, int n) {
  const double c1 = A.f1.curvature;
  const double c2 = A.f2.curvature;
  const Mat J = standard_jframe(static_cast<int>(pt.rmat.rows()));
  double tr = pt.trace_r;
  double bound = 2.0 * n * c1 * (n - tr)
                 + 0.5 * (c1 + c2) * (tr * tr - pt.norm_r_sq + pt.rj_jr(J));
  return bound - scal;
}

TakahashiMargins takahashi_margins(double ric_min, double ric_max, double alpha_norm_sq,
                                   double c, int dim) {
  TakahashiMargins m;
  double lower = (static_cast<double>(dim - 1) / dim) * (c * dim - alpha_norm_sq);
  double upper = c * (dim - 1);
  m.lower = ric_min - lower;
  m.upper = upper - ric_max;
  return m;
}

double dajczer_rodriguez_margin(double ric_max, double c, int n) {
  return c * n - ric_max;
}

double warped_obstruction_lhs(int n, double c, double rho, double drho, double ddrho,
                              double t_norm_sq) {
  if (!(rho > 0.0)) throw GeometryError("warped obstruction: rho must be positive");
  double lam = (c - drho * drho) / (rho * rho);
  double mu = lam + ddrho / rho;
  return 4.0 * (n - 1) * (n * lam - t_norm_sq * mu);
}

// ---------- finite-difference battery ------------------------------------

namespace {

struct LocalGeom {
  Jet2 jet;
  FrameSample fr;
  GeometrySample gs;
  Mat g;
};

LocalGeom local_geom(const ImmersionDefinition& imm, const Vec& u, const JetOptions& opt) {
  LocalGeom lg;
  lg.jet = compute_jet(imm, u, opt);
  lg.fr = build_frames(lg.jet, imm.target);
  lg.gs = second_fundamental_form(lg.jet, lg.fr, imm.target);
  lg.g = induced_metric(lg.jet, imm.target);
  return lg;
}

// <R d_a, d_b> over coordinates (factor-2 pairing of the pushforwards).
Mat coord_rmat(const Jet2& jet, const AmbientProduct& A) {
  const int d = static_cast<int>(jet.d1.size());
  Mat rc(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      rc(a, b) = A.f2.form(jet.d1[a].b2, jet.d1[b].b2);
      rc(b, a) = rc(a, b);
    }
  return rc;
}

// <S d_a, xi_s> = <dpi2 d_a, dpi2 xi_s>.
Mat coord_smat(const Jet2& jet, const FrameSample& fr, const AmbientProduct& A) {
  const int d = static_cast<int>(jet.d1.size());
  const int r = static_cast<int>(fr.normal.size());
  Mat sc(d, r);
  for (int a = 0; a < d; ++a)
    for (int s = 0; s < r; ++s) sc(a, s) = A.f2.form(jet.d1[a].b2, fr.normal[s].b2);
  return sc;
}

// Covariant derivative of the coordinate second fundamental form,
// cov[a](b,c) packed symmetric in (b,c). The alpha field is frame-free, so
// no gauge alignment is needed here.
std::vector<std::vector<AmbientVector>> alpha_covariant(const ImmersionDefinition& imm,
                                                        const LocalGeom& lg, const Vec& u,
                                                        const JetOptions& opt) {
  const AmbientProduct& A = imm.target;
  const int d = imm.domain_dim;
  const double h = opt.h;
  std::vector<Mat> gamma = christoffels(imm, u, opt);

  auto alpha_field = [&](const Vec& up) {
    LocalGeom n = local_geom(imm, up, opt);
    return n.gs.coord_alpha_store;
  };

  std::vector<std::vector<AmbientVector>> cov(d);
  for (int a = 0; a < d; ++a) {
    Vec up = u, um = u;
    up[a] += h;
    um[a] -= h;
    std::vector<AmbientVector> fp = alpha_field(up);
    std::vector<AmbientVector> fm = alpha_field(um);
    cov[a].resize(sym_count(d));
    for (int b = 0; b < d; ++b)
      for (int c = b; c < d; ++c) {
        AmbientVector flat = (fp[sym_index(b, c)] - fm[sym_index(b, c)]) * (1.0 / (2.0 * h));
        AmbientVector tang = tangent_project(lg.jet.point, flat, A);
        AmbientVector val = AmbientVector::zero(A);
        for (const AmbientVector& xi : lg.fr.normal) val += inner(tang, xi, A) * xi;
        for (int e = 0; e < d; ++e) {
          val -= gamma[e](a, b) * lg.gs.coord_alpha(e, c);
          val -= gamma[e](a, c) * lg.gs.coord_alpha(b, e);
        }
        cov[a][sym_index(b, c)] = val;
      }
  }
  return cov;
}

}  // namespace

double codazzi_residual(const ImmersionDefinition& imm, const Vec& u, const JetOptions& opt) {
  const AmbientProduct& A = imm.target;
  const int d = imm.domain_dim;
  const double c1 = A.f1.curvature;
  const double c12 = A.f1.curvature + A.f2.curvature;

  LocalGeom lg = local_geom(imm, u, opt);
  std::vector<std::vector<AmbientVector>> cov = alpha_covariant(imm, lg, u, opt);
  Mat rc = coord_rmat(lg.jet, A);
  Mat sc = coord_smat(lg.jet, lg.fr, A);
  const int r = static_cast<int>(lg.fr.normal.size());

  auto s_of = [&](int a) {
    AmbientVector v = AmbientVector::zero(A);
    for (int s = 0; s < r; ++s) v += sc(a, s) * lg.fr.normal[s];
    return v;
  };
  std::vector<AmbientVector> svec;
  svec.reserve(d);
  for (int a = 0; a < d; ++a) svec.push_back(s_of(a));

  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        AmbientVector lhs = cov[a][sym_index(b, c)] - cov[b][sym_index(a, c)];
        AmbientVector rhs = c1 * (lg.g(a, c) * svec[b] - lg.g(b, c) * svec[a])
                            + c12 * (rc(b, c) * svec[a] - rc(a, c) * svec[b]);
        worst = std::max(worst, norm(lhs - rhs, A));
      }
  return worst;
}

double parallel_alpha_residual(const ImmersionDefinition& imm, const Vec& u,
                               const JetOptions& opt) {
  const AmbientProduct& A = imm.target;
  const int d = imm.domain_dim;
  LocalGeom lg = local_geom(imm, u, opt);
  std::vector<std::vector<AmbientVector>> cov = alpha_covariant(imm, lg, u, opt);
  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = b; c < d; ++c)
        worst = std::max(worst, norm(cov[a][sym_index(b, c)], A));
  return worst;
}

double ricci_eq_residual(const ImmersionDefinition& imm, const Vec& u, const JetOptions& opt) {
  const AmbientProduct& A = imm.target;
  const int d = imm.domain_dim;
  const double h = opt.h;
  const double c12 = A.f1.curvature + A.f2.curvature;

  LocalGeom lg = local_geom(imm, u, opt);
  const int r = static_cast<int>(lg.fr.normal.size());
  Mat sc = coord_smat(lg.jet, lg.fr, A);
  const Mat& W = lg.fr.coord_to_frame;

  // q(b,i,s) = <alpha(d_b, X_i), xi_s>
  std::vector<Mat> q(r, Mat::Zero(d, d));
  for (int s = 0; s < r; ++s)
    for (int b = 0; b < d; ++b)
      for (int i = 0; i < d; ++i) {
        double v = 0.0;
        for (int c = 0; c < d; ++c)
          v += W(i, c) * inner(lg.gs.coord_alpha(b, c), lg.fr.normal[s], A);
        q[s](b, i) = v;
      }

  // Normal frames over the two-deep stencil: one differentiable field seeded
  // from the center normals, which it reproduces exactly at u. A pointwise
  // frame construction is not differentiable wherever its candidate pivoting
  // switches, and the double difference below would amplify such a kink.
  auto transported = [&](const Vec& up) {
    struct PointFrame {
      AmbientVector point;
      std::vector<AmbientVector> normal;
    };
    return PointFrame{imm.map(up), transported_normals(imm, up, lg.fr.normal, opt)};
  };

  // omega_c(s,t) at a stencil point: connection forms of the aligned field.
  auto omega_at = [&](const Vec& at, int cdir) {
    Vec up = at, um = at;
    up[cdir] += h;
    um[cdir] -= h;
    auto fp = transported(up);
    auto fm = transported(um);
    auto fc = transported(at);
    Mat w(r, r);
    for (int s = 0; s < r; ++s) {
      AmbientVector flat = (fp.normal[s] - fm.normal[s]) * (1.0 / (2.0 * h));
      AmbientVector tang = tangent_project(fc.point, flat, A);
      for (int t = 0; t < r; ++t) w(s, t) = inner(tang, fc.normal[t], A);
    }
    return w;
  };

  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      Vec uap = u, uam = u, ubp = u, ubm = u;
      uap[a] += h;
      uam[a] -= h;
      ubp[b] += h;
      ubm[b] -= h;
      Mat dwb = (omega_at(uap, b) - omega_at(uam, b)) / (2.0 * h);
      Mat dwa = (omega_at(ubp, a) - omega_at(ubm, a)) / (2.0 * h);
      Mat wa0 = omega_at(u, a);
      Mat wb0 = omega_at(u, b);
      Mat lhs = dwb - dwa + wb0 * wa0 - wa0 * wb0;

      for (int s = 0; s < r; ++s)
        for (int t = 0; t < r; ++t) {
          double rhs = 0.0;
          for (int i = 0; i < d; ++i)
            rhs += q[s](b, i) * q[t](a, i) - q[s](a, i) * q[t](b, i);
          rhs += c12 * (sc(b, s) * sc(a, t) - sc(a, s) * sc(b, t));
          worst = std::max(worst, std::abs(lhs(s, t) - rhs));
        }
    }
  return worst;
}

}  // namespace prodimm
