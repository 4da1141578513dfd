#include "prodimm/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "prodimm/errors.hpp"

namespace prodimm {

namespace {

int thread_count() {
  const char* env = std::getenv("PRODIMM_THREADS");
  if (!env) return 1;
  int t = std::atoi(env);
  return std::clamp(t, 1, 64);
}

std::string point_string(const Vec& u) {
  std::string s = "(";
  for (int i = 0; i < u.size(); ++i) {
    if (i) s += ", ";
    s += format_double(u[i]);
  }
  return s + ")";
}

// max(0, lo-overshoot, hi-overshoot) of the spectrum of a symmetric matrix
// against [0, 1].
double unit_interval_violation(const Mat& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  return std::max({0.0, -lo, hi - 1.0});
}

}  // namespace

SampleEvaluation evaluate_sample(const ImmersionDefinition& imm, const Vec& u,
                                 const JetOptions& opt, const Tolerances& tol) {
  SampleEvaluation ev;
  ev.u = u;
  const AmbientProduct& A = imm.target;
  const int n = imm.kahler_n();
  try {
    Jet2 jet = compute_jet(imm, u, opt);
    ev.on_manifold = on_manifold_residual(jet.point, A);

    Mat g = induced_metric(jet, A);
    FrameSample raw = build_frames(jet, A);
    Mat jchart = imm.jmat(u);
    ev.kahler.square = j_square_residual(jchart);
    ev.kahler.ortho = j_ortho_residual(jchart, g);
    ev.kahler.parallel = j_parallel_residual(imm, u, opt);

    FrameSample fr = adapted_frame(jet, raw, g, jchart, A);
    GeometrySample gs = second_fundamental_form(jet, fr, A);
    ProductTensors pt = product_tensors(jet, fr, A);
    const int d = gs.dim;
    const int r = gs.normal_rank;

    ev.minimality = minimality_residual(gs, A);
    ev.pluriharmonic = pluriharmonic_residual(gs, A);
    ev.antipluriharmonic = antipluriharmonic_residual(gs, A);
    ev.gap = pluriharmonicity_gap(pt, A, n);
    ev.defects = defect_vectors(gs, A);
    ev.max_diff_norm_sq =
        ev.defects.diff_norms_sq.size() ? ev.defects.diff_norms_sq.maxCoeff() : 0.0;

    CurvaturePackage fd = intrinsic_curvature_fd(imm, u, fr, opt);
    CurvaturePackage gauss = ricci_via_gauss(gs, pt, A);
    ev.ric_gauss = gauss.ric;
    ev.scal_gauss = gauss.scal;
    ev.gauss_residual = (fd.ric - gauss.ric).cwiseAbs().maxCoeff();
    if (ev.minimality < tol.algebraic) {
      CurvaturePackage ki = ricci_via_kahler_identity(gs, pt, A, tol.algebraic);
      ev.ki_available = true;
      ev.ki_agreement =
          (gauss.ric.diagonal() - ki.ric.diagonal()).cwiseAbs().maxCoeff();
    }
    ev.defect_diff = defect_diff_identity_residual(ev.defects, ev.gap);
    ev.defect_sum =
        defect_sum_identity_residual(ev.defects, gauss.ric.diagonal(), pt, A, n);

    ev.trace_r = pt.trace_r;
    ev.norm_r_sq = pt.norm_r_sq;
    ev.rjjr = pt.rj_jr(standard_jframe(d));

    double viol = unit_interval_violation(pt.rmat);
    viol = std::max(viol, unit_interval_violation(pt.tmat));
    Mat rsum = pt.rmat + pt.rmat_tilde - Mat::Identity(d, d);
    viol = std::max(viol, rsum.cwiseAbs().maxCoeff());
    Mat tsum = pt.tmat + pt.kmat_tilde.transpose() * pt.kmat_tilde
               - Mat::Identity(r, r);
    viol = std::max(viol, tsum.cwiseAbs().maxCoeff());
    ev.spectral = viol;

    double asq = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) asq += inner(gs.alpha(i, j), gs.alpha(i, j), A);
    ev.alpha_norm_sq = asq;
    ev.ric_min = gauss.ric.diagonal().minCoeff();
    ev.ric_max = gauss.ric.diagonal().maxCoeff();

    ev.codazzi = codazzi_residual(imm, u, opt);
    ev.ricci_eq = ricci_eq_residual(imm, u, opt);
    ev.parallel_alpha = parallel_alpha_residual(imm, u, opt);

    const double c1 = A.f1.curvature;
    ev.m_ricci_sxr = ricci_margin_sxr(ev.ric_max, ev.trace_r, c1, d);
    ev.m_scalar_sxr = scalar_margin_sxr(ev.scal_gauss, ev.trace_r, c1, n);
    ev.m_ricci_sxh = ricci_margin_sxh(ev.ric_max, ev.trace_r, c1, d);
    ev.m_scalar_general = scalar_margin_general(ev.scal_gauss, pt, A, n);

    ev.rj_comm = rj_commutator_check(pt, A, n, tol.classifier);
  } catch (const GeometryError& e) {
    ev.error = e.what();
  } catch (const std::exception& e) {
    ev.error = e.what();
  }
  return ev;
}

std::vector<Vec> make_grid(const ImmersionDefinition& imm,
                           const std::vector<int>& counts, double h) {
  const int d = imm.domain_dim;
  if (static_cast<int>(counts.size()) != d)
    throw ConfigError("grid has " + std::to_string(counts.size())
                      + " axes, immersion domain has " + std::to_string(d));
  const double inset = 4.0 * h;
  std::vector<std::vector<double>> axes(d);
  size_t total = 1;
  for (int a = 0; a < d; ++a) {
    if (counts[a] < 1)
      throw ConfigError("grid axis " + std::to_string(a) + " needs >= 1 point");
    double lo = imm.chart.lo[a] + inset;
    double hi = imm.chart.hi[a] - inset;
    if (!(lo <= hi))
      throw ConfigError("chart axis " + std::to_string(a)
                        + " too narrow for step " + format_double(h)
                        + " (needs width > " + format_double(2 * inset) + ")");
    if (counts[a] == 1) {
      axes[a].push_back(0.5 * (lo + hi));
    } else {
      for (int i = 0; i < counts[a]; ++i)
        axes[a].push_back(lo + (hi - lo) * i / (counts[a] - 1));
    }
    total *= static_cast<size_t>(counts[a]);
  }
  std::vector<Vec> grid;
  grid.reserve(total);
  std::vector<int> idx(d, 0);
  for (size_t k = 0; k < total; ++k) {
    Vec u(d);
    for (int a = 0; a < d; ++a) u[a] = axes[a][idx[a]];
    grid.push_back(std::move(u));
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < counts[a]) break;
      idx[a] = 0;
    }
  }
  return grid;
}

namespace {

struct RunContext {
  const RunConfig* rc = nullptr;
  bool entry_minimal = false;
  bool entry_pluri = false;
  double worst_minimality = 0.0;
  double worst_pluri = 0.0;
  SliceLabel label = SliceLabel::Generic;
  double c_slice = 0.0;
  bool slice_spherical = false;
  bool line2 = false;
  bool sxh_shape = false;
};

CheckKind kind_of(const std::string& nm) {
  static const std::vector<std::string> margins = {
      "ricci_margin_sxr",  "scalar_margin_sxr", "ricci_margin_sxh",
      "scalar_margin_general", "takahashi_lower", "takahashi_upper",
      "dajczer_rodriguez"};
  static const std::vector<std::string> classifiers = {
      "antipluriharmonic", "pluri_criterion", "rj_commutator", "slice",
      "obstruction", "equality_ricci_margin_sxr", "equality_ricci_margin_sxh"};
  if (std::find(margins.begin(), margins.end(), nm) != margins.end())
    return CheckKind::Margin;
  if (std::find(classifiers.begin(), classifiers.end(), nm) != classifiers.end())
    return CheckKind::Classifier;
  return CheckKind::Residual;
}

// Empty string = applicable; otherwise the reason it is not.
std::string skip_reason(const std::string& nm, const RunContext& cx) {
  const AmbientProduct& A = cx.rc->immersion.target;
  auto minimal_reason = [&]() {
    return "requires a minimal immersion (grid max |H| residual = "
           + format_double(cx.worst_minimality) + ")";
  };
  bool needs_minimal =
      nm == "antipluriharmonic" || nm == "defect_diff_identity"
      || nm == "defect_sum_identity" || nm == "kahler_ricci_agreement"
      || nm == "scalar_margin_general" || nm == "ricci_margin_sxr"
      || nm == "scalar_margin_sxr" || nm == "ricci_margin_sxh"
      || nm == "takahashi_lower" || nm == "takahashi_upper"
      || nm == "dajczer_rodriguez";
  if (nm == "ricci_margin_sxr" || nm == "scalar_margin_sxr") {
    if (!cx.line2) return "target is not Q x R";
    if (!(A.f1.curvature > 0.0)) return "first factor is not a sphere";
  }
  if (nm == "ricci_margin_sxh") {
    if (!cx.sxh_shape) return "target is not S_c x H_{-c}";
  }
  if (needs_minimal && !cx.entry_minimal) return minimal_reason();
  if (nm == "takahashi_lower" || nm == "takahashi_upper"
      || nm == "dajczer_rodriguez") {
    if (cx.label == SliceLabel::Generic)
      return "image is not contained in a single factor slice";
    if (!(cx.c_slice > 0.0)) return "slice factor is not a sphere";
  }
  if (nm == "rj_commutator" && !cx.entry_pluri)
    return "requires a pluriharmonic immersion (grid max residual = "
           + format_double(cx.worst_pluri) + ")";
  return "";
}

CheckResult sample_result(const std::string& nm, const SampleEvaluation& ev,
                          const RunContext& cx) {
  const Tolerances& tol = cx.rc->tol;
  CheckResult r;
  r.check = nm;
  auto resid = [&](double v, double t) {
    r.kind = CheckKind::Residual;
    r.value = v;
    r.tolerance = t;
    r.verdict = v < t ? Verdict::Pass : Verdict::Fail;
  };
  auto margin = [&](double v, double t) {
    r.kind = CheckKind::Margin;
    r.value = v;
    r.tolerance = t;
    r.verdict = v >= -t ? Verdict::Pass : Verdict::Fail;
  };
  if (nm == "on_manifold") resid(ev.on_manifold, tol.on_manifold);
  else if (nm == "kahler_square") resid(ev.kahler.square, tol.algebraic);
  else if (nm == "kahler_ortho") resid(ev.kahler.ortho, tol.algebraic);
  else if (nm == "kahler_parallel") resid(ev.kahler.parallel, tol.fd);
  else if (nm == "minimality") resid(ev.minimality, tol.algebraic);
  else if (nm == "pluriharmonic") resid(ev.pluriharmonic, tol.algebraic);
  else if (nm == "antipluriharmonic") {
    // For minimal immersions, anti-pluriharmonicity is equivalent to
    // attaining the scalar curvature bound; the two detections must agree.
    r.kind = CheckKind::Classifier;
    r.value = ev.antipluriharmonic;
    r.tolerance = tol.anti_equality;
    bool anti = ev.antipluriharmonic < tol.anti_equality;
    bool attained = std::abs(ev.m_scalar_general) < tol.equality;
    r.verdict = anti == attained ? Verdict::Pass : Verdict::Fail;
    r.notes = std::string(anti ? "anti-pluriharmonic" : "not anti-pluriharmonic")
              + (attained ? "; scalar bound attained" : "; scalar bound strict");
  } else if (nm == "pluri_criterion") {
    // The symmetry residual and the defect-difference norms must vanish
    // together; either both small or both large.
    r.kind = CheckKind::Classifier;
    r.value = ev.max_diff_norm_sq;
    r.tolerance = tol.algebraic;
    bool by_resid = ev.pluriharmonic < tol.algebraic;
    bool by_diff = ev.max_diff_norm_sq < tol.algebraic * tol.algebraic;
    r.verdict = by_resid == by_diff ? Verdict::Pass : Verdict::Fail;
    r.notes = by_resid ? "symmetry residual ~ 0" : "symmetry residual > 0";
    r.notes += by_diff ? "; defect differences ~ 0" : "; defect differences > 0";
  } else if (nm == "defect_diff_identity") resid(ev.defect_diff, tol.identity);
  else if (nm == "defect_sum_identity") resid(ev.defect_sum, tol.identity);
  else if (nm == "gauss_residual") resid(ev.gauss_residual, tol.fd);
  else if (nm == "kahler_ricci_agreement") resid(ev.ki_agreement, tol.route_ki);
  else if (nm == "spectral") resid(ev.spectral, tol.spectral);
  else if (nm == "codazzi") resid(ev.codazzi, tol.fd);
  else if (nm == "ricci_equation") resid(ev.ricci_eq, tol.fd);
  else if (nm == "parallel_alpha") resid(ev.parallel_alpha, tol.fd);
  else if (nm == "ricci_margin_sxr") margin(ev.m_ricci_sxr, tol.algebraic);
  else if (nm == "scalar_margin_sxr") margin(ev.m_scalar_sxr, tol.algebraic);
  else if (nm == "ricci_margin_sxh") margin(ev.m_ricci_sxh, tol.algebraic);
  else if (nm == "scalar_margin_general") margin(ev.m_scalar_general, tol.algebraic);
  else if (nm == "takahashi_lower") margin(ev.takahashi.lower, tol.algebraic);
  else if (nm == "takahashi_upper") margin(ev.takahashi.upper, tol.algebraic);
  else if (nm == "dajczer_rodriguez") margin(ev.m_dr, tol.algebraic);
  else if (nm == "rj_commutator") {
    r = ev.rj_comm;
    r.check = nm;
  } else {
    throw ConfigError("unknown per-sample check: " + nm);
  }
  return r;
}

CheckAggregate equality_aggregate(const std::string& nm, const RunContext& cx,
                                  const std::vector<SampleEvaluation>& evs,
                                  const std::vector<int>& ok) {
  const Tolerances& tol = cx.rc->tol;
  const std::string margin_check =
      nm == "equality_ricci_margin_sxr" ? "ricci_margin_sxr" : "ricci_margin_sxh";
  CheckAggregate ca;
  ca.check = nm;
  ca.kind = CheckKind::Classifier;
  std::string why = skip_reason(margin_check, cx);
  if (!why.empty()) {
    ca.verdict = Verdict::NotApplicable;
    ca.notes = why;
    return ca;
  }
  double min_margin = 0.0;
  double max_par = 0.0;
  bool first = true;
  for (int i : ok) {
    double m = nm == "equality_ricci_margin_sxr" ? evs[i].m_ricci_sxr
                                                 : evs[i].m_ricci_sxh;
    min_margin = first ? m : std::min(min_margin, m);
    max_par = std::max(max_par, evs[i].parallel_alpha);
    first = false;
  }
  ca.worst = min_margin;
  ca.applicable = static_cast<int>(ok.size());
  if (min_margin >= tol.equality) {
    ca.verdict = Verdict::NotApplicable;
    ca.notes = "bound not attained (min margin = " + format_double(min_margin) + ")";
    return ca;
  }
  // Equality is attained; the immersion must then sit in a first-factor
  // slice with parallel second fundamental form.
  bool slice_ok = cx.label == SliceLabel::FirstFactorSlice;
  bool par_ok = max_par < tol.anti_equality;
  if (slice_ok && par_ok) {
    ca.passed = ca.applicable;
    ca.verdict = Verdict::Pass;
  } else {
    ca.failed = ca.applicable;
    ca.verdict = Verdict::Fail;
  }
  ca.notes = std::string("bound attained; slice = ") + slice_label_name(cx.label)
             + "; max parallel-alpha residual = " + format_double(max_par);
  return ca;
}

CheckAggregate grid_level_aggregate(const std::string& nm, const RunContext& cx,
                                    const std::vector<SampleEvaluation>& evs,
                                    const std::vector<int>& ok) {
  const RunConfig& rc = *cx.rc;
  if (nm == "slice") {
    CheckAggregate ca;
    ca.check = nm;
    ca.kind = CheckKind::Classifier;
    ca.applicable = static_cast<int>(ok.size());
    double trmin = evs[ok.front()].trace_r, trmax = trmin;
    for (int i : ok) {
      trmin = std::min(trmin, evs[i].trace_r);
      trmax = std::max(trmax, evs[i].trace_r);
    }
    ca.worst = trmax;
    ca.notes = std::string(slice_label_name(cx.label)) + "; trR in ["
               + format_double(trmin) + ", " + format_double(trmax) + "]";
    if (rc.immersion.expected.slice
        && *rc.immersion.expected.slice != cx.label) {
      ca.failed = ca.applicable;
      ca.verdict = Verdict::Fail;
      ca.notes += std::string("; expected ")
                  + slice_label_name(*rc.immersion.expected.slice);
    } else {
      ca.passed = ca.applicable;
      ca.verdict = Verdict::Pass;
    }
    return ca;
  }
  if (nm == "obstruction") {
    CheckResult r = obstruction_report(rc.immersion.target, rc.immersion.kahler_n(),
                                       cx.entry_minimal, cx.entry_pluri);
    CheckAggregate ca;
    ca.check = nm;
    ca.kind = r.kind;
    ca.worst = r.value;
    ca.verdict = r.verdict;
    ca.notes = r.notes;
    if (r.verdict != Verdict::NotApplicable) {
      ca.applicable = static_cast<int>(ok.size());
      (r.verdict == Verdict::Pass ? ca.passed : ca.failed) = ca.applicable;
    }
    return ca;
  }
  return equality_aggregate(nm, cx, evs, ok);
}

std::vector<std::string> hypothesis_notes() {
  return {
      "assumed, not checked: the immersion is injective and complete on its chart",
      "slice membership is decided from sampled trR values only; containment "
      "away from the grid is not certified",
      "the complex structure is certified through pointwise residuals "
      "(square, compatibility, parallelism); integrability beyond them is "
      "not checked",
  };
}

void evaluate_grid(const RunConfig& rc, const std::vector<Vec>& grid,
                   std::vector<SampleEvaluation>& evs) {
  evs.resize(grid.size());
  const int T = thread_count();
  if (T <= 1 || grid.size() <= 1) {
    for (size_t i = 0; i < grid.size(); ++i)
      evs[i] = evaluate_sample(rc.immersion, grid[i], rc.jet, rc.tol);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(T);
  for (int t = 0; t < T; ++t) {
    pool.emplace_back([&, t]() {
      for (size_t i = t; i < grid.size(); i += T)
        evs[i] = evaluate_sample(rc.immersion, grid[i], rc.jet, rc.tol);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

Report run_checks(const RunConfig& rc) {
  validate_config(rc);
  Report rep;
  rep.schema_version = kReportSchemaVersion;
  rep.engine = kEngineName;
  rep.version = kEngineVersion;
  rep.config_echo = rc.echo;
  rep.notes = hypothesis_notes();

  std::vector<Vec> grid = make_grid(rc.immersion, rc.grid, rc.jet.h);
  rep.samples_total = static_cast<int>(grid.size());

  std::vector<SampleEvaluation> evs;
  evaluate_grid(rc, grid, evs);

  std::vector<int> ok;
  for (size_t i = 0; i < evs.size(); ++i) {
    if (evs[i].error.empty()) {
      ok.push_back(static_cast<int>(i));
    } else {
      rep.errors.push_back("sample " + std::to_string(i) + " at "
                           + point_string(grid[i]) + ": " + evs[i].error);
    }
  }
  rep.samples_failed = static_cast<int>(rep.errors.size());
  if (ok.empty()) {
    rep.aggregate_pass = false;
    return rep;
  }

  RunContext cx;
  cx.rc = &rc;
  const AmbientProduct& A = rc.immersion.target;
  std::vector<double> trs;
  trs.reserve(ok.size());
  for (int i : ok) {
    cx.worst_minimality = std::max(cx.worst_minimality, evs[i].minimality);
    cx.worst_pluri = std::max(cx.worst_pluri, evs[i].pluriharmonic);
    trs.push_back(evs[i].trace_r);
  }
  cx.entry_minimal = cx.worst_minimality < rc.tol.algebraic;
  cx.entry_pluri = cx.worst_pluri < rc.tol.algebraic;
  cx.label = classify_slice(trs, rc.immersion.domain_dim, rc.tol.classifier);
  cx.c_slice = cx.label == SliceLabel::FirstFactorSlice   ? A.f1.curvature
               : cx.label == SliceLabel::SecondFactorSlice ? A.f2.curvature
                                                           : 0.0;
  cx.slice_spherical = cx.label != SliceLabel::Generic && cx.c_slice > 0.0;
  cx.line2 = A.factor2_is_line();
  cx.sxh_shape = A.f1.curvature > 0.0 && A.f2.curvature < 0.0
                 && std::abs(A.f1.curvature + A.f2.curvature) <= 1e-12;

  if (cx.slice_spherical) {
    const int n = rc.immersion.kahler_n();
    for (int i : ok) {
      evs[i].takahashi =
          takahashi_margins(evs[i].ric_min, evs[i].ric_max, evs[i].alpha_norm_sq,
                            cx.c_slice, rc.immersion.domain_dim);
      evs[i].m_dr = dajczer_rodriguez_margin(evs[i].ric_max, cx.c_slice, n);
    }
  }

  std::vector<std::string> point_checks;
  std::vector<std::string> reasons;
  for (const std::string& nm : rc.checks) {
    if (is_grid_level_check(nm)) continue;
    point_checks.push_back(nm);
    reasons.push_back(skip_reason(nm, cx));
  }

  struct Acc {
    CheckKind kind = CheckKind::Residual;
    int pass = 0, fail = 0, na = 0;
    double worst = 0.0;
    bool first = true;
  };
  std::vector<Acc> acc(point_checks.size());

  for (int i : ok) {
    for (size_t k = 0; k < point_checks.size(); ++k) {
      if (!reasons[k].empty()) continue;
      CheckResult r = sample_result(point_checks[k], evs[i], cx);
      Acc& a = acc[k];
      a.kind = r.kind;
      if (r.verdict == Verdict::Pass) ++a.pass;
      else if (r.verdict == Verdict::Fail) ++a.fail;
      else ++a.na;
      double v = r.kind == CheckKind::Margin ? r.value : std::abs(r.value);
      if (a.first) {
        a.worst = v;
        a.first = false;
      } else {
        a.worst = r.kind == CheckKind::Margin ? std::min(a.worst, v)
                                              : std::max(a.worst, v);
      }
      SampleRow row;
      row.index = i;
      row.u = grid[i];
      row.result = std::move(r);
      rep.rows.push_back(std::move(row));
    }
  }

  size_t k = 0;
  for (const std::string& nm : rc.checks) {
    if (is_grid_level_check(nm)) {
      rep.aggregates.push_back(grid_level_aggregate(nm, cx, evs, ok));
      continue;
    }
    CheckAggregate ca;
    ca.check = nm;
    if (!reasons[k].empty()) {
      ca.kind = kind_of(nm);
      ca.verdict = Verdict::NotApplicable;
      ca.notes = reasons[k];
    } else {
      const Acc& a = acc[k];
      ca.kind = a.kind;
      ca.applicable = a.pass + a.fail + a.na;
      ca.passed = a.pass;
      ca.failed = a.fail;
      ca.worst = a.worst;
      if (a.fail > 0) ca.verdict = Verdict::Fail;
      else if (a.pass > 0) ca.verdict = Verdict::Pass;
      else ca.verdict = Verdict::NotApplicable;
      if (a.na > 0 && a.fail == 0 && a.pass == 0)
        ca.notes = "no sample matched either classifier branch";
    }
    rep.aggregates.push_back(std::move(ca));
    ++k;
  }

  rep.aggregate_pass = true;
  for (const CheckAggregate& ca : rep.aggregates)
    if (ca.verdict == Verdict::Fail) rep.aggregate_pass = false;
  return rep;
}

const std::vector<std::string>& convergence_checks() {
  static const std::vector<std::string> v = {
      "gauss_residual", "codazzi", "ricci_equation", "parallel_alpha",
      "kahler_parallel"};
  return v;
}

namespace {

double convergence_residual(const std::string& check,
                            const ImmersionDefinition& imm, const Vec& u,
                            const JetOptions& o) {
  if (check == "codazzi") return codazzi_residual(imm, u, o);
  if (check == "ricci_equation") return ricci_eq_residual(imm, u, o);
  if (check == "parallel_alpha") return parallel_alpha_residual(imm, u, o);
  if (check == "kahler_parallel") return j_parallel_residual(imm, u, o);
  const AmbientProduct& A = imm.target;
  Jet2 jet = compute_jet(imm, u, o);
  Mat g = induced_metric(jet, A);
  FrameSample raw = build_frames(jet, A);
  FrameSample fr = adapted_frame(jet, raw, g, imm.jmat(u), A);
  GeometrySample gs = second_fundamental_form(jet, fr, A);
  ProductTensors pt = product_tensors(jet, fr, A);
  CurvaturePackage fd = intrinsic_curvature_fd(imm, u, fr, o);
  CurvaturePackage gauss = ricci_via_gauss(gs, pt, A);
  return (fd.ric - gauss.ric).cwiseAbs().maxCoeff();
}

}  // namespace

Report run_convergence(const RunConfig& rc, const std::string& check,
                       const std::vector<double>& hs) {
  if (hs.size() < 2)
    throw ConfigError("convergence needs at least two step sizes");
  for (double h : hs)
    if (!(h > 0.0)) throw ConfigError("step sizes must be positive");
  const auto& allowed = convergence_checks();
  if (std::find(allowed.begin(), allowed.end(), check) == allowed.end()) {
    std::string names;
    for (const std::string& nm : allowed) {
      if (!names.empty()) names += ", ";
      names += nm;
    }
    throw ConfigError("convergence supports: " + names);
  }

  Report rep;
  rep.schema_version = kReportSchemaVersion;
  rep.engine = kEngineName;
  rep.version = kEngineVersion;
  rep.config_echo = rc.echo;
  rep.convergence_check = check;
  {
    std::string joined;
    for (size_t i = 0; i < hs.size(); ++i) {
      if (i) joined += ",";
      joined += format_double(hs[i]);
    }
    rep.config_echo.emplace_back("convergence_check", check);
    rep.config_echo.emplace_back("convergence_h", joined);
  }
  rep.notes = hypothesis_notes();

  // One grid for every step, inset by the largest, so refinement is the only
  // moving part.
  const double hmax = *std::max_element(hs.begin(), hs.end());
  std::vector<Vec> grid = make_grid(rc.immersion, rc.grid, hmax);
  rep.samples_total = static_cast<int>(grid.size());

  const int T = thread_count();
  double prev_r = 0.0, prev_h = 0.0;
  bool first = true;
  for (double h : hs) {
    // The study refines the pipeline as configured; only the step moves.
    JetOptions o = rc.jet;
    o.h = h;
    std::vector<double> vals(grid.size(), 0.0);
    std::vector<std::string> errs(grid.size());
    auto work = [&](size_t i) {
      try {
        vals[i] = convergence_residual(check, rc.immersion, grid[i], o);
      } catch (const std::exception& e) {
        errs[i] = e.what();
      }
    };
    if (T <= 1 || grid.size() <= 1) {
      for (size_t i = 0; i < grid.size(); ++i) work(i);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(T);
      for (int t = 0; t < T; ++t)
        pool.emplace_back([&, t]() {
          for (size_t i = t; i < grid.size(); i += T) work(i);
        });
      for (auto& th : pool) th.join();
    }
    double worst = 0.0;
    bool any = false;
    for (size_t i = 0; i < grid.size(); ++i) {
      if (!errs[i].empty()) {
        rep.errors.push_back("h = " + format_double(h) + ", sample "
                             + std::to_string(i) + " at " + point_string(grid[i])
                             + ": " + errs[i]);
        continue;
      }
      worst = std::max(worst, vals[i]);
      any = true;
    }
    if (!any) {
      rep.samples_failed = static_cast<int>(rep.errors.size());
      rep.aggregate_pass = false;
      return rep;
    }
    ConvergenceRow row;
    row.h = h;
    row.residual = worst;
    if (!first)
      row.order = std::log(prev_r / worst) / std::log(prev_h / h);
    rep.convergence.push_back(row);
    prev_r = worst;
    prev_h = h;
    first = false;
  }
  rep.samples_failed = static_cast<int>(rep.errors.size());

  rep.aggregate_pass = true;
  for (size_t i = 1; i < rep.convergence.size(); ++i)
    if (!(rep.convergence[i].residual < rep.convergence[i - 1].residual))
      rep.aggregate_pass = false;
  return rep;
}

int exit_code_for(const Report& r) {
  bool produced =
      !r.rows.empty() || !r.aggregates.empty() || !r.convergence.empty();
  if (!produced) return 2;
  return r.aggregate_pass ? 0 : 1;
}

}  // namespace prodimm
