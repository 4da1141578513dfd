#pragma once

#include <string>
#include <vector>

#include "prodimm/config.hpp"

namespace prodimm {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kEngineName = "prodimm";
inline constexpr const char* kEngineVersion = "1.0.0";

// Everything measured at one chart point. Every field the formulas define is
// filled; whether a given check *applies* is decided once per run, after the
// whole grid is known (minimality, pluriharmonicity and slice position are
// properties of the immersion, not of a sample).
struct SampleEvaluation {
  Vec u;
  std::string error;  // nonempty: evaluation threw; remaining fields unset

  double on_manifold = 0.0;
  KahlerResiduals kahler;
  double minimality = 0.0;
  double pluriharmonic = 0.0;
  double antipluriharmonic = 0.0;
  double gap = 0.0;  // closed-form pluriharmonicity defect
  DefectVectors defects;
  double max_diff_norm_sq = 0.0;
  double defect_diff = 0.0;
  double defect_sum = 0.0;

  Mat ric_gauss;
  double scal_gauss = 0.0;
  double gauss_residual = 0.0;  // intrinsic FD Ricci vs Gauss-route Ricci
  bool ki_available = false;
  double ki_agreement = 0.0;

  double trace_r = 0.0;
  double norm_r_sq = 0.0;
  double rjjr = 0.0;   // <RJ, JR>
  double spectral = 0.0;
  double alpha_norm_sq = 0.0;
  double ric_min = 0.0, ric_max = 0.0;  // adapted-frame Ricci diagonal range

  double codazzi = 0.0;
  double ricci_eq = 0.0;
  double parallel_alpha = 0.0;

  double m_ricci_sxr = 0.0;
  double m_scalar_sxr = 0.0;
  double m_ricci_sxh = 0.0;
  double m_scalar_general = 0.0;
  // Slice bounds depend on which factor the image sits in; filled during
  // aggregation once the slice label is known.
  TakahashiMargins takahashi;
  double m_dr = 0.0;

  CheckResult rj_comm;
};

SampleEvaluation evaluate_sample(const ImmersionDefinition& imm, const Vec& u,
                                 const JetOptions& opt, const Tolerances& tol);

// Row-major sample grid (last axis fastest) over the chart shrunk by 4h per
// side, the reach of the widest stencil. A 1-point axis samples its midpoint.
std::vector<Vec> make_grid(const ImmersionDefinition& imm,
                           const std::vector<int>& counts, double h);

// Full battery: phase one evaluates every grid point (parallel across
// PRODIMM_THREADS, deterministic), phase two decides applicability, emits
// per-sample rows for applicable checks only, the four grid-level results,
// and one aggregate per requested check (NotApplicable is reported, not
// skipped).
Report run_checks(const RunConfig& rc);

// Residual-vs-step study for one FD-backed check. No extrapolation, and all
// steps share one grid (inset by the largest) so the h-dependence is the only
// thing that moves. Passes iff the residual strictly decreases down the list.
Report run_convergence(const RunConfig& rc, const std::string& check,
                       const std::vector<double>& hs);

// Names accepted by run_convergence.
const std::vector<std::string>& convergence_checks();

// 0 aggregate Pass; 1 some check failed; 2 nothing could be evaluated.
int exit_code_for(const Report& r);

}  // namespace prodimm
