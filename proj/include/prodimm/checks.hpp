#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prodimm/kahler.hpp"

namespace prodimm {

enum class CheckKind { Residual, Margin, Classifier };
enum class Verdict { Pass, Fail, NotApplicable };

const char* check_kind_name(CheckKind k);
const char* verdict_name(Verdict v);

// Canonical check names, in report order. The tail entries (slice,
// obstruction, equality_*) are grid-level: they aggregate over all samples
// and never appear as per-sample rows.
const std::vector<std::string>& check_registry();
bool is_grid_level_check(const std::string& name);

struct CheckResult {
  std::string check;
  CheckKind kind = CheckKind::Residual;
  double value = 0.0;  // |residual| or signed margin; classifiers store a code
  double tolerance = 0.0;
  Verdict verdict = Verdict::NotApplicable;
  std::string notes;
};

// Default tolerances of the battery.
struct Tolerances {
  double on_manifold = 1e-9;
  double algebraic = 1e-6;   // pointwise algebra on exact first-order data
  double fd = 1e-4;          // anything built on stacked finite differences
  double spectral = 1e-8;    // eigenvalue range slack for R and T
  double classifier = 1e-6;  // |trR| resp. |trR - 2n| for slice detection
  double equality = 1e-4;    // margin size that counts as an equality case
  double anti_equality = 1e-5;
  double identity = 1e-6;    // the two defect identities
  double route_ki = 1e-7;    // Gauss vs complex-structure Ricci diagonal
};

// ---- pointwise extrinsic symmetry residuals (adapted frame) -------------

// max_{i,j} ||alpha(X_i, J X_j) - alpha(J X_i, X_j)||
double pluriharmonic_residual(const GeometrySample& gs, const AmbientProduct& A);

// max_{i,j} ||alpha(X_i, J X_j) + alpha(J X_i, X_j)||
double antipluriharmonic_residual(const GeometrySample& gs, const AmbientProduct& A);

// 4 c1 (n-1)(n - trR) + (c1+c2)((trR)^2 - ||R||^2 - <RJ,JR>); vanishes
// exactly when a minimal Kahler immersion is pluriharmonic.
double pluriharmonicity_gap(const ProductTensors& pt, const AmbientProduct& A, int n);

// ---- defect vectors and the two identities tied to them -----------------

// u_i = (alpha(X_i, J X_1), ..., alpha(X_i, J X_2n)) in the direct sum of
// normal spaces; v_i the transposed family. Norms only; the vectors
// themselves never need materializing.
struct DefectVectors {
  Vec u_norms_sq, v_norms_sq, uv_dots, diff_norms_sq, sum_norms_sq;
};

DefectVectors defect_vectors(const GeometrySample& gs, const AmbientProduct& A);

// Ricci curvature coefficients of the target's contribution along X_i:
//   a = c1(1 - <RX,X> - <RJX,JX>) + (c1+c2) <RJX, JRX>
//   b = c1((2n-1) - trR - 2(n-1)<RX,X>)  + (c1+c2)(<RX,X> trR - ||RX||^2)
//   c = same as b with X replaced by JX.
struct RicciCoefficients {
  double a = 0.0, b = 0.0, c = 0.0;
};
RicciCoefficients ricci_coefficients(const ProductTensors& pt, const AmbientProduct& A,
                                     int n, int i);

// |(1/2) sum_i |u_i - v_i|^2 - pluriharmonicity gap|
double defect_diff_identity_residual(const DefectVectors& dv, double gap);

// max_i | |u_i + v_i|^2 - (-4 Ric(X_i) + 2 a_i + b_i + c_i) |, adapted
// frame, Ricci diagonal supplied by the Gauss route.
double defect_sum_identity_residual(const DefectVectors& dv, const Vec& ric_diag,
                                    const ProductTensors& pt, const AmbientProduct& A, int n);

// ---- classifiers ---------------------------------------------------------

SliceLabel classify_slice(const std::vector<double>& trace_r_samples, int dim,
                          double tol = 1e-6);

// For Q x R targets: (c < 0 and minimal) or (c > 0 and pluriharmonic)
// forces n = 1; verdict records whether the catalog/sampled data obeys it.
CheckResult obstruction_report(const AmbientProduct& A, int n, bool minimal,
                               bool pluriharmonic);

// Consistency of the two exceptional commutation relations:
// RJ + JR = 0 forces trR = 0 and (c1 = 0 or n = 1);
// RJ + JR = 2J forces trR = 2n and (c2 = 0 or n = 1);
// anything else is NotApplicable. Pre: pluriharmonic immersion.
CheckResult rj_commutator_check(const ProductTensors& pt, const AmbientProduct& A, int n,
                                double tol = 1e-6);

// ---- curvature bounds (margins; bound minus attained value) -------------

// Ric <= c (dimM - ||dt^T||^2)/2 on minimal Kahler in S x R.
double ricci_margin_sxr(double ric_max, double trace_r, double c, int dim);

// Scal <= 2 n c (n - ||dt^T||^2) on minimal Kahler in S x R.
double scalar_margin_sxr(double scal, double trace_r, double c, int n);

// Ric <= c (dimM - trR)/2 on minimal Kahler in S^{m-k}_c x H^k_{-c}.
double ricci_margin_sxh(double ric_max, double trace_r, double c, int dim);

// Scal <= 2n c1 (n - trR) + ((c1+c2)/2)((trR)^2 - ||R||^2 + <RJ,JR>).
double scalar_margin_general(double scal, const ProductTensors& pt,
                             const AmbientProduct& A, int n);

// Classical slice bounds for minimal immersions in one sphere:
// ((N-1)/N)(c N - ||alpha||^2) <= Ric <= c (N-1), N = dim M.
struct TakahashiMargins {
  double lower = 0.0, upper = 0.0;
};
TakahashiMargins takahashi_margins(double ric_min, double ric_max, double alpha_norm_sq,
                                   double c, int dim);

// Ric <= c n for minimal Kahler M^{2n} in a sphere slice.
double dajczer_rodriguez_margin(double ric_max, double c, int n);

// ---- warped-product obstruction (closed-form, no sampling) ---------------

// 4 (n-1) (n lam - T2 mu), lam = (c - rho'^2)/rho^2, mu = lam + rho''/rho.
// Vanishes identically for n = 1. rho must be positive.
double warped_obstruction_lhs(int n, double c, double rho, double drho, double ddrho,
                              double t_norm_sq);

// ---- finite-difference identity residuals (third-order battery) ----------

// max over coordinate triples of || (nabla_a alpha)(b,c) - (nabla_b alpha)(a,c)
//   - c1 (g_ac S d_b - g_bc S d_a) - (c1+c2)(<R d_b, d_c> S d_a - <R d_a, d_c> S d_b) ||
double codazzi_residual(const ImmersionDefinition& imm, const Vec& u,
                        const JetOptions& opt = {});

// max over pairs/normal indices of |< R^perp(d_a, d_b) xi_s, xi_r >
//   - <alpha(d_a, A_s d_b) - alpha(A_s d_a, d_b) + (c1+c2)(S d_a ^ S d_b) xi_s, xi_r>|
double ricci_eq_residual(const ImmersionDefinition& imm, const Vec& u,
                         const JetOptions& opt = {});

// max over coordinate triples of ||(nabla^perp_a alpha)(b,c)||
double parallel_alpha_residual(const ImmersionDefinition& imm, const Vec& u,
                               const JetOptions& opt = {});

}  // namespace prodimm
