#pragma once

#include <string>

#include "prodimm/catalog.hpp"
#include "prodimm/checks.hpp"
#include "prodimm/kahler.hpp"

namespace testutil {

using namespace prodimm;

// Full pointwise pipeline for one catalog entry: jet, adapted frame, second
// fundamental form, product tensors.
struct Bundle {
  ImmersionDefinition imm;
  AmbientProduct A;
  Vec u;
  Jet2 jet;
  Mat g;
  FrameSample frame;
  GeometrySample gs;
  ProductTensors pt;
};

inline Bundle bundle_at(const std::string& entry, const Vec& u, JetOptions opt = {}) {
  Bundle b;
  b.imm = find_entry(entry);
  b.A = b.imm.target;
  b.u = u;
  b.jet = compute_jet(b.imm, u, opt);
  b.g = induced_metric(b.jet, b.A);
  FrameSample raw = build_frames(b.jet, b.A);
  b.frame = adapted_frame(b.jet, raw, b.g, b.imm.jmat(u), b.A);
  b.gs = second_fundamental_form(b.jet, b.frame, b.A);
  b.pt = product_tensors(b.jet, b.frame, b.A);
  return b;
}

inline Vec v2(double a, double b) {
  Vec u(2);
  u << a, b;
  return u;
}

inline Vec v4(double a, double b, double c, double d) {
  Vec u(4);
  u << a, b, c, d;
  return u;
}

inline double max_alpha_norm(const GeometrySample& gs, const AmbientProduct& A) {
  double m = 0.0;
  for (int i = 0; i < gs.dim; ++i)
    for (int j = i; j < gs.dim; ++j) m = std::max(m, norm(gs.alpha(i, j), A));
  return m;
}

}  // namespace testutil
