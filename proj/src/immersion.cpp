#include "prodimm/immersion.hpp"

namespace prodimm {

const char* slice_label_name(SliceLabel s) {
  switch (s) {
    case SliceLabel::FirstFactorSlice: return "FirstFactorSlice";
    case SliceLabel::SecondFactorSlice: return "SecondFactorSlice";
    default: return "Generic";
  }
}

bool Chart::contains(const Vec& u, double margin) const {
  if (u.size() != lo.size()) return false;
  for (int a = 0; a < u.size(); ++a)
    if (u[a] < lo[a] + margin || u[a] > hi[a] - margin) return false;
  return true;
}

void ImmersionDefinition::validate() const {
  if (domain_dim < 2 || domain_dim % 2 != 0)
    throw GeometryError(name + ": domain dimension must be even and >= 2");
  if (domain_dim >= target.total_dim())
    throw GeometryError(name + ": need dim M < dim of the product target");
  if (chart.lo.size() != domain_dim || chart.hi.size() != domain_dim)
    throw GeometryError(name + ": chart box does not match domain dimension");
  for (int a = 0; a < domain_dim; ++a)
    if (!(chart.lo[a] < chart.hi[a]))
      throw GeometryError(name + ": empty chart box");
  if (!map) throw GeometryError(name + ": missing map");
  if (!jmat) throw GeometryError(name + ": missing complex structure");
}

}  // namespace prodimm
