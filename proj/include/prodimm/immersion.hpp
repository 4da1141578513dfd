#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prodimm/ambient.hpp"

namespace prodimm {

enum class SliceLabel { FirstFactorSlice, SecondFactorSlice, Generic };

const char* slice_label_name(SliceLabel s);

// What a catalog entry is known to satisfy; used to pin regression values.
struct ExpectedFlags {
  std::optional<bool> minimal;
  std::optional<bool> pluriharmonic;
  std::optional<bool> anti_pluriharmonic;
  std::optional<SliceLabel> slice;
  std::optional<double> trace_r;
  std::optional<double> ricci_diag;   // Einstein entries: Ric(X) for unit X
  std::optional<double> scalar;
  std::vector<std::string> equality_cases;  // check names expected to hit equality
};

struct Chart {
  Vec lo, hi;  // per-axis closed box

  bool contains(const Vec& u, double margin = 0.0) const;
};

// A closed-form immersion of an even-dimensional chart into the product.
// map is mandatory; dmap supplies exact first partials (preferred by the
// jet engine over finite differences); jmat gives the complex structure in
// chart coordinates, column action (J du_a = sum_b jmat(b,a) du_b).
struct ImmersionDefinition {
  std::string name;
  std::string summary;
  AmbientProduct target;
  int domain_dim = 0;  // 2n
  Chart chart;
  std::function<AmbientVector(const Vec&)> map;
  std::function<std::vector<AmbientVector>(const Vec&)> dmap;  // optional
  std::function<Mat(const Vec&)> jmat;
  ExpectedFlags expected;
  std::vector<int> default_grid;  // points per axis

  int kahler_n() const { return domain_dim / 2; }

  // 2n < m and 2n even; throws GeometryError on violation.
  void validate() const;
};

}  // namespace prodimm
