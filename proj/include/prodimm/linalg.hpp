#pragma once

#include <Eigen/Dense>
#include <utility>

namespace prodimm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Packed index for symmetric pair storage, i <= j.
inline int sym_index(int i, int j) {
  if (i > j) std::swap(i, j);
  return j * (j + 1) / 2 + i;
}

inline int sym_count(int n) { return n * (n + 1) / 2; }

}  // namespace prodimm
