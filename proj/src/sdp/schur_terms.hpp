#pragma once

#include "posicert/sdp.hpp"

namespace posicert::sdp::detail {

// tr(S_ij W S_pq W) for symmetric unit matrices S_ij = E_ij + E_ji (i != j)
// or E_ii, scaled so both cases share one formula.
inline double pair_term(const Entry& a, const Entry& b, const Eigen::MatrixXd& w) {
  double factor = (a.row == a.col ? 1.0 : 2.0) * (b.row == b.col ? 1.0 : 2.0) * 0.5;
  return factor * (w(a.row, b.row) * w(a.col, b.col) + w(a.row, b.col) * w(a.col, b.row));
}

// ⟨A_k, W A_l W⟩ summed over blocks. Entries are visited in stored order so
// every caller produces the same floating point sum.
inline double schur_entry(const Constraint& ak, const Constraint& al, const std::vector<Eigen::MatrixXd>& w) {
  double sum = 0;
  for (const auto& a : ak.entries)
    for (const auto& b : al.entries)
      if (a.block == b.block) sum += a.value * b.value * pair_term(a, b, w[a.block]);
  return sum;
}

}  // namespace posicert::sdp::detail
