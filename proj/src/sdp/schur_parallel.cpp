#include "posicert/sdp.hpp"

#include <omp.h>

#include "schur_terms.hpp"

namespace posicert::sdp {

Eigen::MatrixXd schur_complement_parallel(const Problem& problem, const std::vector<Eigen::MatrixXd>& w,
                                          int threads) {
  const auto m = static_cast<Eigen::Index>(problem.constraints.size());
  Eigen::MatrixXd out(m, m);
  // Rows have decreasing work (upper triangle only), hence dynamic scheduling.
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index l = k; l < m; ++l) {
      double v = detail::schur_entry(problem.constraints[k], problem.constraints[l], w);
      out(k, l) = v;
      out(l, k) = v;
    }
  return out;
}

}  // namespace posicert::sdp
