#include "posicert/sdp.hpp"

#include "schur_terms.hpp"

namespace posicert::sdp {

Eigen::MatrixXd schur_complement_reference(const Problem& problem, const std::vector<Eigen::MatrixXd>& w) {
  const auto m = static_cast<Eigen::Index>(problem.constraints.size());
  Eigen::MatrixXd out(m, m);
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index l = k; l < m; ++l) {
      double v = detail::schur_entry(problem.constraints[k], problem.constraints[l], w);
      out(k, l) = v;
      out(l, k) = v;
    }
  return out;
}

}  // namespace posicert::sdp
