#include <stdexcept>

#include "posicert/sdp.hpp"

namespace posicert::sdp {

double min_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("min_eigenvalue: matrix is not square");
  if (m.size() == 0) throw std::invalid_argument("min_eigenvalue: empty matrix");
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("min_eigenvalue: matrix is not symmetric");
  // Householder tridiagonalization followed by implicit symmetric QR.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("min_eigenvalue: QR iteration did not converge");
  return es.eigenvalues()(0);
}

}  // namespace posicert::sdp
