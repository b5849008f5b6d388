#include "posicert/facial.hpp"

#include <cmath>
#include <limits>

#include "posicert/exact.hpp"

namespace posicert::exact {

namespace {

struct Echelon {
  Eigen::MatrixXd r;           // k × n, identity on pivot columns
  std::vector<Eigen::Index> pivots;
};

// Gauss-Jordan with complete pivoting over columns.
Echelon echelon(Eigen::MatrixXd r) {
  const auto k = r.rows();
  const auto n = r.cols();
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  Echelon out;
  for (Eigen::Index row = 0; row < k; ++row) {
    Eigen::Index best_r = row, best_c = -1;
    double best = 0;
    for (Eigen::Index i = row; i < k; ++i)
      for (Eigen::Index c = 0; c < n; ++c)
        if (!used[c] && std::abs(r(i, c)) > best) {
          best = std::abs(r(i, c));
          best_r = i;
          best_c = c;
        }
    if (best_c < 0) break;
    r.row(row).swap(r.row(best_r));
    r.row(row) /= r(row, best_c);
    for (Eigen::Index i = 0; i < k; ++i)
      if (i != row) r.row(i) -= r(i, best_c) * r.row(row);
    used[best_c] = true;
    out.pivots.push_back(best_c);
  }
  out.r = std::move(r);
  return out;
}

}  // namespace

std::vector<Face> rational_face_candidates(const Eigen::MatrixXd& q, double scale, const FaceOptions& options) {
  std::vector<Face> out;
  const auto n = q.rows();
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (q + q.transpose()));
  if (es.info() != Eigen::Success) return out;
  const Eigen::VectorXd& lam = es.eigenvalues();
  scale = std::max({scale, lam(n - 1), std::numeric_limits<double>::min()});
  const double floor = 1e-14 * scale;

  // Kernel = the s smallest eigenvalues, s chosen at the widest gap.
  Eigen::Index split = 0;
  double widest = 0;
  double level = floor;  // max |λ| over the candidate kernel
  for (Eigen::Index s = 1; s <= n; ++s) {
    if (lam(s - 1) > options.cutoff * scale) break;
    level = std::max(level, std::abs(lam(s - 1)));
    double next = s < n ? lam(s) : scale;
    double ratio = next / level;
    if (ratio >= options.min_gap && ratio > widest) {
      widest = ratio;
      split = s;
    }
  }
  if (split == 0) return out;

  Face face;
  face.kernel_dim = static_cast<std::size_t>(split);
  if (split == n) {
    face.complement = RationalMatrix(static_cast<std::size_t>(n), 0);
    out.push_back(std::move(face));
    return out;
  }

  Echelon ech = echelon(es.eigenvectors().leftCols(split).transpose());
  if (static_cast<Eigen::Index>(ech.pivots.size()) != split) return out;

  for (long bound : options.denominator_bounds) {
    RationalMatrix rat(static_cast<std::size_t>(split), static_cast<std::size_t>(n));
    Eigen::MatrixXd approx(split, n);
    for (Eigen::Index i = 0; i < split; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        rat(i, j) = best_rational(ech.r(i, j), Integer(bound));
        approx(i, j) = rat(i, j).get_d();
      }
    // The rounded echelon basis must match the numerical one entrywise.
    if ((approx - ech.r).cwiseAbs().maxCoeff() > options.vector_tolerance) continue;

    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (auto p : ech.pivots) is_pivot[p] = true;
    face.complement = RationalMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n - split));
    std::size_t col = 0;
    for (Eigen::Index c = 0; c < n; ++c) {
      if (is_pivot[c]) continue;
      face.complement(c, col) = 1;
      for (Eigen::Index i = 0; i < split; ++i) face.complement(ech.pivots[i], col) = -rat(i, c);
      ++col;
    }
    if (out.empty() || !(out.back().complement == face.complement)) out.push_back(face);
  }
  return out;
}

std::optional<Face> rational_face(const Eigen::MatrixXd& q, double scale, const FaceOptions& options) {
  auto all = rational_face_candidates(q, scale, options);
  if (all.empty()) return std::nullopt;
  return std::move(all.front());
}

}  // namespace posicert::exact
