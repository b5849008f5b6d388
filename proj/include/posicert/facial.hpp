#pragma once

// Face restriction for Gram matrices that are forced to be singular (for
// instance when the target has real zeros). The numerical kernel of an
// optimal Gram matrix is rounded to a rational subspace through its reduced
// row echelon form; the returned complement W spans the remaining face, and
// the Gram vector c is replaced by Wᵀc.

#include "posicert/matrix.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace posicert::exact {

struct FaceOptions {
  /// Kernel eigenvalues must lie below cutoff·scale.
  double cutoff = 1e-4;
  /// Required ratio between the first kept and last dropped eigenvalue.
  double min_gap = 1e3;
  /// Largest entrywise change allowed when rounding the echelon kernel basis.
  double vector_tolerance = 1e-4;
  /// Denominator bounds tried, in order, when rounding the echelon basis.
  std::vector<long> denominator_bounds = {1, 2, 4, 6, 12, 60, 120, 840, 5040, 100000};
};

struct Face {
  RationalMatrix complement;  // n × (n - kernel_dim)
  std::size_t kernel_dim = 0;
};

/// Finds a rational basis of the orthogonal complement of the numerical
/// kernel of q. `scale` is the magnitude eigenvalues are compared against
/// (typically the largest eigenvalue over all blocks). Returns nullopt when
/// there is no clear eigenvalue gap or no rational kernel was recognized.
std::optional<Face> rational_face(const Eigen::MatrixXd& q, double scale, const FaceOptions& options = {});

/// Every distinct rounding of the kernel that passes vector_tolerance, in
/// increasing denominator bound. Large bounds approximate anything to about
/// 1/bound², so callers should confirm a candidate against exact data.
std::vector<Face> rational_face_candidates(const Eigen::MatrixXd& q, double scale, const FaceOptions& options = {});

}  // namespace posicert::exact
