#pragma once

#include "posicert/problem.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace posicert {

struct PrecheckResult {
  enum class Kind { NoCounterexample, Counterexample };
  Kind kind = Kind::NoCounterexample;
  /// Counterexample point, or the sample where f was smallest.
  std::vector<double> point;
  double value = 0;
  std::string field = "f";  // "f" or "g"
  /// A kept sample where f = 0 exactly: f is not strictly positive there.
  std::optional<std::vector<double>> zero;
  std::size_t sampled = 0;
  std::size_t kept = 0;     // samples satisfying every h_i >= 0
};

/// Looks for a nonzero point of the constraint set where f < 0, or g <= 0
/// in modes where g enters the identity. Exact zeros of f are recorded
/// separately.
///
/// Homogeneous problems sample each grading block on its unit sphere
/// (normalized Gaussian draws) plus, for a single block, a grid of 21 points
/// per hyperspherical angle. Inhomogeneous problems sample Gaussian points
/// and a grid on [-2, 2]^n. Signs are decided exactly at the sampled points.
PrecheckResult positivity_precheck(const ProblemSpec& spec, unsigned samples = 1000, std::uint64_t seed = 0);

}  // namespace posicert
