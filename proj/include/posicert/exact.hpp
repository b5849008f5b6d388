#pragma once

// Numeric Gram solution -> exact rational Gram matrices.
// Round entrywise, project onto the affine constraint space in exact
// arithmetic, and prove positive semidefiniteness by a rational LDLᵀ.

#include "posicert/gram.hpp"
#include "posicert/matrix.hpp"
#include "posicert/polynomial.hpp"

#include <Eigen/Dense>

#include <optional>
#include <variant>
#include <vector>

namespace posicert::exact {

/// Closest rational with denominator at most `max_denominator`
/// (continued-fraction convergents and the final semiconvergent).
Rational best_rational(double value, const Integer& max_denominator);

/// Symmetrizes q, then rounds each entry with best_rational.
RationalMatrix round_to_rational(const Eigen::MatrixXd& q, const Integer& max_denominator);

struct Inconsistent {
  Monomial monomial;  // constraint whose row reduced to 0 = nonzero
};

/// Indices of a maximal linearly independent subset of the constraint rows,
/// chosen greedily in order by exact sparse elimination. Free-term columns
/// take part in the elimination.
std::variant<std::vector<std::size_t>, Inconsistent> independent_rows(const gram::GramSystem& system);

/// Orthogonal (Frobenius) projection of the stacked symmetric matrices onto
/// {Q : ⟨A_k, Q⟩ = b_k for all k}. Requires a system without free terms.
std::variant<std::vector<RationalMatrix>, Inconsistent> project_to_constraints(
    const std::vector<RationalMatrix>& q, const gram::GramSystem& system);

/// Solves A x = b for square nonsingular rational A by fraction-free
/// (Bareiss) elimination on the row-scaled integer matrix.
/// Throws std::domain_error if A is singular.
std::vector<Rational> solve_fraction_free(const RationalMatrix& a, const std::vector<Rational>& b);

struct Ldlt {
  RationalMatrix l;        // unit lower triangular
  std::vector<Rational> d; // nonnegative
};
struct Indefinite {
  std::size_t pivot;
};

/// Q = L·D·Lᵀ with D ⪰ 0, or Indefinite when a pivot is negative or a zero
/// pivot has a nonzero remaining column.
std::variant<Ldlt, Indefinite> exact_ldlt(const RationalMatrix& q);

struct WeightedSquare {
  Rational weight;
  Polynomial poly;
  friend bool operator==(const WeightedSquare&, const WeightedSquare&) = default;
};

/// cᵀ(L D Lᵀ)c = Σ_j D_jj · (Σ_i L_ij c_i)², zero weights dropped.
std::vector<WeightedSquare> extract_sos(const Ldlt& factor, const std::vector<Polynomial>& gram_vector);

double frobenius_distance(const std::vector<RationalMatrix>& a, const std::vector<Eigen::MatrixXd>& b);

}  // namespace posicert::exact
