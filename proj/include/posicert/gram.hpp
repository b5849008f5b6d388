#pragma once

// Gram-matrix formulation of the preordering identity
//   target = Σ_e (cᵀ Q_e c) · h^e + Σ_k u_k · φ_k
// where c is a block's Gram vector (basis monomials, optionally mixed by a
// rational face transform) and Q_e ⪰ 0.

#include "posicert/matrix.hpp"
#include "posicert/polynomial.hpp"

#include <optional>
#include <unordered_set>
#include <variant>
#include <vector>

namespace posicert::gram {

using MonomialSet = std::unordered_set<Monomial, MonomialHash>;

enum class BasisKind {
  Graded,            // every basis monomial has the exact per-block half degree
  TotalDegreeAtMost  // inhomogeneous: all monomials of total degree <= half
};

/// Symmetric matrix entry A(row, col) = A(col, row) = value, row <= col.
struct SymEntry {
  std::uint32_t row;
  std::uint32_t col;
  Rational value;
};

struct GramBlock {
  std::vector<bool> product_index;
  Polynomial multiplier;
  std::vector<Monomial> basis;  // ascending graded-lex
  bool active = false;
  /// basis.size() × dim() mixing matrix; the Gram vector is transformᵀ·basis.
  std::optional<RationalMatrix> transform;
  std::vector<Polynomial> gram_vector;

  std::size_t dim() const { return gram_vector.size(); }
};

struct GramConstraint {
  Monomial monomial;
  Rational rhs;
  std::vector<std::vector<SymEntry>> blocks;  // one list per GramSystem block
  std::vector<Rational> free;                 // coefficient of each free term
};

struct GramSystem {
  Polynomial target;
  std::vector<GramBlock> blocks;
  std::vector<Polynomial> free_terms;
  std::vector<GramConstraint> constraints;  // one per achievable monomial, descending graded-lex

  std::size_t n_variables() const;  // Σ dim(dim+1)/2 over blocks
};

/// No product block has a degree compatible with the target.
struct ParityInfeasible {};
/// Some target monomial is not a product of surviving basis monomials, or
/// pruning emptied every block.
struct SupportInfeasible {
  Monomial monomial;
};
using BuildResult = std::variant<GramSystem, ParityInfeasible, SupportInfeasible>;

struct BuildOptions {
  BasisKind kind = BasisKind::Graded;
  bool prune = true;
  /// Extra polynomials φ_k entering the identity with free scalar weights.
  std::vector<Polynomial> free_terms;
};

/// Monomials of per-block degree target_multidegree/2 (or total degree at most
/// target_multidegree[0]/2 for TotalDegreeAtMost), then pruned to the
/// diagonal-consistency fixpoint when `prune` is set.
std::vector<Monomial> monomial_basis(std::size_t n_vars, const Grading& grading,
                                     const std::vector<std::uint64_t>& target_multidegree,
                                     const MonomialSet& support_hint, BasisKind kind = BasisKind::Graded,
                                     bool prune = true);

/// Removes basis elements b with 2b outside `support` and not expressible as
/// b_i + b_j for distinct remaining elements, until nothing changes.
std::vector<Monomial> prune_basis(std::vector<Monomial> basis, const MonomialSet& support);

/// Gram system for f·g^N = Σ_e σ(Q_e)·h^e over e ∈ {0,1}^r.
/// Throws std::invalid_argument when r > 16 or a required grading is missing.
BuildResult build_gram_system(const Polynomial& f, const Polynomial& g, unsigned N,
                              const std::vector<Polynomial>& constraints, const Grading& grading,
                              const BuildOptions& options = {});

/// Same, for an explicit target polynomial.
BuildResult build_for_target(const Polynomial& target, const std::vector<Polynomial>& constraints,
                             const Grading& grading, const BuildOptions& options = {});

/// Replaces block `block`'s Gram vector c by Wᵀc (face restriction) and
/// reassembles the constraints. W has dim() rows.
GramSystem restrict_block(const GramSystem& system, std::size_t block, const RationalMatrix& w);

/// Σ_blocks (cᵀ Q c)·multiplier + Σ_k free_values[k]·φ_k, expanded exactly.
/// `matrices` holds one dim×dim matrix per block (inactive blocks: 0×0).
Polynomial reconstruct(const GramSystem& system, const std::vector<RationalMatrix>& matrices,
                       const std::vector<Rational>& free_values = {});

/// Left-hand side of constraint k at the given matrices (and free values).
Rational evaluate_constraint(const GramConstraint& c, const std::vector<RationalMatrix>& matrices,
                             const std::vector<Rational>& free_values = {});

}  // namespace posicert::gram
