#pragma once

// Dense primal-dual interior-point solver for block-diagonal SDPs with free
// scalar variables:
//
//   maximize    objectiveᵀ u
//   subject to  ⟨A_k, X⟩ + free_kᵀ u = b_k    (k = 1..m)
//               X = diag(X_1, ..., X_p) ⪰ 0,  u free.
//
// Gram feasibility is posed in margin form: Q = X + t·I with t a free
// variable whose objective weight is 1, so t* = max λ_min(Q).

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace posicert::sdp {

/// Symmetric entry A(row, col) = A(col, row) = value, row <= col.
struct Entry {
  std::uint32_t block;
  std::uint32_t row;
  std::uint32_t col;
  double value;
};

struct Constraint {
  std::vector<Entry> entries;
  std::vector<double> free;  // length n_free
  double rhs = 0;
};

struct Problem {
  std::vector<std::size_t> block_dims;
  std::size_t n_free = 0;
  std::vector<double> objective;  // length n_free, maximized
  std::vector<Constraint> constraints;

  /// Throws std::invalid_argument when dimensions disagree.
  void check() const;
};

enum class Status { MarginFeasible, MarginNegative, Borderline, MaxIterations, NumericalFailure };
std::string_view to_string(Status status);

struct Options {
  double gap_tolerance = 1e-8;
  int max_iterations = 100;
  double step_fraction = 0.98;
  /// Threads for the Schur complement kernel; 1 keeps the solve serial.
  int threads = 1;
};

struct IterationLog {
  double primal_objective;
  double dual_objective;
  double relative_gap;
  double primal_infeasibility;
  double dual_infeasibility;
  double mu;
  double step_primal;
  double step_dual;
};

struct Solution {
  Status status = Status::NumericalFailure;
  double t_star = 0;  // objectiveᵀ u at the last iterate
  std::vector<Eigen::MatrixXd> X;
  std::vector<Eigen::MatrixXd> S;
  Eigen::VectorXd u;
  Eigen::VectorXd y;
  double primal_objective = 0;  // objectiveᵀ u
  double dual_objective = 0;    // bᵀ y
  double relative_gap = 0;
  double primal_infeasibility = 0;
  double dual_infeasibility = 0;
  int iterations = 0;
  std::vector<IterationLog> history;

  bool converged() const { return status == Status::MarginFeasible || status == Status::MarginNegative || status == Status::Borderline; }
};

/// Nesterov–Todd direction with Mehrotra predictor-corrector, infeasible
/// start X = S = I, u = 0, y = 0. Converged solves are classified by t*:
/// MarginFeasible if t* > 10·tol, MarginNegative if t* < -10·tol, otherwise
/// Borderline (left for the caller).
///
/// When the iteration stalls, fails or runs out of iterations, the best
/// iterate is returned and classified by what it proves: MarginFeasible for a
/// primal-feasible point with objective > 10·tol, MarginNegative for a
/// dual-feasible point with bound < -10·tol (t_star is then that bound),
/// Borderline when both are feasible and the bracket meets the band.
Solution solve(const Problem& problem, const Options& options = {});

/// Smallest eigenvalue of a symmetric matrix. Throws std::invalid_argument
/// when |M - Mᵀ| exceeds 1e-12·max(1, |M|).
double min_eigenvalue(const Eigen::MatrixXd& m);

/// Schur complement M_kl = ⟨A_k, W A_l W⟩ for per-block scalings W.
Eigen::MatrixXd schur_complement_reference(const Problem& problem, const std::vector<Eigen::MatrixXd>& w);
/// OpenMP version of schur_complement_reference; bitwise identical result.
Eigen::MatrixXd schur_complement_parallel(const Problem& problem, const std::vector<Eigen::MatrixXd>& w,
                                          int threads);

/// Plain-text dump, one constraint per record:
///
///   posicert-sdp 1
///   blocks <p> <d_1> ... <d_p>
///   free <n_free> <objective_1> ... <objective_n_free>
///   constraints <m>
///   constraint <k> rhs <b_k> free <c_k1> ... <c_kn_free> entries <e>
///   <block> <row> <col> <value>        (e lines, 0-based, row <= col)
///
/// Doubles are written with 17 significant digits so a read restores them.
void write_dump(std::ostream& out, const Problem& problem);
Problem read_dump(std::istream& in);

}  // namespace posicert::sdp
