#pragma once

// Search orchestration: scan N (or odd powers m, or ε), solve the margin SDP
// per Gram system, and turn numerical solutions into exact certificates.

#include "posicert/certificate.hpp"
#include "posicert/facial.hpp"
#include "posicert/gram.hpp"
#include "posicert/precheck.hpp"
#include "posicert/problem.hpp"
#include "posicert/sdp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace posicert {

struct DriverOptions {
  double tolerance = 1e-8;
  double tight_tolerance = 1e-10;
  int max_iterations = 100;
  /// Largest denominator tried when rounding Gram matrices.
  Integer max_denominator = Integer("1000000000000");
  unsigned max_facial_rounds = 3;
  exact::FaceOptions face;
  /// Run the search even when the precheck found a counterexample.
  bool force = false;
  /// Concurrent N values; with a single system, threads go to the Schur kernel.
  int threads = 1;
  unsigned samples = 1000;
  std::uint64_t seed = 0;
  std::optional<unsigned> n_max;
  std::optional<unsigned> m_max;
};

/// Per-system margin SDP: active blocks only, the given constraint rows, a
/// margin column tr(A_k) when `margin` is set (objective t), then one column
/// per free term. Without a margin the first free term is maximized.
sdp::Problem margin_problem(const gram::GramSystem& system, const std::vector<std::size_t>& rows,
                            bool margin = true);

enum class Structure { Ok, ParityInfeasible, SupportInfeasible, Inconsistent };
std::string_view to_string(Structure s);

struct AttemptRecord {
  unsigned index = 0;  // N, or m in odd-power mode
  Structure structure = Structure::Ok;
  std::optional<sdp::Status> solver;
  double margin = 0;  // t*, or ε* in the ε phase
  int iterations = 0;
  bool tightened = false;
  unsigned facial_reductions = 0;
  unsigned rounding_attempts = 0;
  std::size_t gram_dimension = 0;  // Σ block sizes before face restriction
  std::size_t n_constraints = 0;
  std::optional<Rational> epsilon;  // rational ε tried in epsilon mode
  bool certified = false;
  std::string note;

  bool borderline() const { return solver == sdp::Status::Borderline; }
};

/// Outcome of one Gram system.
struct SystemResult {
  AttemptRecord record;
  std::vector<CertificateBlock> blocks;  // filled iff record.certified
  Integer denominator_bound = 0;
};

/// Margin solve, borderline escalation, face restriction, exact rounding.
SystemResult certify_system(gram::GramSystem system, const DriverOptions& options, int solver_threads = 1);

enum class Outcome { Certified, NotFound, Unknown, Counterexample, Skipped, Rejected, NumericalFailure };
std::string_view to_string(Outcome o);

struct SearchReport {
  Mode mode = Mode::CheckSos;
  std::vector<AttemptRecord> records;  // scan order
  Outcome outcome = Outcome::NotFound;
  unsigned bound = 0;  // n_max or m_max actually scanned
  std::optional<Certificate> certificate;
  std::optional<PrecheckResult> precheck;
  std::vector<std::string> warnings;
  std::string message;
};

/// certify / check-sos: smallest N ≤ n_max with an exact certificate.
SearchReport certify(const ProblemSpec& spec, const DriverOptions& options = {});
/// Smallest odd m ≤ m_max with f^m a certified sum of squares.
SearchReport odd_power(const ProblemSpec& spec, const DriverOptions& options = {});
/// Largest certified ε with g^N(g·f − ε·h_margin²) in the preordering, N ≤ n_max.
SearchReport epsilon_margin(const ProblemSpec& spec, const DriverOptions& options = {});

/// Precheck, then dispatch on spec.mode.
SearchReport run(const ProblemSpec& spec, const DriverOptions& options = {});

/// Gram system scanned at index N (or m) for the spec's mode; ε mode gives
/// the phase without ε fixed, with g^N·h_margin² as the free term.
gram::BuildResult build_system(const ProblemSpec& spec, unsigned index);

/// Human-readable report, one line per record.
std::string format_report(const SearchReport& report, const std::vector<std::string>& variables);

}  // namespace posicert
