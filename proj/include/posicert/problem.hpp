#pragma once

#include "posicert/parse.hpp"
#include "posicert/polynomial.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace posicert {

enum class Mode { Certify, CheckSos, OddPower, EpsilonMargin };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

inline constexpr std::size_t kMaxConstraints = 16;

/// A certification task: find N and sums of squares s_e with
/// f·g^N = Σ_{e ∈ {0,1}^r} s_e · h_1^{e_1}···h_r^{e_r}.
struct ProblemSpec {
  std::vector<std::string> variables;
  Grading grading;
  Polynomial f;
  Polynomial g;
  std::vector<Polynomial> constraints;
  Mode mode = Mode::CheckSos;
  unsigned n_max = 10;
  unsigned m_max = 11;
  std::optional<Polynomial> h_margin;
  bool homogeneous_required = false;

  std::size_t n_vars() const { return variables.size(); }
};

/// Σ x_i² over n variables.
Polynomial sum_of_squared_variables(std::size_t n_vars);

/// Parses a problem document:
///
///   vars = x, y, z
///   blocks = (x, y | z)          # optional; default one block
///   f = "..."
///   g = "..."                    # optional; default Σ x_i²
///   h = ["...", "..."]           # optional
///   mode = certify               # default: check-sos, or certify when h is given
///   n_max = 10
///   m_max = 7
///   h_margin = "..."
///   homogeneous = true           # optional; default: true iff every input is graded
///
/// When `vars` is omitted the identifiers of all polynomial fields are used,
/// sorted. Throws ParseError naming the offending field.
ProblemSpec parse_problem(std::string_view document);

/// Checks the ProblemSpec invariants. Throws ParseError naming the field.
void validate(const ProblemSpec& spec);

}  // namespace posicert
