#pragma once

#include "posicert/exact.hpp"
#include "posicert/polynomial.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace posicert {

struct CertificateBlock {
  std::vector<bool> product_index;  // e ∈ {0,1}^r
  std::vector<Monomial> basis;
  std::vector<exact::WeightedSquare> squares;

  friend bool operator==(const CertificateBlock&, const CertificateBlock&) = default;
};

/// Exact witness of F·g^N = Σ_e (Σ_j w_j p_j²)·h_1^{e_1}···h_r^{e_r}, where the
/// certified form F is f^power, or g·f − ε·h_margin² in epsilon mode.
struct Certificate {
  std::vector<std::string> variables;
  Grading grading;
  Polynomial f;
  Polynomial g;
  std::vector<Polynomial> constraints;
  unsigned power = 1;
  std::optional<Rational> epsilon;
  std::optional<Polynomial> h_margin;
  unsigned N = 0;
  std::vector<CertificateBlock> blocks;

  // Metadata; not part of the identity.
  double margin = 0;
  Integer denominator_bound = 0;
  unsigned facial_reductions = 0;
  std::string search;

  Polynomial certified_form() const;
  /// certified_form()·g^N.
  Polynomial lhs() const;
  /// Σ_e (Σ_j w_j p_j²)·h^e.
  Polynomial rhs() const;
};

struct Verdict {
  bool valid = false;
  std::string reason;
  explicit operator bool() const { return valid; }
};

/// Re-proves the identity in exact arithmetic and checks every weight is
/// positive and every square is supported on its block's basis.
Verdict verify_certificate(const Certificate& cert);

/// Certificate at N+2 obtained by multiplying every s_e by g², i.e. each
/// square p_j becomes p_j·g.
Certificate lift_by_g_squared(const Certificate& cert);

/// Key-value text with one section per block (`e = ...` starts a section).
std::string write_certificate(const Certificate& cert);
/// Throws ParseError on malformed input.
Certificate read_certificate(std::string_view text);

}  // namespace posicert
