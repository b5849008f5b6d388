#pragma once

#include "posicert/rational.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace posicert {

/// Exponent vector of a monomial. Its length is the ambient variable count.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t n_vars) : exps_(n_vars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> exponents) : exps_(std::move(exponents)) {}

  std::size_t size() const { return exps_.size(); }
  std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
  std::uint32_t& operator[](std::size_t i) { return exps_[i]; }
  std::span<const std::uint32_t> exponents() const { return exps_; }

  std::uint64_t degree() const;
  /// Degree restricted to variables [begin, end).
  std::uint64_t degree(std::size_t begin, std::size_t end) const;

  /// Product of monomials (exponent sum).
  Monomial operator*(const Monomial& other) const;
  /// Exponent difference; nullopt when `other` does not divide *this.
  std::optional<Monomial> divide(const Monomial& other) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;

 private:
  std::vector<std::uint32_t> exps_;
};

/// Graded lexicographic order, largest first: higher total degree first,
/// ties broken lexicographically with x_0 > x_1 > ...
struct GrlexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const;
};

/// Partition of the variables into contiguous blocks. Each block carries its
/// own degree in multihomogeneous problems.
class Grading {
 public:
  Grading() = default;
  explicit Grading(std::vector<std::size_t> block_sizes);
  static Grading single(std::size_t n_vars);

  std::size_t n_vars() const { return n_vars_; }
  std::size_t n_blocks() const { return sizes_.size(); }
  std::span<const std::size_t> block_sizes() const { return sizes_; }
  std::size_t block_begin(std::size_t block) const { return begins_[block]; }
  std::size_t block_end(std::size_t block) const { return begins_[block] + sizes_[block]; }
  std::size_t block_of(std::size_t var) const;

  /// Per-block degree vector of a monomial.
  std::vector<std::uint64_t> degrees(const Monomial& m) const;

  friend bool operator==(const Grading&, const Grading&) = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> begins_;
  std::size_t n_vars_ = 0;
};

/// Sparse multivariate polynomial with exact rational coefficients.
/// No stored coefficient is zero, so equality is equality of term maps.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, GrlexDescending>;

  explicit Polynomial(std::size_t n_vars = 0) : n_vars_(n_vars) {}

  static Polynomial constant(std::size_t n_vars, const Rational& c);
  static Polynomial variable(std::size_t n_vars, std::size_t index);
  static Polynomial term(const Monomial& m, const Rational& c);

  std::size_t n_vars() const { return n_vars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(const Monomial& m) const;
  /// Adds c·m, dropping the term if it cancels.
  void add_term(const Monomial& m, const Rational& c);

  /// Maximum total degree. Throws std::domain_error on the zero polynomial.
  std::uint64_t total_degree() const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  Polynomial operator-() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void require_compatible(const Polynomial& other) const;

  std::size_t n_vars_ = 0;
  TermMap terms_;
};

/// p^k by repeated squaring; p^0 = 1.
Polynomial pow(const Polynomial& p, unsigned k);

/// Common per-block degree vector of every term, or nullopt if the terms
/// disagree. Throws std::domain_error for the zero polynomial.
std::optional<std::vector<std::uint64_t>> multidegree(const Polynomial& p, const Grading& grading);

Rational evaluate(const Polynomial& p, std::span<const Rational> point);
double evaluate(const Polynomial& p, std::span<const double> point);

}  // namespace posicert
