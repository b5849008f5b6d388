#include "posicert/polynomial.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace posicert {

std::uint64_t Monomial::degree() const {
  return std::accumulate(exps_.begin(), exps_.end(), std::uint64_t{0});
}

std::uint64_t Monomial::degree(std::size_t begin, std::size_t end) const {
  std::uint64_t d = 0;
  for (std::size_t i = begin; i < end; ++i) d += exps_[i];
  return d;
}

Monomial Monomial::operator*(const Monomial& other) const {
  if (other.size() != size()) throw std::invalid_argument("monomial length mismatch");
  Monomial r(*this);
  for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] += other.exps_[i];
  return r;
}

std::optional<Monomial> Monomial::divide(const Monomial& other) const {
  if (other.size() != size()) throw std::invalid_argument("monomial length mismatch");
  Monomial r(*this);
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (other.exps_[i] > exps_[i]) return std::nullopt;
    r.exps_[i] -= other.exps_[i];
  }
  return r;
}

bool GrlexDescending::operator()(const Monomial& a, const Monomial& b) const {
  auto da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  return a > b;
}

std::size_t MonomialHash::operator()(const Monomial& m) const {
  std::size_t h = 0xcbf29ce484222325ull;
  for (auto e : m.exponents()) h = (h ^ e) * 0x100000001b3ull;
  return h;
}

Grading::Grading(std::vector<std::size_t> block_sizes) : sizes_(std::move(block_sizes)) {
  if (sizes_.empty()) throw std::invalid_argument("grading needs at least one block");
  for (auto s : sizes_) {
    if (s == 0) throw std::invalid_argument("grading blocks must be nonempty");
    begins_.push_back(n_vars_);
    n_vars_ += s;
  }
}

Grading Grading::single(std::size_t n_vars) { return Grading({n_vars}); }

std::size_t Grading::block_of(std::size_t var) const {
  for (std::size_t b = 0; b < sizes_.size(); ++b)
    if (var < begins_[b] + sizes_[b]) return b;
  throw std::out_of_range("variable index outside grading");
}

std::vector<std::uint64_t> Grading::degrees(const Monomial& m) const {
  if (m.size() != n_vars_) throw std::invalid_argument("monomial length does not match grading");
  std::vector<std::uint64_t> d(sizes_.size());
  for (std::size_t b = 0; b < sizes_.size(); ++b) d[b] = m.degree(block_begin(b), block_end(b));
  return d;
}

Polynomial Polynomial::constant(std::size_t n_vars, const Rational& c) {
  Polynomial p(n_vars);
  p.add_term(Monomial(n_vars), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t n_vars, std::size_t index) {
  if (index >= n_vars) throw std::out_of_range("variable index out of range");
  Monomial m(n_vars);
  m[index] = 1;
  return term(m, 1);
}

Polynomial Polynomial::term(const Monomial& m, const Rational& c) {
  Polynomial p(m.size());
  p.add_term(m, c);
  return p;
}

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (m.size() != n_vars_)
    throw std::invalid_argument("monomial has " + std::to_string(m.size()) + " exponents, polynomial has " +
                                std::to_string(n_vars_) + " variables");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

std::uint64_t Polynomial::total_degree() const {
  if (terms_.empty()) throw std::domain_error("degree of the zero polynomial is undefined");
  // Descending grlex: the first key has maximal degree.
  return terms_.begin()->first.degree();
}

void Polynomial::require_compatible(const Polynomial& other) const {
  if (other.n_vars_ != n_vars_)
    throw std::invalid_argument("variable-count mismatch: " + std::to_string(n_vars_) + " vs " +
                                std::to_string(other.n_vars_));
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  require_compatible(other);
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  require_compatible(other);
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.require_compatible(b);
  Polynomial r(a.n_vars_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r(*this);
  for (auto& [m, v] : r.terms_) v = -v;
  return r;
}

Polynomial pow(const Polynomial& p, unsigned k) {
  Polynomial result = Polynomial::constant(p.n_vars(), 1);
  Polynomial base = p;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

std::optional<std::vector<std::uint64_t>> multidegree(const Polynomial& p, const Grading& grading) {
  if (p.is_zero()) throw std::domain_error("multidegree of the zero polynomial is undefined");
  if (grading.n_vars() != p.n_vars()) throw std::invalid_argument("grading does not match polynomial variables");
  std::optional<std::vector<std::uint64_t>> common;
  for (const auto& [m, c] : p.terms()) {
    auto d = grading.degrees(m);
    if (!common)
      common = std::move(d);
    else if (*common != d)
      return std::nullopt;
  }
  return common;
}

Rational evaluate(const Polynomial& p, std::span<const Rational> point) {
  if (point.size() != p.n_vars()) throw std::invalid_argument("evaluation point has wrong length");
  Rational total = 0;
  Rational term;
  for (const auto& [m, c] : p.terms()) {
    term = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::uint32_t k = 0; k < m[i]; ++k) term *= point[i];
    }
    total += term;
  }
  return total;
}

double evaluate(const Polynomial& p, std::span<const double> point) {
  if (point.size() != p.n_vars()) throw std::invalid_argument("evaluation point has wrong length");
  double total = 0;
  for (const auto& [m, c] : p.terms()) {
    double term = c.get_d();
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::uint32_t k = 0; k < m[i]; ++k) term *= point[i];
    total += term;
  }
  return total;
}

}  // namespace posicert
