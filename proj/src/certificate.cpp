#include "posicert/certificate.hpp"

#include <set>

#include "posicert/parse.hpp"

namespace posicert {

Polynomial Certificate::certified_form() const {
  if (epsilon) {
    if (!h_margin) throw std::invalid_argument("certificate has epsilon but no h_margin");
    return g * f - (*h_margin * *h_margin) * *epsilon;
  }
  return pow(f, power);
}

Polynomial Certificate::lhs() const { return certified_form() * pow(g, N); }

Polynomial Certificate::rhs() const {
  Polynomial total(f.n_vars());
  for (const auto& block : blocks) {
    Polynomial s(f.n_vars());
    for (const auto& sq : block.squares) s += (sq.poly * sq.poly) * sq.weight;
    if (s.is_zero()) continue;
    for (std::size_t i = 0; i < block.product_index.size(); ++i)
      if (block.product_index[i]) s = s * constraints.at(i);
    total += s;
  }
  return total;
}

namespace {

std::string e_string(const std::vector<bool>& e) {
  std::string s = "(";
  for (std::size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::string(e[i] ? "1" : "0");
  return s + ")";
}

}  // namespace

Verdict verify_certificate(const Certificate& cert) {
  const std::size_t n = cert.variables.size();
  auto bad = [](std::string why) { return Verdict{false, std::move(why)}; };
  if (cert.f.n_vars() != n || cert.g.n_vars() != n) return bad("problem polynomials do not match the variable list");
  for (const auto& h : cert.constraints)
    if (h.n_vars() != n) return bad("constraint does not match the variable list");
  if (cert.h_margin && cert.h_margin->n_vars() != n) return bad("h_margin does not match the variable list");
  if (cert.epsilon && *cert.epsilon <= 0) return bad("epsilon must be positive");

  for (std::size_t b = 0; b < cert.blocks.size(); ++b) {
    const auto& block = cert.blocks[b];
    std::string where = "block e=" + e_string(block.product_index);
    if (block.product_index.size() != cert.constraints.size())
      return bad(where + ": product index length differs from the number of constraints");
    std::set<Monomial> basis(block.basis.begin(), block.basis.end());
    for (std::size_t j = 0; j < block.squares.size(); ++j) {
      const auto& sq = block.squares[j];
      if (sq.weight <= 0)
        return bad(where + ": nonpositive weight " + to_string(sq.weight) + " on square " + std::to_string(j + 1));
      if (sq.poly.n_vars() != n) return bad(where + ": square " + std::to_string(j + 1) + " has wrong variable count");
      for (const auto& [m, c] : sq.poly.terms())
        if (!basis.count(m))
          return bad(where + ": square " + std::to_string(j + 1) + " uses monomial " +
                     format_monomial(m, cert.variables) + " outside the block basis");
    }
  }

  Polynomial lhs = cert.lhs();
  Polynomial rhs = cert.rhs();
  if (lhs == rhs) return {true, "identity holds"};
  Polynomial diff = lhs - rhs;
  const auto& [m, c] = *diff.terms().begin();
  return bad("identity fails at monomial " + format_monomial(m, cert.variables) + ": left side " +
             to_string(lhs.coefficient(m)) + ", right side " + to_string(rhs.coefficient(m)));
}

Certificate lift_by_g_squared(const Certificate& cert) {
  Certificate out = cert;
  out.N = cert.N + 2;
  for (auto& block : out.blocks) {
    std::set<Monomial, GrlexDescending> support;
    for (auto& sq : block.squares) {
      sq.poly = sq.poly * cert.g;
      for (const auto& [m, c] : sq.poly.terms()) support.insert(m);
    }
    block.basis.assign(support.rbegin(), support.rend());
  }
  return out;
}

}  // namespace posicert
