#pragma once

#include "posicert/parse.hpp"
#include "posicert/polynomial.hpp"
#include "posicert/problem.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace posicert::testing {

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ProblemSpec load_problem(const std::string& name) {
  return parse_problem(read_text(std::string(POSICERT_TEST_DATA) + "/" + name));
}

inline Rational random_rational(std::mt19937_64& rng, int max_num = 9, int max_den = 4) {
  std::uniform_int_distribution<int> num(-max_num, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

/// Random polynomial with up to `terms` terms of total degree <= max_degree.
inline Polynomial random_polynomial(std::mt19937_64& rng, std::size_t n_vars, unsigned max_degree, int terms,
                                    int max_num = 9, int max_den = 4) {
  Polynomial p(n_vars);
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> var(0, n_vars - 1);
  for (int t = 0; t < terms; ++t) {
    Monomial m(n_vars);
    unsigned d = deg(rng);
    for (unsigned k = 0; k < d; ++k) m[var(rng)] += 1;
    Rational c = random_rational(rng, max_num, max_den);
    p.add_term(m, c);
  }
  return p;
}

/// Σ q_i² for `squares` dense random q_i of total degree <= max_degree. Dense
/// q_i have no common real zero, so the sum is strictly positive.
inline Polynomial random_sos(std::mt19937_64& rng, std::size_t n_vars, int squares, unsigned max_degree) {
  Polynomial f(n_vars);
  for (int i = 0; i < squares; ++i) {
    auto q = random_polynomial(rng, n_vars, max_degree, 30);
    f += q * q;
  }
  return f;
}

inline std::vector<Rational> random_point(std::mt19937_64& rng, std::size_t n) {
  std::vector<Rational> x;
  for (std::size_t i = 0; i < n; ++i) x.push_back(random_rational(rng, 5, 3));
  return x;
}

inline Polynomial poly(const std::string& text, const std::vector<std::string>& vars) {
  return parse_polynomial(text, vars);
}

}  // namespace posicert::testing
