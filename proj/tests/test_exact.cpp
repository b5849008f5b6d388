#include "posicert/exact.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace posicert;
using namespace posicert::exact;
using posicert::testing::poly;
using posicert::testing::random_rational;

namespace {
const std::vector<std::string> xy = {"x", "y"};

RationalMatrix from_rows(std::initializer_list<std::initializer_list<Rational>> rows) {
  RationalMatrix m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (const auto& v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

RationalMatrix reassemble(const Ldlt& f) {
  const auto n = f.d.size();
  RationalMatrix dm(n, n);
  for (std::size_t i = 0; i < n; ++i) dm(i, i) = f.d[i];
  return f.l * dm * f.l.transpose();
}
}  // namespace

TEST_CASE("best rational approximation") {
  CHECK(best_rational(0.333333333, Integer(100)) == Rational(1, 3));
  CHECK(best_rational(3.14159265358979, Integer(1000)) == Rational(355, 113));
  CHECK(best_rational(3.14159265358979, Integer(100)) == Rational(311, 99));
  CHECK(best_rational(-0.25, Integer(1)) == 0);
  CHECK(best_rational(-0.75, Integer(1)) == -1);
  CHECK(best_rational(0.0, Integer(7)) == 0);
  CHECK(best_rational(2.0, Integer(7)) == 2);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-10, 10);
  // Oracle: brute force over every denominator up to the bound.
  for (int i = 0; i < 200; ++i) {
    double v = u(rng);
    Rational x = exact_rational(v);
    Rational r = best_rational(v, Integer(200));
    CHECK(r.get_den() <= 200);
    Rational best_err = -1;
    for (long q = 1; q <= 200; ++q) {
      Integer num;
      Rational scaled = x * q;
      mpz_fdiv_q(num.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
      for (Integer p : {num, Integer(num + 1)}) {
        Rational cand(p, Integer(q));
        cand.canonicalize();
        Rational e = abs(x - cand);
        if (best_err < 0 || e < best_err) best_err = e;
      }
    }
    CHECK(abs(x - r) == best_err);
  }
}

TEST_CASE("exact LDLT of PSD and indefinite matrices") {
  auto psd = from_rows({{4, 2, 0}, {2, 2, 1}, {0, 1, Rational(3, 2)}});
  auto f = exact_ldlt(psd);
  REQUIRE(std::holds_alternative<Ldlt>(f));
  CHECK(reassemble(std::get<Ldlt>(f)) == psd);
  for (const auto& d : std::get<Ldlt>(f).d) CHECK(d >= 0);

  auto singular = from_rows({{1, 1}, {1, 1}});
  auto fs = exact_ldlt(singular);
  REQUIRE(std::holds_alternative<Ldlt>(fs));
  CHECK(std::get<Ldlt>(fs).d[1] == 0);
  CHECK(reassemble(std::get<Ldlt>(fs)) == singular);

  CHECK(std::holds_alternative<Indefinite>(exact_ldlt(from_rows({{0, 1}, {1, 0}}))));
  CHECK(std::holds_alternative<Indefinite>(exact_ldlt(from_rows({{1, 0}, {0, -1}}))));
  // Zero pivot with a nonzero remaining column.
  CHECK(std::holds_alternative<Indefinite>(exact_ldlt(from_rows({{0, 0, 1}, {0, 1, 0}, {1, 0, 2}}))));
}

TEST_CASE("LDLT reproduces random Gram products") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    RationalMatrix b(4, 2 + trial % 3);
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) = random_rational(rng, 5, 3);
    auto q = b * b.transpose();
    auto f = exact_ldlt(q);
    REQUIRE(std::holds_alternative<Ldlt>(f));
    CHECK(reassemble(std::get<Ldlt>(f)) == q);
  }
}

TEST_CASE("extract_sos expands back to the Gram form") {
  std::vector<Polynomial> c = {poly("y", xy), poly("x", xy)};
  auto q = from_rows({{2, 1}, {1, 3}});
  auto f = std::get<Ldlt>(exact_ldlt(q));
  auto squares = extract_sos(f, c);
  Polynomial total(2);
  for (const auto& s : squares) total += s.poly * s.poly * s.weight;
  CHECK(total == poly("2*y^2 + 2*x*y + 3*x^2", xy));
}

TEST_CASE("fraction-free solve") {
  auto a = from_rows({{2, 1, 0}, {1, 3, 1}, {0, 1, Rational(1, 3)}});
  std::vector<Rational> b = {1, 2, 3};
  auto x = solve_fraction_free(a, b);
  for (std::size_t i = 0; i < 3; ++i) {
    Rational v = 0;
    for (std::size_t j = 0; j < 3; ++j) v += a(i, j) * x[j];
    CHECK(v == b[i]);
  }
  CHECK_THROWS_AS(solve_fraction_free(from_rows({{1, 2}, {2, 4}}), {1, 2}), std::domain_error);
}

TEST_CASE("independent rows and inconsistency") {
  auto sys = std::get<gram::GramSystem>(gram::build_for_target(poly("x^2 + y^2", xy), {}, Grading::single(2)));
  auto rows = independent_rows(sys);
  REQUIRE(std::holds_alternative<std::vector<std::size_t>>(rows));
  CHECK(std::get<std::vector<std::size_t>>(rows).size() == 3);
}

TEST_CASE("projection lands exactly on the constraints") {
  auto f = poly("x^4 + x^3*y + 3*x^2*y^2 + y^4", xy);
  auto sys = std::get<gram::GramSystem>(gram::build_for_target(f, {}, Grading::single(2)));
  std::mt19937_64 rng(4);
  const auto n = sys.blocks[0].dim();
  RationalMatrix q(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) q(i, j) = q(j, i) = random_rational(rng);
  auto proj = project_to_constraints({q}, sys);
  REQUIRE(std::holds_alternative<std::vector<RationalMatrix>>(proj));
  const auto& p = std::get<std::vector<RationalMatrix>>(proj);
  CHECK(gram::reconstruct(sys, p) == f);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) CHECK(p[0](i, j) == p[0](j, i));
  // Projecting a feasible point leaves it unchanged.
  auto again = std::get<std::vector<RationalMatrix>>(project_to_constraints(p, sys));
  CHECK(again[0] == p[0]);
}

TEST_CASE("round_to_rational symmetrizes") {
  Eigen::MatrixXd m(2, 2);
  m << 0.5, 0.3333333333, 0.3333333334, 0.25;
  auto r = round_to_rational(m, Integer(100));
  CHECK(r(0, 1) == Rational(1, 3));
  CHECK(r(1, 0) == Rational(1, 3));
  CHECK(r(1, 1) == Rational(1, 4));
}
