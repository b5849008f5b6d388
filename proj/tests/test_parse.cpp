#include "support.hpp"

#include <doctest.h>

using namespace posicert;
using posicert::testing::random_polynomial;

namespace {
const std::vector<std::string> xyz = {"x", "y", "z"};
const std::vector<std::string> xy = {"x", "y"};
}

TEST_CASE("basic parsing") {
  auto p = parse_polynomial("2x^2 y - (x+1)(x-1) + 3/4", xyz);
  Polynomial q(3);
  q.add_term(Monomial({2, 1, 0}), 2);
  q.add_term(Monomial({2, 0, 0}), -1);
  q.add_term(Monomial({0, 0, 0}), Rational(7, 4));
  CHECK(p == q);
  CHECK(parse_polynomial("-x", xy) == -Polynomial::variable(2, 0));
  CHECK(parse_polynomial("(x*y)/6", xy).coefficient(Monomial({1, 1})) == Rational(1, 6));
  CHECK(parse_polynomial("0", xy).is_zero());
}

TEST_CASE("malformed input is rejected") {
  CHECK_THROWS_AS(parse_polynomial("", xy), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x + w", xy), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x^-1", xy), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x^(1/2)", xy), ParseError);
  CHECK_THROWS_AS(parse_polynomial("(x + y", xy), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x + y)", xy), ParseError);
  CHECK_THROWS_AS(parse_polynomial("0.5*x", xy), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x/y", xy), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x/0", xy), ParseError);
}

TEST_CASE("canonical formatting") {
  CHECK(format_polynomial(parse_polynomial("y^2 - 3/4*x + x^2*y", xy), xy) == "x^2*y + y^2 - 3/4*x");
  CHECK(format_polynomial(parse_polynomial("-3/4*x", xy), xy) == "-3/4*x");
  CHECK(format_polynomial(parse_polynomial("1 - x", xy), xy) == "-x + 1");
  CHECK(format_polynomial(Polynomial(2), xy) == "0");
  CHECK(format_polynomial(Polynomial::variable(2, 1)) == "x1");
}

TEST_CASE("parse after format is the identity on 1000 random polynomials") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    auto p = random_polynomial(rng, 3, 7, 8, 50, 12);
    auto text = format_polynomial(p, xyz);
    CHECK_MESSAGE(parse_polynomial(text, xyz) == p, text);
  }
}

TEST_CASE("Motzkin form parses to its four terms") {
  auto m = parse_polynomial("x^4*y^2 + x^2*y^4 + z^6 - 3*x^2*y^2*z^2", xyz);
  CHECK(m.size() == 4);
  CHECK(m.coefficient(Monomial({2, 2, 2})) == -3);
  // Values from direct evaluation of the defining formula.
  CHECK(evaluate(m, std::vector<Rational>{1, 2, 3}) == 641);
  CHECK(evaluate(m, std::vector<Rational>{Rational(-1, 2), Rational(1, 3), 2}) == Rational(82525, 1296));
  CHECK(evaluate(m, std::vector<Rational>{0, 1, -1}) == 1);
  CHECK(evaluate(m, std::vector<Rational>{Rational(3, 2), -2, Rational(1, 5)}) == Rational(3448129, 62500));
  CHECK(evaluate(m, std::vector<Rational>{1, 1, 1}) == 0);
}

TEST_CASE("Stengle's polynomial expands to seven terms") {
  auto f = parse_polynomial("x^3 + (x*y^2 - x^2 - 1)^2", xy);
  auto hand = parse_polynomial("x^2*y^4 + x^4 + 1 - 2*x^3*y^2 - 2*x*y^2 + 2*x^2 + x^3", xy);
  CHECK(f == hand);
  CHECK(f.size() == 7);
  CHECK(evaluate(f, std::vector<Rational>{1, 2}) == 5);
  CHECK(evaluate(f, std::vector<Rational>{Rational(-1, 2), Rational(1, 3)}) == Rational(2047, 1296));
  CHECK(evaluate(f, std::vector<Rational>{0, -1}) == 1);
  CHECK(evaluate(f, std::vector<Rational>{Rational(3, 2), -2}) == Rational(175, 16));
  CHECK(evaluate(f, std::vector<Rational>{-2, Rational(1, 2)}) == Rational(89, 4));
}

TEST_CASE("identifier helpers") {
  CHECK(is_identifier("x_1"));
  CHECK_FALSE(is_identifier("1x"));
  auto ids = identifiers_in("x^2 + 3*yy - z1");
  CHECK(ids.size() == 3);
}
