#include "posicert/keyvalue.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace posicert;

TEST_CASE("constrained example document") {
  auto spec = parse_problem(R"(
    h = ["x^2-y^2"]
    f = "x^2 - 1/2*y^2"
    g = "x^2+y^2"
    mode = certify
  )");
  CHECK(spec.variables == std::vector<std::string>{"x", "y"});
  CHECK(spec.constraints.size() == 1);
  CHECK(spec.mode == Mode::Certify);
  CHECK(spec.homogeneous_required);
  CHECK(spec.grading.n_blocks() == 1);
}

TEST_CASE("defaults") {
  auto spec = parse_problem("f = \"x^2 + y^2\"");
  CHECK(spec.mode == Mode::CheckSos);
  CHECK(spec.g == sum_of_squared_variables(2));
  CHECK(spec.n_max == 10);
  CHECK(spec.m_max == 11);
  auto with_h = parse_problem("f = \"x^2\"\nh = [\"x^2\"]\nvars = x");
  CHECK(with_h.mode == Mode::Certify);
  auto inhom = parse_problem("f = \"x^2 + 1\"");
  CHECK_FALSE(inhom.homogeneous_required);
}

TEST_CASE("block grading") {
  auto spec = parse_problem(R"(
    vars = x, y, z
    blocks = (x, y | z)
    f = "x^2*z^2 + y^2*z^2"
    g = "(x^2 + y^2)*z^2"
  )");
  CHECK(spec.grading.n_blocks() == 2);
  CHECK(spec.homogeneous_required);
}

TEST_CASE("invalid documents name the field") {
  auto message = [](const char* doc) {
    try {
      parse_problem(doc);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("g = \"x^2\"").find("f") != std::string::npos);
  CHECK(message("f = \"x^2\"\nf = \"y^2\"").find("f") != std::string::npos);
  CHECK(message("f = \"x^2\"\ncolour = red").find("colour") != std::string::npos);
  CHECK(message("f = \"x^2 + w\"\nvars = x").find("w") != std::string::npos);
  CHECK(message("f = \"x^2\"\nmode = odd-power\nm_max = 4").find("m_max") != std::string::npos);
  CHECK(message("f = \"x^2+y^2\"\nh = [\"x^3\"]\nhomogeneous = true").find("h_1") != std::string::npos);
  CHECK(message("f = \"x^2\"\nmode = epsilon").find("h_margin") != std::string::npos);
  CHECK(message("f = \"0\"\nvars = x") != "no error");
}

TEST_CASE("mode names") {
  CHECK(parse_mode("check-sos") == Mode::CheckSos);
  CHECK(parse_mode("epsilon") == Mode::EpsilonMargin);
  CHECK(to_string(Mode::OddPower) == "odd-power");
  CHECK_THROWS(parse_mode("nonsense"));
}

TEST_CASE("key-value helpers") {
  auto entries = kv::read_entries("a = 1 # note\nb = \"x # y\"\n\n");
  REQUIRE(entries.size() == 2);
  CHECK(entries[1].value == "\"x # y\"");
  CHECK(kv::unquote("\"a \\\"b\\\"\"") == "a \"b\"");
  CHECK(kv::quote("a\"b") == "\"a\\\"b\"");
  CHECK(kv::split_list("[1, (2, 3), \"4, 5\"]") == std::vector<std::string>{"1", "(2, 3)", "\"4, 5\""});
  CHECK(kv::split_list("[]").empty());
}
