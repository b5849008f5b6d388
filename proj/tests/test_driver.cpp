#include "posicert/driver.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace posicert;
using posicert::testing::load_problem;
using posicert::testing::poly;
using posicert::testing::random_sos;

namespace {

ProblemSpec spec_of(const std::string& text) { return parse_problem(text); }

const AttemptRecord* record_at(const SearchReport& r, unsigned index) {
  for (const auto& rec : r.records)
    if (rec.index == index) return &rec;
  return nullptr;
}

}  // namespace

TEST_CASE("precheck on small examples") {
  auto pos = positivity_precheck(spec_of("f = \"x^2 + y^2\""));
  CHECK(pos.kind == PrecheckResult::Kind::NoCounterexample);
  CHECK_FALSE(pos.zero);

  auto neg = positivity_precheck(spec_of("f = \"x^2 - y^2\""));
  REQUIRE(neg.kind == PrecheckResult::Kind::Counterexample);
  CHECK(neg.field == "f");
  CHECK(neg.value < 0);
  // The minimum on the circle is at (0, ±1).
  CHECK(std::abs(neg.point[0]) < 0.2);
  CHECK(std::abs(std::abs(neg.point[1]) - 1) < 0.05);

  auto motz = positivity_precheck(load_problem("motzkin.problem"));
  CHECK(motz.kind == PrecheckResult::Kind::NoCounterexample);
  CHECK(motz.zero.has_value());
}

TEST_CASE("precheck honours constraints and is seeded") {
  // x - y is negative somewhere, but not where x >= y.
  auto spec = spec_of("vars = x, y\nf = \"x - y + 1\"\nh = [\"x - y\"]\n");
  CHECK(positivity_precheck(spec).kind == PrecheckResult::Kind::NoCounterexample);
  auto a = positivity_precheck(spec_of("f = \"x^2 - y^2\""), 200, 7);
  auto b = positivity_precheck(spec_of("f = \"x^2 - y^2\""), 200, 7);
  CHECK(a.point == b.point);
  CHECK(a.value == b.value);
}

TEST_CASE("x^2 + y^2 is certified at N = 0") {
  auto r = run(spec_of("f = \"x^2 + y^2\"\nmode = certify\n"));
  REQUIRE(r.outcome == Outcome::Certified);
  const auto& c = *r.certificate;
  CHECK(c.N == 0);
  CHECK(verify_certificate(c).valid);
  REQUIRE(c.blocks.size() == 1);
  CHECK(c.blocks[0].squares.size() == 2);
  CHECK(c.lhs() == c.f);
}

TEST_CASE("constrained example") {
  auto r = run(load_problem("constrained.problem"));
  REQUIRE(r.outcome == Outcome::Certified);
  CHECK(r.certificate->N == 0);
  CHECK(verify_certificate(*r.certificate).valid);
}

TEST_CASE("negative inputs stop at the precheck") {
  auto r = run(spec_of("f = \"x^2 - y^2\"\nmode = certify\n"));
  CHECK(r.outcome == Outcome::Counterexample);
  CHECK(r.records.empty());
  auto forced = DriverOptions{};
  forced.force = true;
  forced.n_max = 2;
  auto f = run(spec_of("f = \"x^2 - y^2\"\nmode = certify\n"), forced);
  CHECK(f.outcome != Outcome::Certified);
  CHECK_FALSE(f.warnings.empty());
}

TEST_CASE("Motzkin needs a multiplier") {
  auto spec = load_problem("motzkin.problem");
  CHECK(run(spec).outcome == Outcome::Skipped);
  DriverOptions o;
  o.force = true;
  o.n_max = 2;
  auto r = run(spec, o);
  REQUIRE(r.outcome == Outcome::Certified);
  CHECK(r.certificate->N == 1);
  CHECK(verify_certificate(*r.certificate).valid);
  const auto* n0 = record_at(r, 0);
  REQUIRE(n0);
  CHECK(n0->solver == sdp::Status::MarginNegative);
  CHECK(n0->margin < -1e-4);
  CHECK_FALSE(n0->certified);
}

TEST_CASE("the scan is deterministic and thread invariant") {
  auto spec = load_problem("motzkin.problem");
  DriverOptions o;
  o.n_max = 3;
  auto one = certify(spec, o);
  auto again = certify(spec, o);
  o.threads = 4;
  auto four = certify(spec, o);
  REQUIRE(one.certificate);
  REQUIRE(four.certificate);
  CHECK(write_certificate(*one.certificate) == write_certificate(*again.certificate));
  CHECK(write_certificate(*one.certificate) == write_certificate(*four.certificate));
  REQUIRE(one.records.size() == four.records.size());
  for (std::size_t i = 0; i < one.records.size(); ++i) {
    CHECK(one.records[i].index == four.records[i].index);
    CHECK(one.records[i].solver == four.records[i].solver);
    CHECK(one.records[i].certified == four.records[i].certified);
  }
}

TEST_CASE("epsilon mode") {
  auto r = run(spec_of("vars = x, y\nf = \"x^2 + y^2\"\nh_margin = \"x*y\"\nmode = epsilon\nn_max = 1\n"));
  REQUIRE(r.outcome == Outcome::Certified);
  // (x²+y²)² - ε x²y² is SOS iff ε <= 4; three quarters of the optimum is kept.
  CHECK(*r.certificate->epsilon == 3);
  CHECK(verify_certificate(*r.certificate).valid);

  auto zero = run(spec_of("vars = x, y\nf = \"x^2 + y^2\"\nh_margin = \"0\"\nmode = epsilon\n"));
  CHECK(zero.outcome == Outcome::Rejected);
}

TEST_CASE("odd power of a sum of squares") {
  auto r = run(spec_of("vars = x, y\nf = \"x^2 + y^2 + 1\"\nmode = odd-power\nm_max = 3\n"));
  REQUIRE(r.outcome == Outcome::Certified);
  CHECK(r.certificate->power == 1);
  CHECK(verify_certificate(*r.certificate).valid);
}

TEST_CASE("Stengle polynomial has a negative margin at m = 1") {
  auto spec = load_problem("stengle.problem");
  DriverOptions o;
  o.m_max = 1;
  auto r = odd_power(spec, o);
  CHECK(r.outcome != Outcome::Certified);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].solver == sdp::Status::MarginNegative);
  // Cross-checked against two independent conic solvers.
  CHECK(r.records[0].margin == doctest::Approx(-0.0745702).epsilon(1e-4));
}

TEST_CASE("random sums of squares pass check-sos") {
  std::mt19937_64 rng(2024);
  const std::vector<std::string> vars = {"x", "y", "z"};
  for (int trial = 0; trial < 8; ++trial) {
    CAPTURE(trial);
    ProblemSpec spec;
    spec.variables = vars;
    spec.grading = Grading::single(3);
    spec.f = random_sos(rng, 3, 4, 3);
    spec.g = sum_of_squared_variables(3);
    spec.mode = Mode::CheckSos;
    spec.n_max = 0;
    auto r = certify(spec);
    CHECK(r.outcome == Outcome::Certified);
    if (r.certificate) CHECK(verify_certificate(*r.certificate).valid);
  }
}
