// Command-line front end. Exit codes: 0 certified/valid, 1 not found,
// 2 counterexample, 3 input error, 4 numerical failure.

#include "posicert/certificate.hpp"
#include "posicert/driver.hpp"
#include "posicert/exact.hpp"
#include "posicert/sdp.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace posicert;

enum Exit { kOk = 0, kNotFound = 1, kCounterexample = 2, kInputError = 3, kNumerical = 4 };

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct SearchArgs {
  std::string problem;
  std::optional<unsigned> n_max;
  std::optional<unsigned> m_max;
  double tol = 1e-8;
  std::string denom_bound = "1000000000000";
  bool force = false;
  int threads = 1;
  std::string out;
  std::uint64_t seed = 0;
  unsigned samples = 1000;
};

void add_search_options(CLI::App* cmd, SearchArgs& a, bool odd) {
  cmd->add_option("problem", a.problem, "problem file")->required();
  if (odd)
    cmd->add_option("--m-max", a.m_max, "largest odd power tried");
  else
    cmd->add_option("--n-max", a.n_max, "largest exponent N tried");
  cmd->add_option("--tol", a.tol, "SDP gap tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--denom-bound", a.denom_bound, "largest rounding denominator");
  cmd->add_flag("--force", a.force, "search even when the precheck finds a counterexample");
  cmd->add_option("--threads", a.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", a.out, "certificate output file");
  cmd->add_option("--seed", a.seed, "precheck sampling seed");
  cmd->add_option("--samples", a.samples, "precheck sample count (0 disables)");
}

int run_search(const SearchArgs& a, Mode mode) {
  ProblemSpec spec;
  DriverOptions opt;
  try {
    spec = parse_problem(read_file(a.problem));
    spec.mode = mode;
    if (mode == Mode::CheckSos || mode == Mode::OddPower) spec.h_margin.reset();
    validate(spec);
    opt.max_denominator = Integer(a.denom_bound);
    if (opt.max_denominator < 1) throw ParseError("--denom-bound must be positive");
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  opt.tolerance = a.tol;
  opt.tight_tolerance = std::min(1e-10, a.tol / 100);
  opt.force = a.force;
  opt.threads = a.threads;
  opt.seed = a.seed;
  opt.samples = a.samples;
  opt.n_max = a.n_max;
  opt.m_max = a.m_max;
  if (opt.m_max && *opt.m_max % 2 == 0) {
    std::cerr << "input error: --m-max must be odd\n";
    return kInputError;
  }

  SearchReport report;
  try {
    report = run(spec, opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  std::cout << format_report(report, spec.variables);
  if (report.certificate && !a.out.empty()) write_file(a.out, write_certificate(*report.certificate));
  switch (report.outcome) {
    case Outcome::Certified: return kOk;
    case Outcome::NotFound:
    case Outcome::Unknown: return kNotFound;
    case Outcome::Counterexample:
    case Outcome::Skipped: return kCounterexample;
    case Outcome::Rejected: return kInputError;
    case Outcome::NumericalFailure: return kNumerical;
  }
  return kNotFound;
}

int run_verify(const std::string& path) {
  Certificate cert;
  try {
    cert = read_certificate(read_file(path));
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  auto verdict = verify_certificate(cert);
  if (verdict) {
    std::cout << "Valid\n";
    return kOk;
  }
  std::cout << "Invalid: " << verdict.reason << "\n";
  return kNotFound;
}

int run_dump(const std::string& path, unsigned n, const std::string& out) {
  try {
    auto spec = parse_problem(read_file(path));
    auto built = build_system(spec, n);
    if (std::holds_alternative<gram::ParityInfeasible>(built)) {
      std::cerr << "N = " << n << " is parity infeasible\n";
      return kNotFound;
    }
    if (auto* s = std::get_if<gram::SupportInfeasible>(&built)) {
      std::cerr << "N = " << n << " is support infeasible at " << format_monomial(s->monomial) << "\n";
      return kNotFound;
    }
    const auto& sys = std::get<gram::GramSystem>(built);
    auto sel = exact::independent_rows(sys);
    if (std::holds_alternative<exact::Inconsistent>(sel)) {
      std::cerr << "constraint system is inconsistent\n";
      return kNotFound;
    }
    auto problem = margin_problem(sys, std::get<std::vector<std::size_t>>(sel),
                                  spec.mode != Mode::EpsilonMargin);
    if (out.empty()) {
      sdp::write_dump(std::cout, problem);
    } else {
      std::ofstream f(out);
      sdp::write_dump(f, problem);
    }
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact sums-of-squares certificates for positive forms"};
  app.require_subcommand(1);

  SearchArgs certify_args, check_args, odd_args, eps_args;
  auto* certify_cmd = app.add_subcommand("certify", "search N with f*g^N in the preordering");
  add_search_options(certify_cmd, certify_args, false);
  auto* check_cmd = app.add_subcommand("check-sos", "certify f itself as a sum of squares");
  add_search_options(check_cmd, check_args, false);
  auto* odd_cmd = app.add_subcommand("odd-power", "search odd m with f^m a sum of squares");
  add_search_options(odd_cmd, odd_args, true);
  auto* eps_cmd = app.add_subcommand("epsilon", "largest certified epsilon for g^N(g*f - eps*h^2)");
  add_search_options(eps_cmd, eps_args, false);

  std::string cert_path;
  auto* verify_cmd = app.add_subcommand("verify", "exact verification of a certificate file");
  verify_cmd->add_option("certificate", cert_path, "certificate file")->required();

  std::string dump_path, dump_out;
  unsigned dump_n = 0;
  auto* dump_cmd = app.add_subcommand("dump-sdp", "write the margin SDP for one N");
  dump_cmd->add_option("problem", dump_path, "problem file")->required();
  dump_cmd->add_option("--n", dump_n, "exponent N (or power m)")->required();
  dump_cmd->add_option("--out", dump_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  if (*certify_cmd) return run_search(certify_args, Mode::Certify);
  if (*check_cmd) return run_search(check_args, Mode::CheckSos);
  if (*odd_cmd) return run_search(odd_args, Mode::OddPower);
  if (*eps_cmd) return run_search(eps_args, Mode::EpsilonMargin);
  if (*verify_cmd) return run_verify(cert_path);
  if (*dump_cmd) return run_dump(dump_path, dump_n, dump_out);
  return kInputError;
}
