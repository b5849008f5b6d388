#include "posicert/driver.hpp"

#include "posicert/exact.hpp"
#include "posicert/parse.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace posicert {

std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::Ok: return "ok";
    case Structure::ParityInfeasible: return "ParityInfeasible";
    case Structure::SupportInfeasible: return "SupportInfeasible";
    case Structure::Inconsistent: return "Inconsistent";
  }
  return "?";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Certified: return "Certified";
    case Outcome::NotFound: return "NotFoundUpTo";
    case Outcome::Unknown: return "Unknown";
    case Outcome::Counterexample: return "Counterexample";
    case Outcome::Skipped: return "Skipped";
    case Outcome::Rejected: return "Rejected";
    case Outcome::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

sdp::Problem margin_problem(const gram::GramSystem& system, const std::vector<std::size_t>& rows, bool margin) {
  sdp::Problem p;
  std::vector<long> map(system.blocks.size(), -1);
  for (std::size_t b = 0; b < system.blocks.size(); ++b)
    if (system.blocks[b].active && system.blocks[b].dim() > 0) {
      map[b] = static_cast<long>(p.block_dims.size());
      p.block_dims.push_back(system.blocks[b].dim());
    }
  const std::size_t offset = margin ? 1 : 0;
  p.n_free = offset + system.free_terms.size();
  p.objective.assign(p.n_free, 0.0);
  if (p.n_free > 0) p.objective[0] = 1.0;
  for (std::size_t k : rows) {
    const auto& c = system.constraints.at(k);
    sdp::Constraint out;
    out.rhs = c.rhs.get_d();
    out.free.assign(p.n_free, 0.0);
    Rational trace = 0;
    for (std::size_t b = 0; b < c.blocks.size(); ++b)
      for (const auto& e : c.blocks[b]) {
        if (map[b] < 0) continue;
        out.entries.push_back({static_cast<std::uint32_t>(map[b]), e.row, e.col, e.value.get_d()});
        if (e.row == e.col) trace += e.value;
      }
    if (margin) out.free[0] = trace.get_d();
    for (std::size_t j = 0; j < c.free.size(); ++j) out.free[offset + j] = c.free[j].get_d();
    p.constraints.push_back(std::move(out));
  }
  return p;
}

namespace {

struct SolveState {
  sdp::Solution solution;
  bool tightened = false;
};

SolveState solve_margin(const gram::GramSystem& sys, const std::vector<std::size_t>& rows, const DriverOptions& opt,
                        int threads) {
  sdp::Options so;
  so.gap_tolerance = opt.tolerance;
  so.max_iterations = opt.max_iterations;
  so.threads = threads;
  auto problem = margin_problem(sys, rows);
  SolveState st{sdp::solve(problem, so), false};
  if (st.solution.status == sdp::Status::Borderline) {
    so.gap_tolerance = opt.tight_tolerance;
    so.max_iterations = 2 * opt.max_iterations;
    auto again = sdp::solve(problem, so);
    st.tightened = true;
    if (again.converged()) {
      again.iterations += st.solution.iterations;
      st.solution = std::move(again);
    }
  }
  return st;
}

std::vector<Eigen::MatrixXd> numeric_gram(const gram::GramSystem& sys, const sdp::Solution& sol) {
  std::vector<Eigen::MatrixXd> q;
  const double t = sol.u.size() > 0 ? sol.u[0] : 0.0;
  std::size_t k = 0;
  for (const auto& b : sys.blocks) {
    if (b.active && b.dim() > 0) {
      Eigen::MatrixXd m = sol.X.at(k++);
      m.diagonal().array() += t;
      q.push_back(std::move(m));
    } else {
      q.emplace_back(0, 0);
    }
  }
  return q;
}

std::vector<Integer> denominator_schedule(const Integer& cap) {
  std::vector<Integer> out;
  for (const char* s : {"100", "10000", "100000000", "1000000000000"}) {
    Integer b(s);
    if (b <= cap) out.push_back(b);
  }
  if (out.empty() || out.back() < cap) out.push_back(cap);
  return out;
}

/// Rounds, projects and factors; fills result.blocks on success.
bool round_exactly(const gram::GramSystem& sys, const std::vector<Eigen::MatrixXd>& qnum, double margin,
                   const DriverOptions& opt, SystemResult& result) {
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& bound : denominator_schedule(opt.max_denominator)) {
    ++result.record.rounding_attempts;
    std::vector<RationalMatrix> qr;
    for (const auto& m : qnum) qr.push_back(m.size() ? exact::round_to_rational(m, bound) : RationalMatrix(0, 0));
    auto proj = exact::project_to_constraints(qr, sys);
    if (auto* bad = std::get_if<exact::Inconsistent>(&proj)) {
      result.record.note = "projection inconsistent at " + format_monomial(bad->monomial);
      return false;
    }
    const auto& q = std::get<std::vector<RationalMatrix>>(proj);
    std::vector<CertificateBlock> blocks;
    bool ok = true;
    for (std::size_t b = 0; b < sys.blocks.size() && ok; ++b) {
      const auto& blk = sys.blocks[b];
      if (!blk.active || blk.dim() == 0) continue;
      auto f = exact::exact_ldlt(q[b]);
      if (auto* l = std::get_if<exact::Ldlt>(&f))
        blocks.push_back({blk.product_index, blk.basis, exact::extract_sos(*l, blk.gram_vector)});
      else
        ok = false;
    }
    if (ok) {
      result.blocks = std::move(blocks);
      result.denominator_bound = bound;
      return true;
    }
    double dist = exact::frobenius_distance(q, qnum);
    if (dist > margin / 2 && dist >= prev / 2) break;  // finer rounding is not converging
    prev = dist;
  }
  if (result.record.note.empty()) result.record.note = "rounding did not yield a PSD Gram matrix";
  return false;
}

/// Restricts every block whose numerical Gram matrix has a rational kernel.
std::optional<gram::GramSystem> reduce_faces(const gram::GramSystem& sys, const std::vector<Eigen::MatrixXd>& q,
                                             const exact::FaceOptions& fo) {
  double scale = 0;
  for (const auto& m : q)
    if (m.size()) scale = std::max(scale, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().maxCoeff());
  if (!(scale > 0)) return std::nullopt;
  gram::GramSystem out = sys;
  bool any = false;
  for (std::size_t b = 0; b < sys.blocks.size(); ++b) {
    if (!q[b].size()) continue;
    // A spurious rounding leaves the target outside the restricted span.
    for (const auto& face : exact::rational_face_candidates(q[b], scale, fo)) {
      if (face.kernel_dim == 0) break;
      auto trial = gram::restrict_block(out, b, face.complement);
      if (std::holds_alternative<exact::Inconsistent>(exact::independent_rows(trial))) continue;
      out = std::move(trial);
      any = true;
      break;
    }
  }
  if (!any) return std::nullopt;
  return out;
}

}  // namespace

SystemResult certify_system(gram::GramSystem sys, const DriverOptions& opt, int solver_threads) {
  SystemResult result;
  auto& rec = result.record;
  for (const auto& b : sys.blocks) rec.gram_dimension += b.dim();
  rec.n_constraints = sys.constraints.size();

  for (unsigned round = 0;; ++round) {
    auto sel = exact::independent_rows(sys);
    if (auto* bad = std::get_if<exact::Inconsistent>(&sel)) {
      if (round == 0) rec.structure = Structure::Inconsistent;
      rec.note = "inconsistent constraint at " + format_monomial(bad->monomial);
      return result;
    }
    const auto& rows = std::get<std::vector<std::size_t>>(sel);
    auto st = solve_margin(sys, rows, opt, solver_threads);
    const auto& sol = st.solution;
    if (round == 0) {
      rec.solver = sol.status;
      rec.margin = sol.t_star;
      rec.tightened = st.tightened;
    }
    rec.iterations += sol.iterations;

    bool try_face = false;
    if (sol.status == sdp::Status::MarginFeasible) {
      auto qnum = numeric_gram(sys, sol);
      if (round_exactly(sys, qnum, sol.t_star, opt, result)) {
        rec.certified = true;
        rec.note.clear();
        return result;
      }
      try_face = sol.t_star < 1e3 * opt.tolerance;
    } else if (sol.status == sdp::Status::Borderline) {
      try_face = true;
    } else if (round > 0) {
      rec.note = std::string("face restriction gave ") + std::string(sdp::to_string(sol.status));
    }
    if (!try_face) return result;
    if (round >= opt.max_facial_rounds) {
      rec.note = "borderline after face restriction limit";
      return result;
    }
    auto reduced = reduce_faces(sys, numeric_gram(sys, sol), opt.face);
    if (!reduced) {
      if (rec.note.empty() || sol.status == sdp::Status::Borderline) rec.note = "no rational face found";
      return result;
    }
    sys = std::move(*reduced);
    ++rec.facial_reductions;
    if (std::none_of(sys.blocks.begin(), sys.blocks.end(), [](const gram::GramBlock& b) { return b.active; })) {
      rec.note = "face restriction removed every block";
      return result;
    }
  }
}

namespace {

gram::BuildOptions build_options(const ProblemSpec& spec) {
  gram::BuildOptions o;
  o.kind = spec.homogeneous_required ? gram::BasisKind::Graded : gram::BasisKind::TotalDegreeAtMost;
  return o;
}

Certificate base_certificate(const ProblemSpec& spec) {
  Certificate c;
  c.variables = spec.variables;
  c.grading = spec.grading;
  c.f = spec.f;
  c.g = spec.g;
  if (spec.mode != Mode::CheckSos && spec.mode != Mode::OddPower) c.constraints = spec.constraints;
  return c;
}

std::vector<unsigned> scan_indices(const ProblemSpec& spec, const DriverOptions& opt) {
  std::vector<unsigned> out;
  switch (spec.mode) {
    case Mode::CheckSos: return {0};
    case Mode::OddPower: {
      unsigned m_max = opt.m_max.value_or(spec.m_max);
      for (unsigned m = 1; m <= m_max; m += 2) out.push_back(m);
      return out;
    }
    default: {
      unsigned n_max = opt.n_max.value_or(spec.n_max);
      for (unsigned n = 0; n <= n_max; ++n) out.push_back(n);
      return out;
    }
  }
}

struct Attempt {
  SystemResult result;
  std::optional<Certificate> certificate;
};

Attempt attempt_index(const ProblemSpec& spec, unsigned index, const DriverOptions& opt, int solver_threads) {
  Attempt a;
  auto& rec = a.result.record;
  auto built = build_system(spec, index);
  if (std::holds_alternative<gram::ParityInfeasible>(built)) {
    rec.index = index;
    rec.structure = Structure::ParityInfeasible;
    return a;
  }
  if (auto* s = std::get_if<gram::SupportInfeasible>(&built)) {
    rec.index = index;
    rec.structure = Structure::SupportInfeasible;
    rec.note = "unreachable monomial " + format_monomial(s->monomial);
    return a;
  }
  a.result = certify_system(std::get<gram::GramSystem>(std::move(built)), opt, solver_threads);
  a.result.record.index = index;
  if (a.result.record.certified) {
    Certificate c = base_certificate(spec);
    if (spec.mode == Mode::OddPower) {
      c.power = index;
      c.N = 0;
    } else {
      c.N = spec.mode == Mode::CheckSos ? 0 : index;
    }
    c.blocks = a.result.blocks;
    c.margin = a.result.record.margin;
    c.denominator_bound = a.result.denominator_bound;
    c.facial_reductions = a.result.record.facial_reductions;
    c.search = std::string(to_string(spec.mode));
    auto verdict = verify_certificate(c);
    if (verdict) {
      a.certificate = std::move(c);
    } else {
      a.result.record.certified = false;
      a.result.record.note = "exact verification failed: " + verdict.reason;
    }
  }
  return a;
}

void classify(SearchReport& report) {
  if (report.certificate) {
    report.outcome = Outcome::Certified;
    return;
  }
  bool any_borderline = false;
  bool all_numerical = true;
  bool any_attempted = false;
  for (const auto& r : report.records) {
    if (r.borderline()) any_borderline = true;
    if (!r.solver) continue;
    any_attempted = true;
    if (*r.solver != sdp::Status::NumericalFailure && *r.solver != sdp::Status::MaxIterations) all_numerical = false;
  }
  if (any_borderline)
    report.outcome = Outcome::Unknown;
  else if (any_attempted && all_numerical)
    report.outcome = Outcome::NumericalFailure;
  else
    report.outcome = Outcome::NotFound;
}

SearchReport scan(const ProblemSpec& spec, const DriverOptions& opt) {
  SearchReport report;
  report.mode = spec.mode;
  auto indices = scan_indices(spec, opt);
  report.bound = indices.empty() ? 0 : indices.back();
  const int threads = std::max(1, opt.threads);
  const std::size_t batch = static_cast<std::size_t>(threads);
  for (std::size_t start = 0; start < indices.size(); start += batch) {
    const std::size_t count = std::min(batch, indices.size() - start);
    std::vector<Attempt> results(count);
    const int solver_threads = count == 1 ? threads : 1;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (count > 1)
    for (std::size_t i = 0; i < count; ++i) results[i] = attempt_index(spec, indices[start + i], opt, solver_threads);
    // Join, then take the smallest certified index.
    for (auto& a : results) {
      report.records.push_back(a.result.record);
      if (a.certificate) {
        report.certificate = std::move(a.certificate);
        break;
      }
    }
    if (report.certificate) break;
  }
  classify(report);
  return report;
}

}  // namespace

gram::BuildResult build_system(const ProblemSpec& spec, unsigned index) {
  auto opts = build_options(spec);
  switch (spec.mode) {
    case Mode::CheckSos: return gram::build_for_target(spec.f, {}, spec.grading, opts);
    case Mode::OddPower: return gram::build_for_target(pow(spec.f, index), {}, spec.grading, opts);
    case Mode::Certify: return gram::build_gram_system(spec.f, spec.g, index, spec.constraints, spec.grading, opts);
    case Mode::EpsilonMargin: {
      Polynomial gn = pow(spec.g, index);
      opts.free_terms = {gn * (*spec.h_margin) * (*spec.h_margin)};
      return gram::build_for_target(spec.f * spec.g * gn, spec.constraints, spec.grading, opts);
    }
  }
  throw std::logic_error("unknown mode");
}

SearchReport certify(const ProblemSpec& spec, const DriverOptions& options) {
  if (spec.mode != Mode::Certify && spec.mode != Mode::CheckSos)
    throw std::invalid_argument("certify requires mode certify or check-sos");
  return scan(spec, options);
}

SearchReport odd_power(const ProblemSpec& spec, const DriverOptions& options) {
  if (spec.mode != Mode::OddPower) throw std::invalid_argument("odd_power requires mode odd-power");
  if (options.m_max.value_or(spec.m_max) % 2 == 0) throw std::invalid_argument("m_max must be odd");
  return scan(spec, options);
}

SearchReport epsilon_margin(const ProblemSpec& spec, const DriverOptions& opt) {
  if (spec.mode != Mode::EpsilonMargin) throw std::invalid_argument("epsilon_margin requires mode epsilon");
  SearchReport report;
  report.mode = spec.mode;
  if (!spec.h_margin) throw std::invalid_argument("epsilon mode requires h_margin");
  if (spec.h_margin->is_zero()) {
    report.outcome = Outcome::Rejected;
    report.message = "h_margin is zero: the margin constraint is vacuous and epsilon is unbounded";
    return report;
  }
  auto indices = scan_indices(spec, opt);
  report.bound = indices.empty() ? 0 : indices.back();
  const int threads = std::max(1, opt.threads);
  std::vector<Attempt> results(indices.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (threads > 1)
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const unsigned n = indices[i];
    Attempt& a = results[i];
    auto& rec = a.result.record;
    rec.index = n;
    auto built = build_system(spec, n);
    if (std::holds_alternative<gram::ParityInfeasible>(built)) {
      rec.structure = Structure::ParityInfeasible;
      continue;
    }
    if (auto* s = std::get_if<gram::SupportInfeasible>(&built)) {
      rec.structure = Structure::SupportInfeasible;
      rec.note = "unreachable monomial " + format_monomial(s->monomial);
      continue;
    }
    const auto& sys = std::get<gram::GramSystem>(built);
    auto sel = exact::independent_rows(sys);
    if (auto* bad = std::get_if<exact::Inconsistent>(&sel)) {
      rec.structure = Structure::Inconsistent;
      rec.note = "inconsistent constraint at " + format_monomial(bad->monomial);
      continue;
    }
    sdp::Options so;
    so.gap_tolerance = opt.tolerance;
    so.max_iterations = opt.max_iterations;
    so.threads = 1;
    auto sol = sdp::solve(margin_problem(sys, std::get<std::vector<std::size_t>>(sel), false), so);
    rec.solver = sol.status;
    rec.iterations = sol.iterations;
    rec.margin = sol.t_star;
    if (!sol.converged()) {
      rec.note = "epsilon maximization did not converge";
      continue;
    }
    if (!(sol.t_star > 10 * opt.tolerance)) {
      rec.note = "optimal epsilon is not positive";
      continue;
    }
    Rational eps = exact::best_rational(0.75 * sol.t_star, Integer(1000));
    if (eps <= 0 || eps.get_d() >= sol.t_star) eps = exact::best_rational(0.75 * sol.t_star, Integer("1000000000"));
    if (eps <= 0) {
      rec.note = "epsilon rounds to zero";
      continue;
    }
    rec.epsilon = eps;
    Polynomial form = spec.g * spec.f - (*spec.h_margin) * (*spec.h_margin) * eps;
    auto fixed = gram::build_for_target(form * pow(spec.g, n), spec.constraints, spec.grading, build_options(spec));
    auto* fsys = std::get_if<gram::GramSystem>(&fixed);
    if (!fsys) {
      rec.note = "fixed-epsilon system is structurally infeasible";
      continue;
    }
    auto inner = certify_system(std::move(*fsys), opt, 1);
    rec.rounding_attempts = inner.record.rounding_attempts;
    rec.facial_reductions = inner.record.facial_reductions;
    rec.gram_dimension = inner.record.gram_dimension;
    rec.n_constraints = inner.record.n_constraints;
    rec.note = inner.record.note;
    if (!inner.record.certified) {
      if (inner.record.solver)
        rec.note = "fixed epsilon: " + std::string(sdp::to_string(*inner.record.solver)) +
                   (rec.note.empty() ? "" : ", " + rec.note);
      continue;
    }
    Certificate c = base_certificate(spec);
    c.epsilon = eps;
    c.h_margin = spec.h_margin;
    c.N = n;
    c.blocks = inner.blocks;
    c.margin = inner.record.margin;
    c.denominator_bound = inner.denominator_bound;
    c.facial_reductions = inner.record.facial_reductions;
    c.search = "epsilon";
    auto verdict = verify_certificate(c);
    if (!verdict) {
      rec.note = "exact verification failed: " + verdict.reason;
      continue;
    }
    rec.certified = true;
    a.certificate = std::move(c);
  }
  // Largest ε wins; ties go to the smaller N.
  for (auto& a : results) {
    report.records.push_back(a.result.record);
    if (a.certificate && (!report.certificate || *a.certificate->epsilon > *report.certificate->epsilon))
      report.certificate = std::move(a.certificate);
  }
  classify(report);
  // ε* ≈ 0 is the expected answer when f has zeros where h does not vanish.
  if (report.outcome == Outcome::Unknown) {
    report.outcome = Outcome::NotFound;
    report.message = "optimal epsilon is not positive at any scanned N";
  }
  return report;
}

SearchReport run(const ProblemSpec& spec, const DriverOptions& options) {
  std::optional<PrecheckResult> pre;
  if (options.samples > 0) pre = positivity_precheck(spec, options.samples, options.seed);
  SearchReport report;
  if (pre && (pre->kind == PrecheckResult::Kind::Counterexample || pre->zero) && !options.force) {
    report.mode = spec.mode;
    report.outcome = pre->kind == PrecheckResult::Kind::Counterexample ? Outcome::Counterexample : Outcome::Skipped;
    report.precheck = pre;
    report.message = pre->kind == PrecheckResult::Kind::Counterexample
                         ? "search skipped; rerun with --force to search anyway"
                         : "f vanishes on the sampled set; search skipped, rerun with --force for nonnegative inputs";
    return report;
  }
  switch (spec.mode) {
    case Mode::Certify:
    case Mode::CheckSos: report = certify(spec, options); break;
    case Mode::OddPower: report = odd_power(spec, options); break;
    case Mode::EpsilonMargin: report = epsilon_margin(spec, options); break;
  }
  report.precheck = pre;
  if (pre && pre->sampled > 0 && pre->kept == 0 && !spec.constraints.empty())
    report.warnings.push_back("every sample point violates some constraint; the constraint set may be thin");
  if (pre && pre->kind == PrecheckResult::Kind::Counterexample)
    report.warnings.push_back("precheck found a point where " + pre->field + " <= 0; searching because of --force");
  else if (pre && pre->zero)
    report.warnings.push_back("f vanishes at a sampled point; searching because of --force");
  return report;
}

std::string format_report(const SearchReport& report, const std::vector<std::string>& variables) {
  std::ostringstream out;
  out << std::setprecision(6);
  const char* label = report.mode == Mode::OddPower ? "m" : "N";
  out << "mode: " << to_string(report.mode) << "\n";
  if (report.precheck) {
    const auto& p = *report.precheck;
    out << "precheck: "
        << (p.kind == PrecheckResult::Kind::Counterexample ? "Counterexample" : "NoCounterexample") << " ("
        << p.sampled << " points, " << p.kept << " in the constraint set)";
    if (p.kind == PrecheckResult::Kind::Counterexample) {
      out << " " << p.field << " = " << p.value << " at (";
      for (std::size_t i = 0; i < p.point.size(); ++i)
        out << (i ? ", " : "") << (i < variables.size() ? variables[i] + " = " : "") << p.point[i];
      out << ")";
    }
    if (p.zero) {
      out << "; f = 0 at (";
      for (std::size_t i = 0; i < p.zero->size(); ++i)
        out << (i ? ", " : "") << (i < variables.size() ? variables[i] + " = " : "") << (*p.zero)[i];
      out << ")";
    }
    out << "\n";
  }
  for (const auto& w : report.warnings) out << "warning: " << w << "\n";
  for (const auto& r : report.records) {
    out << label << " = " << r.index << ": ";
    if (r.structure != Structure::Ok) {
      out << to_string(r.structure);
    } else if (r.solver) {
      out << sdp::to_string(*r.solver) << (report.mode == Mode::EpsilonMargin ? " eps* = " : " t* = ") << r.margin
          << " (" << r.iterations << " iterations";
      if (r.tightened) out << ", tightened";
      if (r.facial_reductions) out << ", " << r.facial_reductions << " face restrictions";
      if (r.rounding_attempts) out << ", " << r.rounding_attempts << " rounding attempts";
      out << ")";
      if (r.epsilon) out << " eps = " << to_string(*r.epsilon);
      if (r.certified) out << " certified";
      else if (*r.solver == sdp::Status::MarginNegative)
        out << " no SOS representation found (numerical evidence)";
    }
    if (!r.note.empty()) out << " [" << r.note << "]";
    out << "\n";
  }
  out << "outcome: ";
  switch (report.outcome) {
    case Outcome::Certified: {
      const auto& c = *report.certificate;
      out << "Certified";
      if (report.mode == Mode::OddPower) out << " m = " << c.power;
      else out << " N = " << c.N;
      if (c.epsilon) out << " epsilon = " << to_string(*c.epsilon);
      break;
    }
    case Outcome::NotFound: out << "NotFoundUpTo(" << report.bound << ")"; break;
    case Outcome::Unknown: {
      out << "Unknown(borderline:";
      for (const auto& r : report.records)
        if (r.borderline()) out << " " << r.index;
      out << ")";
      break;
    }
    default: out << to_string(report.outcome);
  }
  if (!report.message.empty()) out << " - " << report.message;
  out << "\n";
  return out.str();
}

}  // namespace posicert
