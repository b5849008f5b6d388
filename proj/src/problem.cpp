#include "posicert/problem.hpp"

#include "posicert/keyvalue.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace posicert {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Certify: return "certify";
    case Mode::CheckSos: return "check-sos";
    case Mode::OddPower: return "odd-power";
    case Mode::EpsilonMargin: return "epsilon-margin";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  if (text == "certify") return Mode::Certify;
  if (text == "check-sos") return Mode::CheckSos;
  if (text == "odd-power") return Mode::OddPower;
  if (text == "epsilon-margin" || text == "epsilon") return Mode::EpsilonMargin;
  throw ParseError("unknown mode '" + std::string(text) + "'");
}

Polynomial sum_of_squared_variables(std::size_t n_vars) {
  Polynomial g(n_vars);
  for (std::size_t i = 0; i < n_vars; ++i) {
    Monomial m(n_vars);
    m[i] = 2;
    g.add_term(m, 1);
  }
  return g;
}

namespace {

Grading parse_blocks(const kv::Entry& e, const std::vector<std::string>& vars) {
  std::string v = kv::trim(e.value);
  if (v.size() < 2 || v.front() != '(' || v.back() != ')') kv::fail(e, "expected (a, b | c, d)");
  std::string body = v.substr(1, v.size() - 2);
  std::vector<std::size_t> sizes;
  std::size_t next = 0;
  std::size_t start = 0;
  body += '|';
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '|') continue;
    std::vector<std::string> names;
    try {
      names = kv::name_list(body.substr(start, i - start));
    } catch (const ParseError& err) {
      kv::fail(e, err.what());
    }
    for (const auto& n : names) {
      if (next >= vars.size() || vars[next] != n)
        kv::fail(e, "blocks must list the declared variables in order as contiguous groups; got '" + n + "'");
      ++next;
    }
    sizes.push_back(names.size());
    start = i + 1;
  }
  if (next != vars.size()) kv::fail(e, "blocks do not cover every declared variable");
  return Grading(sizes);
}

unsigned parse_count(const kv::Entry& e) {
  const std::string& s = e.value;
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) || s.size() > 6)
    kv::fail(e, "expected a nonnegative integer");
  return static_cast<unsigned>(std::stoul(s));
}

bool parse_bool(const kv::Entry& e) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  kv::fail(e, "expected true or false");
}

Polynomial parse_field(const kv::Entry& e, const std::string& text, const std::vector<std::string>& vars,
                       const std::string& label) {
  try {
    return parse_polynomial(text, vars);
  } catch (const ParseError& err) {
    throw ParseError("line " + std::to_string(e.line) + " (" + label + "): " + err.what());
  }
}

}  // namespace

ProblemSpec parse_problem(std::string_view document) {
  static const std::set<std::string> known = {"vars", "blocks", "f", "g", "h", "mode",
                                              "n_max", "m_max", "h_margin", "homogeneous"};
  std::map<std::string, kv::Entry> fields;
  for (auto& e : kv::read_entries(document)) {
    if (!known.count(e.key)) kv::fail(e, "unknown key");
    if (fields.count(e.key)) kv::fail(e, "duplicate key");
    fields.emplace(e.key, e);
  }
  if (!fields.count("f")) throw ParseError("missing required field f");

  auto text_of = [&](const std::string& key) {
    const auto& e = fields.at(key);
    try {
      return kv::unquote(e.value);
    } catch (const ParseError& err) {
      kv::fail(e, err.what());
    }
  };
  std::vector<std::string> h_texts;
  if (fields.count("h")) {
    try {
      h_texts = kv::quoted_list(fields.at("h").value);
    } catch (const ParseError& err) {
      kv::fail(fields.at("h"), err.what());
    }
  }

  ProblemSpec spec;
  if (fields.count("vars")) {
    try {
      spec.variables = kv::name_list(fields.at("vars").value);
    } catch (const ParseError& err) {
      kv::fail(fields.at("vars"), err.what());
    }
    std::set<std::string> uniq(spec.variables.begin(), spec.variables.end());
    if (uniq.size() != spec.variables.size()) kv::fail(fields.at("vars"), "duplicate variable name");
  } else {
    std::set<std::string> names;
    std::vector<std::string> texts = {text_of("f")};
    for (const char* k : {"g", "h_margin"})
      if (fields.count(k)) texts.push_back(text_of(k));
    texts.insert(texts.end(), h_texts.begin(), h_texts.end());
    for (const auto& t : texts)
      for (auto& n : identifiers_in(t)) names.insert(n);
    spec.variables.assign(names.begin(), names.end());
    if (spec.variables.empty()) throw ParseError("no variables declared and none appear in f");
  }
  const auto& vars = spec.variables;

  spec.grading = fields.count("blocks") ? parse_blocks(fields.at("blocks"), vars) : Grading::single(vars.size());
  spec.f = parse_field(fields.at("f"), text_of("f"), vars, "f");
  spec.g = fields.count("g") ? parse_field(fields.at("g"), text_of("g"), vars, "g")
                             : sum_of_squared_variables(vars.size());
  for (std::size_t i = 0; i < h_texts.size(); ++i)
    spec.constraints.push_back(parse_field(fields.at("h"), h_texts[i], vars, "h_" + std::to_string(i + 1)));
  if (fields.count("h_margin")) spec.h_margin = parse_field(fields.at("h_margin"), text_of("h_margin"), vars, "h_margin");
  if (!fields.count("mode") && !spec.constraints.empty()) spec.mode = Mode::Certify;
  if (fields.count("mode")) {
    try {
      spec.mode = parse_mode(fields.at("mode").value);
    } catch (const ParseError& err) {
      kv::fail(fields.at("mode"), err.what());
    }
  }
  if (fields.count("n_max")) spec.n_max = parse_count(fields.at("n_max"));
  if (fields.count("m_max")) spec.m_max = parse_count(fields.at("m_max"));

  if (fields.count("homogeneous")) {
    spec.homogeneous_required = parse_bool(fields.at("homogeneous"));
  } else {
    auto graded = [&](const Polynomial& p) { return p.is_zero() || multidegree(p, spec.grading).has_value(); };
    spec.homogeneous_required = graded(spec.f) && graded(spec.g) &&
                                std::all_of(spec.constraints.begin(), spec.constraints.end(), graded) &&
                                (!spec.h_margin || graded(*spec.h_margin));
  }
  validate(spec);
  return spec;
}

void validate(const ProblemSpec& spec) {
  if (spec.variables.empty()) throw ParseError("vars: at least one variable is required");
  if (spec.grading.n_vars() != spec.variables.size()) throw ParseError("blocks: grading does not match vars");
  if (spec.constraints.size() > kMaxConstraints)
    throw ParseError("h: at most " + std::to_string(kMaxConstraints) + " constraints are supported");
  if (spec.f.is_zero()) throw ParseError("f: the zero polynomial cannot be certified");
  if (spec.g.is_zero()) throw ParseError("g: multiplier must be nonzero");
  if (spec.mode == Mode::OddPower && spec.m_max % 2 == 0) throw ParseError("m_max: must be odd");
  if (spec.mode == Mode::OddPower && !spec.constraints.empty())
    throw ParseError("h: odd-power mode takes no constraints");
  if (spec.mode == Mode::CheckSos && !spec.constraints.empty())
    throw ParseError("h: check-sos mode takes no constraints");
  if (spec.mode == Mode::EpsilonMargin && !spec.h_margin)
    throw ParseError("h_margin: required in epsilon-margin mode");

  if (!spec.homogeneous_required) return;
  const auto& gr = spec.grading;
  auto require_graded = [&](const Polynomial& p, const std::string& field) {
    if (p.is_zero()) return std::vector<std::uint64_t>(gr.n_blocks(), 0);
    auto d = multidegree(p, gr);
    if (!d) throw ParseError(field + ": not homogeneous with respect to the declared blocks");
    return *d;
  };
  auto df = require_graded(spec.f, "f");
  auto dg = require_graded(spec.g, "g");
  for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
    std::string field = "h_" + std::to_string(i + 1);
    auto dh = require_graded(spec.constraints[i], field);
    for (auto d : dh)
      if (d % 2 != 0) throw ParseError(field + ": constraint must have even degree in every block");
  }
  if (spec.h_margin && !spec.h_margin->is_zero()) {
    auto dh = require_graded(*spec.h_margin, "h_margin");
    for (std::size_t b = 0; b < dh.size(); ++b)
      if (2 * dh[b] != df[b] + dg[b])
        throw ParseError("h_margin: degree must be half the degree of g·f in every block");
  }
}

}  // namespace posicert
