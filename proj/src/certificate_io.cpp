#include <map>
#include <set>
#include <sstream>

#include "posicert/certificate.hpp"
#include "posicert/keyvalue.hpp"
#include "posicert/parse.hpp"

namespace posicert {

namespace {

std::string grading_text(const Grading& gr, const std::vector<std::string>& vars) {
  std::string s = "(";
  for (std::size_t b = 0; b < gr.n_blocks(); ++b) {
    if (b) s += " | ";
    for (std::size_t v = gr.block_begin(b); v < gr.block_end(b); ++v) s += (v > gr.block_begin(b) ? ", " : "") + vars[v];
  }
  return s + ")";
}

}  // namespace

std::string write_certificate(const Certificate& cert) {
  const auto& vars = cert.variables;
  auto poly = [&](const Polynomial& p) { return kv::quote(format_polynomial(p, vars)); };
  std::ostringstream out;
  out << "# posicert certificate\n";
  out << "vars = ";
  for (std::size_t i = 0; i < vars.size(); ++i) out << (i ? ", " : "") << vars[i];
  out << "\nblocks = " << grading_text(cert.grading, vars) << '\n';
  out << "f = " << poly(cert.f) << '\n';
  out << "g = " << poly(cert.g) << '\n';
  out << "h = [";
  for (std::size_t i = 0; i < cert.constraints.size(); ++i) out << (i ? ", " : "") << poly(cert.constraints[i]);
  out << "]\n";
  out << "power = " << cert.power << '\n';
  if (cert.epsilon) out << "epsilon = " << to_string(*cert.epsilon) << '\n';
  if (cert.h_margin) out << "h_margin = " << poly(*cert.h_margin) << '\n';
  out << "N = " << cert.N << '\n';
  {
    std::ostringstream m;
    m.precision(17);
    m << cert.margin;
    out << "margin = " << m.str() << '\n';
  }
  out << "denominator_bound = " << cert.denominator_bound.get_str() << '\n';
  out << "facial_reductions = " << cert.facial_reductions << '\n';
  out << "search = " << kv::quote(cert.search) << '\n';
  for (const auto& block : cert.blocks) {
    out << "\ne = (";
    for (std::size_t i = 0; i < block.product_index.size(); ++i) out << (i ? "," : "") << (block.product_index[i] ? 1 : 0);
    out << ")\nbasis = [";
    for (std::size_t i = 0; i < block.basis.size(); ++i) out << (i ? ", " : "") << format_monomial(block.basis[i], vars);
    out << "]\nsquares = [";
    for (std::size_t i = 0; i < block.squares.size(); ++i)
      out << (i ? ", " : "") << '(' << to_string(block.squares[i].weight) << ", " << poly(block.squares[i].poly) << ')';
    out << "]\n";
  }
  return out.str();
}

namespace {

unsigned parse_unsigned(const kv::Entry& e) {
  try {
    std::size_t used = 0;
    unsigned long v = std::stoul(e.value, &used);
    if (used != e.value.size() || e.value.front() == '-') throw std::invalid_argument("");
    return static_cast<unsigned>(v);
  } catch (const std::exception&) {
    kv::fail(e, "expected a nonnegative integer");
  }
}

Grading parse_grading(const kv::Entry& e, const std::vector<std::string>& vars) {
  std::string v = kv::trim(e.value);
  if (v.size() < 2 || v.front() != '(' || v.back() != ')') kv::fail(e, "expected (a, b | c)");
  std::vector<std::size_t> sizes;
  std::size_t next = 0;
  std::stringstream groups(v.substr(1, v.size() - 2));
  std::string group;
  while (std::getline(groups, group, '|')) {
    auto names = kv::name_list(group);
    for (const auto& name : names) {
      if (next >= vars.size() || vars[next] != name) kv::fail(e, "blocks must follow the declared variable order");
      ++next;
    }
    sizes.push_back(names.size());
  }
  if (next != vars.size()) kv::fail(e, "blocks do not cover all variables");
  return Grading(sizes);
}

}  // namespace

Certificate read_certificate(std::string_view text) {
  static const std::set<std::string> header_keys = {
      "vars", "blocks", "f", "g", "h", "power", "epsilon", "h_margin", "N",
      "margin", "denominator_bound", "facial_reductions", "search"};
  auto entries = kv::read_entries(text);
  std::map<std::string, kv::Entry> header;
  std::vector<std::vector<kv::Entry>> sections;
  for (auto& e : entries) {
    if (e.key == "e") {
      sections.push_back({e});
    } else if (!sections.empty()) {
      if (e.key != "basis" && e.key != "squares") kv::fail(e, "unexpected key inside a block section");
      sections.back().push_back(e);
    } else {
      if (!header_keys.count(e.key)) kv::fail(e, "unknown key");
      if (header.count(e.key)) kv::fail(e, "duplicate key");
      header.emplace(e.key, e);
    }
  }
  for (const char* required : {"vars", "f", "g", "N"})
    if (!header.count(required)) throw ParseError(std::string("certificate is missing ") + required);

  Certificate cert;
  try {
    cert.variables = kv::name_list(header.at("vars").value);
  } catch (const ParseError& err) {
    kv::fail(header.at("vars"), err.what());
  }
  const auto& vars = cert.variables;
  auto poly = [&](const kv::Entry& e, std::string_view quoted) {
    try {
      return parse_polynomial(kv::unquote(quoted), vars);
    } catch (const ParseError& err) {
      kv::fail(e, err.what());
    }
  };
  cert.grading = header.count("blocks") ? parse_grading(header.at("blocks"), vars) : Grading::single(vars.size());
  cert.f = poly(header.at("f"), header.at("f").value);
  cert.g = poly(header.at("g"), header.at("g").value);
  if (header.count("h"))
    for (const auto& item : kv::split_list(header.at("h").value)) cert.constraints.push_back(poly(header.at("h"), item));
  if (header.count("power")) cert.power = parse_unsigned(header.at("power"));
  if (header.count("epsilon")) {
    try {
      cert.epsilon = parse_rational(header.at("epsilon").value);
    } catch (const std::invalid_argument& err) {
      kv::fail(header.at("epsilon"), err.what());
    }
  }
  if (header.count("h_margin")) cert.h_margin = poly(header.at("h_margin"), header.at("h_margin").value);
  cert.N = parse_unsigned(header.at("N"));
  if (header.count("margin")) {
    try {
      cert.margin = std::stod(header.at("margin").value);
    } catch (const std::exception&) {
      kv::fail(header.at("margin"), "expected a number");
    }
  }
  if (header.count("denominator_bound")) {
    try {
      cert.denominator_bound = Integer(header.at("denominator_bound").value, 10);
    } catch (const std::invalid_argument&) {
      kv::fail(header.at("denominator_bound"), "expected an integer");
    }
  }
  if (header.count("facial_reductions")) cert.facial_reductions = parse_unsigned(header.at("facial_reductions"));
  if (header.count("search")) cert.search = kv::unquote(header.at("search").value);

  for (const auto& section : sections) {
    CertificateBlock block;
    const auto& e = section.front();
    std::vector<std::string> bits;
    try {
      bits = kv::split_list(e.value, '(', ')');
    } catch (const ParseError& err) {
      kv::fail(e, err.what());
    }
    for (const auto& b : bits) {
      if (b != "0" && b != "1") kv::fail(e, "product index entries must be 0 or 1");
      block.product_index.push_back(b == "1");
    }
    bool seen_basis = false, seen_squares = false;
    for (std::size_t i = 1; i < section.size(); ++i) {
      const auto& entry = section[i];
      if (entry.key == "basis") {
        if (seen_basis) kv::fail(entry, "duplicate key");
        seen_basis = true;
        for (const auto& item : kv::split_list(entry.value)) {
          Polynomial p;
          try {
            p = parse_polynomial(item, vars);
          } catch (const ParseError& err) {
            kv::fail(entry, err.what());
          }
          if (p.size() != 1 || p.terms().begin()->second != 1) kv::fail(entry, "basis items must be monomials");
          block.basis.push_back(p.terms().begin()->first);
        }
      } else {
        if (seen_squares) kv::fail(entry, "duplicate key");
        seen_squares = true;
        for (const auto& item : kv::split_list(entry.value)) {
          auto parts = kv::split_list(item, '(', ')');
          if (parts.size() != 2) kv::fail(entry, "squares are (weight, \"polynomial\") pairs");
          exact::WeightedSquare sq;
          try {
            sq.weight = parse_rational(parts[0]);
          } catch (const std::invalid_argument& err) {
            kv::fail(entry, err.what());
          }
          sq.poly = poly(entry, parts[1]);
          block.squares.push_back(std::move(sq));
        }
      }
    }
    if (!seen_basis || !seen_squares) kv::fail(e, "block section needs basis and squares");
    cert.blocks.push_back(std::move(block));
  }
  return cert;
}

}  // namespace posicert
