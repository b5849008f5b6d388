#include "posicert/parse.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace posicert {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class PolynomialParser {
 public:
  PolynomialParser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  Polynomial parse() {
    skip_ws();
    if (at_end()) fail("empty input");
    Polynomial p = expr();
    skip_ws();
    if (!at_end()) {
      if (peek() == ')') fail("unbalanced parentheses");
      fail(std::string("unexpected character '") + peek() + "'");
    }
    return p;
  }

 private:
  Polynomial expr() {
    skip_ws();
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = peek() == '-';
      ++pos_;
    }
    Polynomial acc = term();
    if (negate) acc = -acc;
    for (;;) {
      skip_ws();
      char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      Polynomial t = term();
      if (c == '+')
        acc += t;
      else
        acc -= t;
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = power();
    for (;;) {
      skip_ws();
      char c = peek();
      if (c == '*') {
        ++pos_;
        acc = acc * power();
      } else if (c == '/') {
        ++pos_;
        skip_ws();
        if (!digit(peek())) fail("division is only allowed by a positive integer literal");
        Integer d = integer_literal();
        if (d == 0) fail("division by zero");
        acc *= Rational(1, 1) / Rational(d);
      } else if (c == '(' || digit(c) || ident_start(c)) {
        acc = acc * power();
      } else {
        break;
      }
    }
    return acc;
  }

  Polynomial power() {
    Polynomial base = primary();
    skip_ws();
    if (peek() != '^') return base;
    ++pos_;
    skip_ws();
    if (peek() == '-') fail("malformed exponent: negative exponents are not polynomial");
    if (peek() == '(') fail("malformed exponent: exponent must be a nonnegative integer literal");
    if (!digit(peek())) fail("malformed exponent");
    Integer k = integer_literal();
    if (peek() == '.' || peek() == '/') fail("malformed exponent: fractional exponents are not polynomial");
    if (k > 10000) fail("exponent too large");
    return pow(base, static_cast<unsigned>(k.get_ui()));
  }

  Polynomial primary() {
    skip_ws();
    if (at_end()) fail("unexpected end of input");
    char c = peek();
    if (c == '(') {
      ++pos_;
      ++depth_;
      if (depth_ > 200) fail("nesting too deep");
      Polynomial inner = expr();
      skip_ws();
      if (peek() != ')') fail("unbalanced parentheses");
      ++pos_;
      --depth_;
      return inner;
    }
    if (digit(c)) {
      Integer n = integer_literal();
      if (peek() == '.') fail("decimal literals are not supported; write p/q");
      return Polynomial::constant(vars_.size(), Rational(n));
    }
    if (ident_start(c)) {
      std::size_t start = pos_;
      while (!at_end() && ident_char(peek())) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      auto it = std::find(vars_.begin(), vars_.end(), name);
      if (it == vars_.end()) fail("unknown variable '" + name + "'");
      return Polynomial::variable(vars_.size(), static_cast<std::size_t>(it - vars_.begin()));
    }
    if (c == ')') fail("unbalanced parentheses");
    fail(std::string("unexpected character '") + c + "'");
  }

  Integer integer_literal() {
    std::size_t start = pos_;
    while (!at_end() && digit(peek())) ++pos_;
    return Integer(std::string(text_.substr(start, pos_ - start)), 10);
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

}  // namespace

bool is_identifier(std::string_view name) {
  if (name.empty() || !ident_start(name[0])) return false;
  return std::all_of(name.begin(), name.end(), ident_char);
}

std::vector<std::string> identifiers_in(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (ident_start(text[i]) && (i == 0 || !ident_char(text[i - 1]))) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string name(text.substr(i, j - i));
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& variables) {
  for (const auto& v : variables)
    if (!is_identifier(v)) throw ParseError("invalid variable name '" + v + "'");
  return PolynomialParser(text, variables).parse();
}

std::string format_monomial(const Monomial& m, const std::vector<std::string>& variables) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += variables.at(i);
    if (m[i] > 1) out += '^' + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

std::string format_polynomial(const Polynomial& p, const std::vector<std::string>& variables) {
  if (variables.size() != p.n_vars()) throw std::invalid_argument("variable names do not match polynomial");
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rational mag = abs(c);
    bool negative = c < 0;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    bool is_const = m.degree() == 0;
    if (is_const) {
      out += to_string(mag);
    } else {
      if (mag != 1) out += to_string(mag) + "*";
      out += format_monomial(m, variables);
    }
  }
  return out;
}

std::string format_polynomial(const Polynomial& p) { return format_polynomial(p, default_names(p.n_vars())); }
std::string format_monomial(const Monomial& m) { return format_monomial(m, default_names(m.size())); }

}  // namespace posicert
