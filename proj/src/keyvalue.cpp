#include "posicert/keyvalue.hpp"

#include <cctype>

namespace posicert::kv {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

void fail(const Entry& entry, const std::string& what) {
  throw ParseError("line " + std::to_string(entry.line) + " (" + entry.key + "): " + what);
}

namespace {

std::string strip_comment(std::string_view line) {
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_quotes && c == '\\') {
      ++i;
      continue;
    }
    if (c == '"') in_quotes = !in_quotes;
    if (c == '#' && !in_quotes) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

}  // namespace

std::vector<Entry> read_entries(std::string_view document) {
  std::vector<Entry> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= document.size()) {
    auto nl = document.find('\n', pos);
    std::string_view raw = document.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? document.size() + 1 : nl + 1;
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected `key = value`");
    Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    if (!is_identifier(e.key)) throw ParseError("line " + std::to_string(line_no) + ": invalid key '" + e.key + "'");
    out.push_back(std::move(e));
  }
  return out;
}

std::string unquote(std::string_view value) {
  std::string v = trim(value);
  if (v.size() < 2 || v.front() != '"' || v.back() != '"') throw ParseError("expected a quoted string, got " + v);
  std::string out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    char c = v[i];
    if (c == '\\' && i + 2 < v.size()) {
      out += v[++i];
    } else if (c == '"') {
      throw ParseError("unescaped quote inside string " + v);
    } else {
      out += c;
    }
  }
  return out;
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_list(std::string_view value, char open, char close) {
  std::string v = trim(value);
  if (v.size() < 2 || v.front() != open || v.back() != close)
    throw ParseError(std::string("expected a list delimited by ") + open + close + ", got " + v);
  std::string_view body(v.data() + 1, v.size() - 2);
  std::vector<std::string> items;
  int depth = 0;
  bool in_quotes = false;
  std::string cur;
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (in_quotes) {
      cur += c;
      if (c == '\\' && i + 1 < body.size()) cur += body[++i];
      else if (c == '"') in_quotes = false;
      continue;
    }
    if (c == '"') in_quotes = true;
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (depth < 0) throw ParseError("unbalanced brackets in " + v);
    if (c == ',' && depth == 0) {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (in_quotes || depth != 0) throw ParseError("unterminated list " + v);
  std::string last = trim(cur);
  if (!last.empty() || !items.empty()) items.push_back(last);
  for (const auto& it : items)
    if (it.empty()) throw ParseError("empty list item in " + v);
  return items;
}

std::vector<std::string> quoted_list(std::string_view value) {
  std::vector<std::string> out;
  for (const auto& item : split_list(value)) out.push_back(unquote(item));
  return out;
}

std::vector<std::string> name_list(std::string_view value) {
  std::vector<std::string> out;
  std::string cur;
  std::string v(value);
  v += ',';
  for (char c : v) {
    if (c == ',') {
      std::string name = trim(cur);
      if (!is_identifier(name)) throw ParseError("invalid variable name '" + name + "'");
      out.push_back(name);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

}  // namespace posicert::kv
