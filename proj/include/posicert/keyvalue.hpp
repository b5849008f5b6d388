#pragma once

// Line-oriented `key = value` dialect shared by problem and certificate files.
// `#` starts a comment outside of double quotes.

#include "posicert/parse.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace posicert::kv {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

/// Splits a document into entries, in file order. Throws ParseError on lines
/// without `=` or with an invalid key.
std::vector<Entry> read_entries(std::string_view document);

/// `"text"` -> text. Backslash escapes `\"` and `\\`.
std::string unquote(std::string_view value);
std::string quote(std::string_view text);

/// `["a", "b"]` -> {a, b}.
std::vector<std::string> quoted_list(std::string_view value);

/// Top-level comma split of a bracketed list `[a, (b, c), "d, e"]`.
std::vector<std::string> split_list(std::string_view value, char open = '[', char close = ']');

/// `x, y, z` -> names.
std::vector<std::string> name_list(std::string_view value);

std::string trim(std::string_view s);

[[noreturn]] void fail(const Entry& entry, const std::string& what);

}  // namespace posicert::kv
