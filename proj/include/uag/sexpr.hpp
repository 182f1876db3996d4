#pragma once

// Minimal s-expression reader for workspace documents. Atoms are runs of
// characters other than whitespace, parentheses and ';' (which starts a
// comment running to end of line).

#include <string>
#include <string_view>
#include <vector>

namespace uag {

struct SExpr {
  enum class Kind { Atom, List };

  Kind kind = Kind::Atom;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 0;
  std::size_t col = 0;

  static SExpr make_atom(std::string a) { return {Kind::Atom, std::move(a), {}, 0, 0}; }
  static SExpr make_list(std::vector<SExpr> xs) { return {Kind::List, {}, std::move(xs), 0, 0}; }

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
  /// List whose first item is the atom `head`.
  bool is_form(std::string_view head) const;
  std::size_t size() const { return items.size(); }
  const SExpr& operator[](std::size_t i) const { return items.at(i); }
};

/// Throws Error(Syntax) with "source:line:col" on unbalanced input.
std::vector<SExpr> parse_sexprs(std::string_view text, const std::string& source);
SExpr parse_sexpr(std::string_view text, const std::string& source);

/// Single-line rendering, atoms separated by one space.
std::string to_string(const SExpr& e);

}  // namespace uag
