#include "uag/sexpr.hpp"

#include "uag/error.hpp"

namespace uag {

bool SExpr::is_form(std::string_view head) const {
  return is_list() && !items.empty() && items[0].is_atom() && items[0].atom == head;
}

namespace {

class Reader {
 public:
  Reader(std::string_view text, const std::string& source) : text_(text), source_(source) {}

  std::vector<SExpr> all() {
    std::vector<SExpr> out;
    skip();
    while (pos_ < text_.size()) {
      out.push_back(one());
      skip();
    }
    return out;
  }

 private:
  std::string where(std::size_t line, std::size_t col) const {
    return source_ + ":" + std::to_string(line) + ":" + std::to_string(col);
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        bump();
      } else {
        break;
      }
    }
  }

  SExpr one() {
    SExpr e;
    e.line = line_;
    e.col = col_;
    char c = text_[pos_];
    if (c == ')') throw Error(ErrorKind::Syntax, "unexpected ')'", where(line_, col_));
    if (c == '(') {
      e.kind = SExpr::Kind::List;
      bump();
      skip();
      while (true) {
        if (pos_ >= text_.size()) throw Error(ErrorKind::Syntax, "unclosed '('", where(e.line, e.col));
        if (text_[pos_] == ')') {
          bump();
          break;
        }
        e.items.push_back(one());
        skip();
      }
      return e;
    }
    while (pos_ < text_.size()) {
      c = text_[pos_];
      if (c == '(' || c == ')' || c == ';' || c == ' ' || c == '\t' || c == '\n' || c == '\r') break;
      e.atom.push_back(c);
      bump();
    }
    return e;
  }

  std::string_view text_;
  const std::string& source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view text, const std::string& source) {
  return Reader(text, source).all();
}

SExpr parse_sexpr(std::string_view text, const std::string& source) {
  auto all = parse_sexprs(text, source);
  if (all.size() != 1)
    throw Error(ErrorKind::Syntax, "expected exactly one expression, found " + std::to_string(all.size()),
                source + ":1:1");
  return all[0];
}

std::string to_string(const SExpr& e) {
  if (e.is_atom()) return e.atom;
  std::string out = "(";
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    if (i) out += ' ';
    out += to_string(e.items[i]);
  }
  return out + ")";
}

}  // namespace uag
