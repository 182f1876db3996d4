#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "uag/galois.hpp"
#include "uag/library.hpp"

namespace testing {

// Reads terms written as mul(x, inv(y)); bare names are operations when the
// signature declares them, else variables of sort 0.
class TermReader {
 public:
  TermReader(const uag::Signature& sig, std::string_view s) : sig_(sig), s_(s) {}

  uag::Term read() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    skip();
    std::vector<uag::Term> kids;
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      while (true) {
        kids.push_back(read());
        skip();
        if (s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        ++pos_;  // ')'
        break;
      }
    }
    if (auto op = sig_.find_op(name)) return uag::Term::make(sig_, *op, std::move(kids));
    return uag::Term::var(name, 0);
  }

 private:
  void skip() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }
  const uag::Signature& sig_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

inline uag::Term term(const uag::Signature& sig, std::string_view s) { return TermReader(sig, s).read(); }

inline uag::TermPair tpair(const uag::Signature& sig, std::string_view a, std::string_view b) {
  return uag::canonical_pair(term(sig, a), term(sig, b));
}

inline uag::Term gt(std::string_view s) { return term(*uag::group_signature(), s); }
inline uag::TermPair gp(std::string_view a, std::string_view b) { return tpair(*uag::group_signature(), a, b); }

inline uag::VarContext X1() { return uag::standard_context(*uag::group_signature(), 1); }
inline uag::VarContext X2() { return uag::standard_context(*uag::group_signature(), 2); }
inline uag::VarContext X3() { return uag::standard_context(*uag::group_signature(), 3); }

inline uag::AlgebraPtr alg(std::string_view name) { return *uag::builtin_algebra(name); }

}  // namespace testing
