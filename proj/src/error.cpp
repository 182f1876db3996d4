#include "uag/error.hpp"

#include <cstdlib>
#include <limits>

namespace uag {

namespace {

std::size_t initial_cap() {
  if (const char* env = std::getenv("UAG_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::size_t{1} << 20;
}

std::atomic<std::size_t>& cap_storage() {
  static std::atomic<std::size_t> cap{initial_cap()};
  return cap;
}

}  // namespace

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::Sort: return "sort error";
    case ErrorKind::Arity: return "arity error";
    case ErrorKind::Reference: return "dangling reference";
    case ErrorKind::CapExceeded: return "cap exceeded";
    case ErrorKind::NotCongruence: return "not a congruence";
    case ErrorKind::Usage: return "usage error";
    case ErrorKind::Invalid: return "invalid argument";
  }
  return "error";
}

std::size_t enumeration_cap() { return cap_storage().load(std::memory_order_relaxed); }

void set_enumeration_cap(std::size_t cap) { cap_storage().store(cap == 0 ? 1 : cap, std::memory_order_relaxed); }

void check_cap(std::size_t count, const char* what) {
  const std::size_t cap = enumeration_cap();
  if (count > cap) {
    throw Error(ErrorKind::CapExceeded, std::string(what) + " needs " +
                                            (count == std::numeric_limits<std::size_t>::max()
                                                 ? std::string("more than 2^64")
                                                 : std::to_string(count)) +
                                            " entries; cap is " + std::to_string(cap));
  }
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::size_t>::max() / b) return std::numeric_limits<std::size_t>::max();
  return a * b;
}

}  // namespace uag
