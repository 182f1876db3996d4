#pragma once

#include <atomic>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace uag {

enum class ErrorKind {
  Syntax,
  Sort,
  Arity,
  Reference,
  CapExceeded,
  NotCongruence,
  Usage,
  Invalid,
};

const char* error_kind_name(ErrorKind kind);

/// Base error for every failure raised by the workbench. Location is
/// "source:line:col" when the error comes from a parsed document.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string location = {})
      : std::runtime_error(location.empty() ? message : location + ": " + message),
        kind_(kind),
        location_(std::move(location)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& location() const noexcept { return location_; }

 private:
  ErrorKind kind_;
  std::string location_;
};

/// Process-wide guard on enumeration sizes (points, homs, products).
/// Initialised from UAG_CAP when set, else 2^20.
std::size_t enumeration_cap();
void set_enumeration_cap(std::size_t cap);

/// Throws CapExceeded when `count` is above the current cap.
void check_cap(std::size_t count, const char* what);

/// Saturating multiply used when sizing enumerations.
std::size_t saturating_mul(std::size_t a, std::size_t b);

class ScopedCap {
 public:
  explicit ScopedCap(std::size_t cap) : saved_(enumeration_cap()) { set_enumeration_cap(cap); }
  ~ScopedCap() { set_enumeration_cap(saved_); }
  ScopedCap(const ScopedCap&) = delete;
  ScopedCap& operator=(const ScopedCap&) = delete;

 private:
  std::size_t saved_;
};

}  // namespace uag
