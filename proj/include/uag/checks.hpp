#pragma once

// Seeded invariant suites exposed through `check --suite NAME`.

#include <cstdint>
#include <string>
#include <vector>

namespace uag {

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::vector<std::string> failures;  // first few, with the instance spelled out
  std::size_t failure_count = 0;
  bool passed() const { return failure_count == 0; }
};

/// terms, congruence, galois, closure, halmos.
std::vector<std::string> suite_names();
/// Throws Error(Usage) for an unknown suite name; "all" runs every suite.
std::vector<SuiteResult> run_suite(const std::string& name, std::uint64_t seed);

}  // namespace uag
