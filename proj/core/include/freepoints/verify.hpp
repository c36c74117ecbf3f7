#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace freepoints {

struct PropertyResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::int64_t checked = 0;
  std::string detail;
};

struct SuiteReport {
  std::vector<PropertyResult> results;
  bool passed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int samples = 100;  // random instances per randomized property
};

inline constexpr std::string_view kSuiteNames[] = {"lattices", "theta", "freeness", "circle",
                                                   "densities"};

// suite ∈ {lattices, theta, freeness, circle, densities, all}; "all" runs them
// in the order of kSuiteNames.  Throws `DomainError` for an unknown name.
SuiteReport RunSuite(std::string_view suite, VerifyOptions const& options = {});

std::string ReportJson(SuiteReport const& report);

}  // namespace freepoints
