#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gwlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;         ///< checks passed and runtime within budget
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20261016;
  int threads = 0;        ///< 0: environment or hardware default
  std::vector<int> only;  ///< criterion ids to run; empty runs all
};

inline constexpr int kCriterionCount = 9;

/// Runs the acceptance criteria in order. `on_result` is called after each one.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "[PASS] 1 mean_oracle (3.2 s / 60 s): detail".
std::string format_result(const CriterionResult& r);

}  // namespace gwlab
