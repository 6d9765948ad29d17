#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ctxlab {

struct CriterionResult {
  int id = 0;
  std::string title;
  /// The claim being reproduced, printed when the check fails.
  std::string claim;
  bool passed = false;
  std::string detail;
  double seconds = 0;
  double budget_seconds = 0;
};

struct SelftestOptions {
  std::uint64_t seed = 20240601;
  /// Random models for the completeness pipeline check.
  std::size_t random_models = 200;
};

inline constexpr int kNumCriteria = 11;

/// Runs one acceptance criterion (1..kNumCriteria). Exceptions count as failures.
CriterionResult run_criterion(int id, const SelftestOptions& options = {});

std::vector<CriterionResult> run_selftest(const SelftestOptions& options = {});

/// "PASS  3  GHZ(3) ... (0.02 s)"
std::string format_result(const CriterionResult& result);

}  // namespace ctxlab
