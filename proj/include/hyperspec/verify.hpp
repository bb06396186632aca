#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace hyperspec {

/// Outcome of one acceptance criterion. Artifacts hold only seeded, deterministic content;
/// wall time is reported separately.
struct CriterionResult {
  int id = 0;
  std::string title;
  bool numeric_pass = false;
  double seconds = 0.0;
  /// Runtime budget in seconds; infinity when the criterion has none.
  double budget_seconds = 0.0;
  /// One-line summary of the measured quantities.
  std::string summary;
  /// (file name, content) pairs.
  std::vector<std::pair<std::string, std::string>> artifacts;

  bool within_budget() const { return seconds <= budget_seconds; }
  bool pass() const { return numeric_pass && within_budget(); }
};

struct SuiteOptions {
  std::uint64_t seed = 7;
  int workers = 0;  // replica workers; 0: hardware concurrency
};

/// Criterion ids 1..8 for "all", otherwise a comma-separated list of ids or names
/// (plancherel, functional-equation, heat-transform, ginibre, poisson, bergman-gaf, heat-equivalence, gaussian).
std::vector<int> parse_suite(const std::string& suite);

CriterionResult run_criterion(int id, const SuiteOptions& options);

/// Writes the artifacts of each result plus summary.json (seed, version, numeric pass flags) into dir.
void write_suite_artifacts(const std::vector<CriterionResult>& results, const SuiteOptions& options,
                           const std::filesystem::path& dir);

/// "PASS [criterion 4] title: summary (12.3 s, budget 600 s)".
std::string format_result_line(const CriterionResult& result);

/// Byte comparison of the regular files of two directories; returns the differing or missing names.
std::vector<std::string> compare_directories(const std::filesystem::path& a, const std::filesystem::path& b);

}  // namespace hyperspec
