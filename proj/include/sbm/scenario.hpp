#pragma once

#include <string>

#include "sbm/config.hpp"
#include "sbm/levy.hpp"

namespace sbm {

/// Process exit statuses of a scenario run.
enum ExitStatus : int { kPass = 0, kSandwichFailure = 1, kConfigError = 2, kNumericError = 3 };

/// Version of every results.csv column layout; bumped on any schema change.
inline constexpr int kCsvSchemaVersion = 1;

struct ScenarioResult {
  int status = kPass;
  std::string message;
  /// Contents of results.csv (empty when the run failed before any row).
  std::string csv;
  /// Contents of summary.json.
  std::string summary;
};

/// Validates the config, runs the experiment and, when `write_files` is set,
/// writes <out>/results.csv and <out>/summary.json. Never throws: errors map
/// to kConfigError or kNumericError with the diagnostic in `message`.
ScenarioResult run_scenario(ScenarioConfig config, bool write_files = true);

/// Sampler named by sampler.scheme ("default" picks exact_stable for stable models).
SubordinatorSampler make_sampler(const ScenarioConfig& config);

}  // namespace sbm
