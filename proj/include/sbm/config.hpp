#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sbm/domain.hpp"

namespace sbm {

enum class Experiment { identities, scaling, freekernel, dirichlet, survival, green, report };

std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view name);

/// Everything a scenario run depends on. Keys in the config text are
/// "name" at top level and "table.name" inside a [table]; set() accepts the
/// same keys, which is how command-line flags override the file.
struct ScenarioConfig {
  Experiment experiment = Experiment::identities;
  std::string model = "stable:alpha=1";
  std::string domain = "ball:R=1";
  int dim = 1;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::size_t n = 20000;
  std::size_t m = 200;
  std::string out = "out";

  // [grid]
  std::vector<double> t;
  /// Points are scalars or x1/x2/... coordinate lists; see grid_point().
  std::vector<std::string> x;
  std::vector<std::string> y;
  std::vector<double> r;
  std::vector<double> lambda;
  std::vector<double> scale;

  // [sampler]
  std::string scheme = "default";
  double epsilon = 1e-4;
  bool bridge = false;

  // [envelope]
  double a_L = 0.5;
  double a_U = 0.5;

  // [green]
  double t_max = 6.0;

  // [scaling]
  double scaling_a = 1.0;

  // [tolerance]
  double identity_tol = 1e-6;
  double band = 50.0;
  double slack = 3.0;

  // [report]
  std::string input;

  /// Assigns one key; throws ConfigError for unknown keys or bad values.
  void set(std::string_view key, std::string_view value);
  /// Checks ranges, resolves model and domain ids, fills default grids.
  void validate();
};

/// Parses "key = value" lines with optional [table] headers and # comments.
ScenarioConfig parse_config(std::string_view text, ScenarioConfig base = {});
ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {});

/// A grid entry as a point of R^d. A bare scalar s is placed on the axis that
/// matters for the domain: x_d = s for the half-space, x_1 = s otherwise.
Point grid_point(const std::string& entry, const Domain& domain);

std::vector<double> parse_number_list(std::string_view text);

}  // namespace sbm
