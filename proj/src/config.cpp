#include "sbm/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sbm/bernstein.hpp"
#include "sbm/errors.hpp"

namespace sbm {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string s = trim(text);
  if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_number(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError("'" + std::string(key) + "': not a number: '" + s + "'");
  return v;
}

template <class Int>
Int to_integer(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  Int v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && p == s.data() + s.size()) return v;
  // allow 2e4 style counts
  const double d = to_number(key, s);
  if (d < 0 || d != std::floor(d)) throw ConfigError("'" + std::string(key) + "': not a nonnegative integer");
  return static_cast<Int>(d);
}

bool to_bool(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("'" + std::string(key) + "': not a boolean: '" + s + "'");
}

std::vector<double> log_grid(double a, double b, int k) {
  std::vector<double> g;
  for (int i = 0; i < k; ++i) g.push_back(a * std::pow(b / a, static_cast<double>(i) / (k - 1)));
  return g;
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::identities: return "identities";
    case Experiment::scaling: return "scaling";
    case Experiment::freekernel: return "freekernel";
    case Experiment::dirichlet: return "dirichlet";
    case Experiment::survival: return "survival";
    case Experiment::green: return "green";
    case Experiment::report: return "report";
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  for (auto e : {Experiment::identities, Experiment::scaling, Experiment::freekernel, Experiment::dirichlet,
                 Experiment::survival, Experiment::green, Experiment::report})
    if (to_string(e) == name) return e;
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(to_number("list", item));
  return out;
}

void ScenarioConfig::set(std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  if (key == "experiment") experiment = parse_experiment(v);
  else if (key == "model") model = v;
  else if (key == "domain") domain = v;
  else if (key == "dim" || key == "d") dim = to_integer<int>(key, v);
  else if (key == "seed") seed = to_integer<std::uint64_t>(key, v);
  else if (key == "workers") workers = to_integer<unsigned>(key, v);
  else if (key == "n") n = to_integer<std::size_t>(key, v);
  else if (key == "m") m = to_integer<std::size_t>(key, v);
  else if (key == "out" || key == "output.dir") out = v;
  else if (key == "grid.t") t = parse_number_list(v);
  else if (key == "grid.x") x = split_list(v);
  else if (key == "grid.y") y = split_list(v);
  else if (key == "grid.r") r = parse_number_list(v);
  else if (key == "grid.lambda") lambda = parse_number_list(v);
  else if (key == "grid.scale") scale = parse_number_list(v);
  else if (key == "sampler.scheme") scheme = v;
  else if (key == "sampler.epsilon") epsilon = to_number(key, v);
  else if (key == "sampler.bridge") bridge = to_bool(key, v);
  else if (key == "envelope.a_L") a_L = to_number(key, v);
  else if (key == "envelope.a_U") a_U = to_number(key, v);
  else if (key == "green.t_max") t_max = to_number(key, v);
  else if (key == "scaling.a") scaling_a = to_number(key, v);
  else if (key == "tolerance.identity") identity_tol = to_number(key, v);
  else if (key == "tolerance.band") band = to_number(key, v);
  else if (key == "tolerance.slack") slack = to_number(key, v);
  else if (key == "report.input") input = v;
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void ScenarioConfig::validate() {
  if (dim < 1 || dim > 4) throw ConfigError("dim must be in 1..4");
  if (n < 1 || m < 1) throw ConfigError("n and m must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (scheme != "default" && scheme != "exact_stable" && scheme != "cpp_truncation")
    throw ConfigError("sampler.scheme must be default, exact_stable or cpp_truncation");
  if (!(epsilon > 0.0)) throw ConfigError("sampler.epsilon must be positive");
  if (!(a_L > 0.0) || !(a_U > 0.0)) throw ConfigError("envelope constants must be positive");
  if (!(band >= 1.0)) throw ConfigError("tolerance.band must be >= 1");
  if (!(slack >= 0.0)) throw ConfigError("tolerance.slack must be >= 0");
  if (!(t_max > 0.0)) throw ConfigError("green.t_max must be positive");
  // resolve ids, normalizing their spelling
  try {
    model = SubordinatorModel::parse(model).id();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  try {
    domain = Domain::parse(domain, dim).id();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }

  auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("grid.") + what + " must be nonempty");
  };
  auto positive = [](const std::vector<double>& g, const char* what) {
    for (double v : g)
      if (!(v > 0.0)) throw ConfigError(std::string("grid.") + what + " entries must be positive");
  };
  switch (experiment) {
    case Experiment::identities:
      if (r.empty()) r = log_grid(1e-3, 1.0, 31);
      positive(r, "r");
      break;
    case Experiment::scaling:
      if (!(scaling_a >= 0.0)) throw ConfigError("scaling.a must be >= 0");
      if (lambda.empty()) {
        const double lo = scaling_a > 0.0 ? 1.25 * scaling_a : 1.0;
        lambda = log_grid(lo, 1e8 * lo, 33);
      }
      if (scale.empty()) scale = log_grid(1.0, 1e4, 17);
      positive(lambda, "lambda");
      for (double s : scale)
        if (!(s >= 1.0)) throw ConfigError("grid.scale entries must be >= 1");
      break;
    case Experiment::freekernel:
      need(!t.empty(), "t");
      need(!r.empty(), "r");
      positive(t, "t");
      for (double v : r)
        if (!(v >= 0.0)) throw ConfigError("grid.r entries must be >= 0");
      break;
    case Experiment::dirichlet:
      need(!t.empty(), "t");
      need(!x.empty(), "x");
      need(!y.empty(), "y");
      positive(t, "t");
      break;
    case Experiment::survival:
      need(!t.empty(), "t");
      need(!x.empty(), "x");
      positive(t, "t");
      break;
    case Experiment::green:
      need(!x.empty(), "x");
      need(!y.empty(), "y");
      break;
    case Experiment::report:
      break;
  }
}

ScenarioConfig parse_config(std::string_view text, ScenarioConfig base) {
  std::string table;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated table header");
      table = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(s.substr(0, eq));
    try {
      base.set(table.empty() ? key : table + "." + key, s.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

ScenarioConfig load_config(const std::string& path, ScenarioConfig base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

Point grid_point(const std::string& entry, const Domain& domain) {
  const int d = domain.dim();
  Point p = origin(d);
  std::vector<double> c;
  std::stringstream ss(entry);
  std::string item;
  while (std::getline(ss, item, '/')) c.push_back(to_number("point", item));
  if (c.size() == 1) {
    p(domain.kind() == DomainKind::half_space ? d - 1 : 0) = c[0];
  } else if (static_cast<int>(c.size()) == d) {
    for (int i = 0; i < d; ++i) p(i) = c[i];
  } else {
    throw ConfigError("point '" + entry + "' does not match dimension " + std::to_string(d));
  }
  return p;
}

}  // namespace sbm
