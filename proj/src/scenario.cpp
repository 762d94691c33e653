#include "sbm/scenario.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "sbm/bernstein.hpp"
#include "sbm/dirichlet.hpp"
#include "sbm/envelopes.hpp"
#include "sbm/errors.hpp"
#include "sbm/free_kernel.hpp"
#include "sbm/green.hpp"
#include "sbm/report.hpp"

namespace sbm {
namespace {

using json = nlohmann::ordered_json;

class Table {
 public:
  explicit Table(std::string schema, std::vector<std::string> columns)
      : schema_(std::move(schema)), columns_(std::move(columns)) {}

  Table& row() {
    rows_.emplace_back();
    rows_.back().push_back(schema_ + "/" + std::to_string(kCsvSchemaVersion));
    return *this;
  }
  Table& operator<<(double v) { return *this << format_double(v); }
  Table& operator<<(std::size_t v) { return *this << std::to_string(v); }
  Table& operator<<(const std::string& s) {
    rows_.back().push_back(s.find_first_of(",\"") == std::string::npos ? s : '"' + s + '"');
    return *this;
  }

  std::string str() const {
    std::string out = "schema";
    for (const auto& c : columns_) out += "," + c;
    out += "\n";
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
      out += "\n";
    }
    return out;
  }

 private:
  std::string schema_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string point_text(const Point& p) {
  std::string s;
  for (int i = 0; i < p.size(); ++i) s += (i ? "/" : "") + format_double(p(i));
  return s;
}

struct Outcome {
  std::string csv;
  json metrics = json::object();
  bool pass = true;
  std::optional<RatioReport> ratios;
};

std::vector<Point> interior_points(const std::vector<std::string>& entries, const Domain& D) {
  std::vector<Point> pts;
  for (const auto& e : entries) {
    Point p = grid_point(e, D);
    if (!D.contains(p)) throw ConfigError("grid point " + e + " is not inside " + D.id());
    pts.push_back(p);
  }
  return pts;
}

void require_points(std::size_t count) {
  if (count < 10) throw ConfigError("sandwich experiments need at least 10 grid points, got " + std::to_string(count));
}

Outcome run_identities(const ScenarioConfig& c, const SubordinatorModel& model) {
  Table tab("identities", {"model", "r", "Phi", "psi", "identity_error"});
  double worst = 0.0;
  for (double r : c.r) {
    const double e = check_identity_Phi_psi(model, r);
    worst = std::max(worst, e);
    tab.row() << c.model << r << eval_Phi(model, r) << eval_psi(model, r) << e;
  }
  const double pv = std::max(pv_identity_check([](double) { return 1.0; }, 1.0, 0.25),
                             pv_identity_check([](double u) { return u * u; }, 1.0, 0.25));
  Outcome o;
  o.csv = tab.str();
  o.metrics["max_identity_error"] = worst;
  o.metrics["pv_identity_error"] = pv;
  o.pass = worst <= c.identity_tol && pv <= c.identity_tol;
  return o;
}

Outcome run_scaling(const ScenarioConfig& c, const SubordinatorModel& model) {
  Table tab("scaling", {"model", "target", "a", "gamma_hat", "C_L", "delta_hat", "C_U", "holds"});
  Outcome o;
  for (auto target : {ScalingTarget::phi, ScalingTarget::H}) {
    const auto cert = estimate_scaling(model, target, c.scaling_a, c.lambda, c.scale);
    const bool holds = cert.holds(model);
    tab.row() << c.model << std::string(to_string(target)) << cert.a << cert.gamma_hat << cert.C_L_hat
              << cert.delta_hat << cert.C_U_hat << std::string(holds ? "1" : "0");
    o.metrics[std::string(to_string(target))] = {{"gamma_hat", cert.gamma_hat}, {"C_L", cert.C_L_hat},
                                                 {"delta_hat", cert.delta_hat}, {"C_U", cert.C_U_hat},
                                                 {"holds", holds}};
    o.pass = o.pass && holds;
  }
  o.csv = tab.str();
  return o;
}

Outcome run_freekernel(const ScenarioConfig& c, const SubordinatorSampler& sampler) {
  require_points(c.t.size() * c.r.size());
  const auto& model = sampler.model();
  Table tab("freekernel", {"model", "d", "t", "r", "estimate", "std_err", "envelope_lower", "envelope_upper", "n"});
  std::vector<RatioPoint> pts;
  for (std::size_t i = 0; i < c.t.size(); ++i) {
    const double t = c.t[i];
    const auto est = free_kernel_mc(sampler.with_stream(static_cast<std::uint32_t>(i)), t, c.r, c.dim, c.n, c.workers);
    for (std::size_t k = 0; k < c.r.size(); ++k) {
      const RatioPoint p{free_envelope_lower(model, t, c.r[k], c.dim, c.a_L), est.values[k], est.std_err[k],
                         free_envelope_upper(model, t, c.r[k], c.dim, c.a_U)};
      tab.row() << c.model << std::to_string(c.dim) << t << c.r[k] << p.estimate << p.std_err << p.lower << p.upper
                << c.n;
      pts.push_back(p);
    }
  }
  Outcome o;
  o.csv = tab.str();
  o.ratios = make_ratio_report(std::move(pts), c.band, c.slack);
  return o;
}

Outcome run_dirichlet(const ScenarioConfig& c, const SubordinatorSampler& sampler, const Domain& D) {
  const auto xs = interior_points(c.x, D), ys = interior_points(c.y, D);
  require_points(c.t.size() * xs.size() * ys.size());
  Table tab("dirichlet", {"model", "domain", "d", "t", "x", "y", "estimate", "std_err", "envelope_lower",
                          "envelope_upper", "n", "m"});
  std::vector<RatioPoint> pts;
  std::uint32_t stream = 0;
  const KillingOptions opts{c.bridge};
  for (double t : c.t) {
    for (const auto& x : xs) {
      const auto est = killed_kernel_mc(sampler.with_stream(stream++), D, x, ys, t, c.n, c.m, c.workers, opts);
      for (std::size_t k = 0; k < ys.size(); ++k) {
        const auto env = dirichlet_envelope(sampler.model(), D, t, x, ys[k], c.a_L, c.a_U);
        const RatioPoint p{env.lower, est[k].value, est[k].std_err, env.upper};
        tab.row() << c.model << D.id() << std::to_string(c.dim) << t << point_text(x) << point_text(ys[k])
                  << p.estimate << p.std_err << p.lower << p.upper << c.n << c.m;
        pts.push_back(p);
      }
    }
  }
  Outcome o;
  o.csv = tab.str();
  o.ratios = make_ratio_report(std::move(pts), c.band, c.slack);
  return o;
}

Outcome run_survival(const ScenarioConfig& c, const SubordinatorSampler& sampler, const Domain& D) {
  const auto xs = interior_points(c.x, D);
  require_points(c.t.size() * xs.size());
  Table tab("survival", {"model", "domain", "d", "t", "x", "estimate", "std_err", "envelope_lower",
                         "envelope_upper", "n", "m"});
  std::vector<RatioPoint> pts;
  std::uint32_t stream = 0;
  const KillingOptions opts{c.bridge};
  for (double t : c.t) {
    for (const auto& x : xs) {
      const auto est = survival_prob(sampler.with_stream(stream++), D, x, t, c.n, c.m, c.workers, opts);
      const double f = boundary_factor(sampler.model(), t, D.delta(x));
      const RatioPoint p{f, est.value, est.std_err, f};
      tab.row() << c.model << D.id() << std::to_string(c.dim) << t << point_text(x) << p.estimate << p.std_err
                << p.lower << p.upper << c.n << c.m;
      pts.push_back(p);
    }
  }
  Outcome o;
  o.csv = tab.str();
  o.ratios = make_ratio_report(std::move(pts), c.band, c.slack);
  return o;
}

Outcome run_green(const ScenarioConfig& c, const SubordinatorSampler& sampler, const Domain& D) {
  if (!D.bounded()) throw ConfigError("the green experiment needs a bounded domain");
  const auto xs = interior_points(c.x, D), ys = interior_points(c.y, D);
  std::vector<std::pair<Point, Point>> pairs;
  for (const auto& x : xs)
    for (const auto& y : ys)
      if ((x - y).norm() > 0.0) pairs.emplace_back(x, y);
  require_points(pairs.size());
  Table tab("green", {"model", "domain", "d", "x", "y", "estimate", "std_err", "envelope_lower", "envelope_upper",
                      "tail", "tail_flagged", "lambda", "t_max", "n", "m"});
  std::vector<RatioPoint> pts;
  std::size_t flagged = 0;
  std::uint32_t stream = 0;
  GreenOptions opts;
  opts.killing.bridge = c.bridge;
  for (const auto& [x, y] : pairs) {
    const auto g = green_mc(sampler.with_stream(stream++), D, x, y, c.t_max, c.n, c.m, c.workers, opts);
    const double env = green_envelope(sampler.model(), D, x, y);
    flagged += g.tail_flagged;
    tab.row() << c.model << D.id() << std::to_string(c.dim) << point_text(x) << point_text(y) << g.value << g.std_err
              << env << env << g.tail << std::string(g.tail_flagged ? "1" : "0") << g.lambda.rate << c.t_max << c.n
              << c.m;
    pts.push_back({env, g.value, g.std_err, env});
  }
  Outcome o;
  o.csv = tab.str();
  o.metrics["tail_flagged_points"] = flagged;
  o.ratios = make_ratio_report(std::move(pts), c.band, c.slack);
  return o;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') quoted = !quoted;
    else if (ch == ',' && !quoted) out.push_back(std::exchange(cur, {}));
    else if (ch != '\r') cur += ch;
  }
  out.push_back(cur);
  return out;
}

Outcome run_report(const ScenarioConfig& c) {
  const std::string path = c.input.empty() ? (std::filesystem::path(c.out) / "results.csv").string() : c.input;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read report input '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("report input '" + path + "' is empty");
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* need : {"estimate", "std_err", "envelope_lower", "envelope_upper"})
    if (!col.count(need)) throw ConfigError(std::string("report input lacks column '") + need + "'");
  Table tab("report", {"source_row", "estimate", "std_err", "envelope_lower", "envelope_upper", "ratio_lower",
                       "ratio_upper"});
  std::vector<RatioPoint> pts;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw ConfigError("ragged row " + std::to_string(row + 1) + " in " + path);
    RatioPoint p;
    try {
      p = {std::stod(f[col["envelope_lower"]]), std::stod(f[col["estimate"]]), std::stod(f[col["std_err"]]),
           std::stod(f[col["envelope_upper"]])};
    } catch (const std::exception&) {
      throw ConfigError("non-numeric value in row " + std::to_string(row + 1) + " of " + path);
    }
    ++row;
    tab.row() << row << p.estimate << p.std_err << p.lower << p.upper << p.estimate / p.lower << p.estimate / p.upper;
    pts.push_back(p);
  }
  require_points(pts.size());
  Outcome o;
  o.csv = tab.str();
  o.metrics["input"] = path;
  o.ratios = make_ratio_report(std::move(pts), c.band, c.slack);
  return o;
}

json config_json(const ScenarioConfig& c) {
  return {{"experiment", to_string(c.experiment)},
          {"model", c.model},
          {"domain", c.domain},
          {"dim", c.dim},
          {"seed", c.seed},
          {"workers", c.workers},
          {"n", c.n},
          {"m", c.m},
          {"out", c.out},
          {"grid", {{"t", c.t}, {"x", c.x}, {"y", c.y}, {"r", c.r}, {"lambda", c.lambda}, {"scale", c.scale}}},
          {"sampler", {{"scheme", c.scheme}, {"epsilon", c.epsilon}, {"bridge", c.bridge}}},
          {"envelope", {{"a_L", c.a_L}, {"a_U", c.a_U}}},
          {"green", {{"t_max", c.t_max}}},
          {"scaling", {{"a", c.scaling_a}}},
          {"tolerance", {{"identity", c.identity_tol}, {"band", c.band}, {"slack", c.slack}}},
          {"report", {{"input", c.input}}}};
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

SubordinatorSampler make_sampler(const ScenarioConfig& c) {
  const auto model = SubordinatorModel::parse(c.model);
  if (c.scheme == "default") return SubordinatorSampler::make_default(model, c.seed, c.epsilon);
  const auto scheme = c.scheme == "exact_stable" ? SamplingScheme::exact_stable : SamplingScheme::cpp_truncation;
  return SubordinatorSampler(model, scheme, c.epsilon, c.seed);
}

ScenarioResult run_scenario(ScenarioConfig config, bool write_files) {
  const auto start = std::chrono::steady_clock::now();
  ScenarioResult res;
  json summary;
  summary["schema_version"] = kCsvSchemaVersion;
  Outcome out;
  try {
    try {
      config.validate();
      summary["experiment"] = to_string(config.experiment);
      summary["seed"] = config.seed;
      summary["config"] = config_json(config);
      const auto model = SubordinatorModel::parse(config.model);
      const auto D = Domain::parse(config.domain, config.dim);
      switch (config.experiment) {
        case Experiment::identities: out = run_identities(config, model); break;
        case Experiment::scaling: out = run_scaling(config, model); break;
        case Experiment::freekernel: out = run_freekernel(config, make_sampler(config)); break;
        case Experiment::dirichlet: out = run_dirichlet(config, make_sampler(config), D); break;
        case Experiment::survival: out = run_survival(config, make_sampler(config), D); break;
        case Experiment::green: out = run_green(config, make_sampler(config), D); break;
        case Experiment::report: out = run_report(config); break;
      }
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    } catch (const UnsupportedError& e) {
      throw ConfigError(e.what());
    } catch (const ModelError& e) {
      throw ConfigError(e.what());
    }
    if (out.ratios) {
      out.pass = out.pass && out.ratios->pass;
      const auto& k = out.ratios->constants;
      summary["constants"] = {{"c_lower", k.c_lower}, {"c_upper", k.c_upper}, {"c", finite_or_null(k.c())}};
      summary["violations"] = out.ratios->violations;
      summary["in_band"] = out.ratios->in_band;
      summary["points"] = out.ratios->points.size();
    }
    res.status = out.pass ? kPass : kSandwichFailure;
    res.csv = out.csv;
    if (!out.pass) res.message = "sandwich or tolerance check failed";
  } catch (const ConfigError& e) {
    res.status = kConfigError;
    res.message = std::string("config error: ") + e.what();
  } catch (const std::exception& e) {
    res.status = kNumericError;
    res.message = std::string("numeric error: ") + e.what();
  }
  summary["metrics"] = out.metrics;
  summary["pass"] = res.status == kPass;
  summary["status"] = res.status;
  if (!res.message.empty()) summary["message"] = res.message;
  summary["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.summary = summary.dump(2) + "\n";

  if (write_files) {
    try {
      const std::filesystem::path dir(config.out);
      std::filesystem::create_directories(dir);
      if (!res.csv.empty()) std::ofstream(dir / "results.csv", std::ios::binary) << res.csv;
      else std::filesystem::remove(dir / "results.csv");
      std::ofstream(dir / "summary.json", std::ios::binary) << res.summary;
    } catch (const std::exception& e) {
      res.status = kConfigError;
      res.message = std::string("cannot write outputs: ") + e.what();
    }
  }
  return res;
}

}  // namespace sbm
