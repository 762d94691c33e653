#include "sbm/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "sbm/errors.hpp"

namespace sbm {
namespace {

void require_dim(int d) {
  if (d < 1 || d > 4) throw DomainError("dimension must lie in 1..4");
}

void require_point(const Point& x, int d) {
  if (x.size() != d) throw DomainError("point has the wrong dimension");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number in domain spec: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number in domain spec: '" + s + "'");
  return v;
}

}  // namespace

Point origin(int d) {
  require_dim(d);
  return Point::Zero(d);
}

Point make_point(std::initializer_list<double> coords) {
  require_dim(static_cast<int>(coords.size()));
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) p(i++) = c;
  return p;
}

Domain Domain::full_space(int d) {
  require_dim(d);
  return Domain(DomainKind::full_space, d);
}

Domain Domain::half_space(int d) {
  require_dim(d);
  return Domain(DomainKind::half_space, d);
}

Domain Domain::ball(const Point& center, double radius) {
  require_dim(static_cast<int>(center.size()));
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  Domain D(DomainKind::ball, static_cast<int>(center.size()));
  D.center_ = center;
  D.r1_ = radius;
  return D;
}

Domain Domain::exterior_ball(const Point& center, double radius) {
  Domain D = ball(center, radius);
  D.kind_ = DomainKind::exterior_ball;
  return D;
}

Domain Domain::interval_union(std::vector<std::pair<double, double>> intervals, double r0) {
  if (intervals.empty()) throw DomainError("interval_union needs at least one interval");
  if (!(r0 > 0.0)) throw DomainError("interval_union needs r0 > 0");
  std::sort(intervals.begin(), intervals.end());
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto [a, b] = intervals[i];
    if (!(b - a >= r0)) throw DomainError("interval shorter than r0");
    if (i > 0 && !(a - intervals[i - 1].second >= r0)) throw DomainError("gap between intervals shorter than r0");
  }
  Domain D(DomainKind::interval_union, 1);
  D.intervals_ = std::move(intervals);
  D.r1_ = r0;
  return D;
}

Domain Domain::annulus(const Point& center, double r1, double r2) {
  require_dim(static_cast<int>(center.size()));
  if (!(r1 > 0.0 && r2 > r1)) throw DomainError("annulus needs 0 < R1 < R2");
  Domain D(DomainKind::annulus, static_cast<int>(center.size()));
  D.center_ = center;
  D.r1_ = r1;
  D.r2_ = r2;
  return D;
}

Domain Domain::parse(const std::string& spec, int d) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::map<std::string, std::string> kv;
  std::vector<double> ends;
  if (colon != std::string::npos) {
    for (const auto& part : split(spec.substr(colon + 1), ';')) {
      if (part.empty()) continue;
      if (name == "interval_union" && part.find('=') == std::string::npos) {
        for (const auto& e : split(part, ',')) ends.push_back(to_double(e));
        continue;
      }
      for (const auto& item : split(part, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value in domain spec '" + spec + "'");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
      }
    }
  }
  auto take = [&](const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const double v = to_double(it->second);
    kv.erase(it);
    return v;
  };
  auto take_center = [&]() {
    Point c = origin(d);
    auto it = kv.find("c");
    if (it == kv.end()) return c;
    const auto coords = split(it->second, '/');
    if (static_cast<int>(coords.size()) != d) throw ConfigError("center has the wrong dimension");
    for (int i = 0; i < d; ++i) c(i) = to_double(coords[i]);
    kv.erase(it);
    return c;
  };
  Domain D = full_space(d);
  if (name == "full_space") {
  } else if (name == "half_space") {
    D = half_space(d);
  } else if (name == "ball") {
    const Point c = take_center();
    D = ball(c, take("R", 1.0));
  } else if (name == "exterior_ball") {
    const Point c = take_center();
    D = exterior_ball(c, take("R", 1.0));
  } else if (name == "annulus") {
    const Point c = take_center();
    const double r1 = take("R1", 1.0);
    D = annulus(c, r1, take("R2", 2.0));
  } else if (name == "interval_union") {
    if (d != 1) throw ConfigError("interval_union is one-dimensional");
    if (ends.empty() || ends.size() % 2 != 0) throw ConfigError("interval_union needs an even list of endpoints");
    std::vector<std::pair<double, double>> iv;
    for (std::size_t i = 0; i < ends.size(); i += 2) iv.emplace_back(ends[i], ends[i + 1]);
    D = interval_union(iv, take("r0", 0.1));
  } else {
    throw ConfigError("unknown domain '" + name + "'");
  }
  if (!kv.empty()) throw ConfigError("unknown key '" + kv.begin()->first + "' in domain spec '" + spec + "'");
  return D;
}

bool Domain::bounded() const {
  return kind_ == DomainKind::ball || kind_ == DomainKind::interval_union || kind_ == DomainKind::annulus;
}

std::string Domain::id() const {
  std::ostringstream os;
  os.precision(17);
  auto center = [&] {
    if (center_.isZero()) return;
    os << ";c=";
    for (int i = 0; i < d_; ++i) os << (i ? "/" : "") << center_(i);
  };
  switch (kind_) {
    case DomainKind::full_space: os << "full_space"; break;
    case DomainKind::half_space: os << "half_space"; break;
    case DomainKind::ball: os << "ball:R=" << r1_; center(); break;
    case DomainKind::exterior_ball: os << "exterior_ball:R=" << r1_; center(); break;
    case DomainKind::annulus: os << "annulus:R1=" << r1_ << ",R2=" << r2_; center(); break;
    case DomainKind::interval_union:
      os << "interval_union:";
      for (std::size_t i = 0; i < intervals_.size(); ++i)
        os << (i ? "," : "") << intervals_[i].first << "," << intervals_[i].second;
      os << ";r0=" << r1_;
      break;
  }
  return os.str();
}

double Domain::signed_delta(const Point& x) const {
  require_point(x, d_);
  switch (kind_) {
    case DomainKind::full_space:
      return std::numeric_limits<double>::infinity();
    case DomainKind::half_space:
      return x(d_ - 1);
    case DomainKind::ball:
      return r1_ - (x - center_).norm();
    case DomainKind::exterior_ball:
      return (x - center_).norm() - r1_;
    case DomainKind::annulus: {
      const double n = (x - center_).norm();
      return std::min(n - r1_, r2_ - n);
    }
    case DomainKind::interval_union: {
      double v = -std::numeric_limits<double>::infinity();
      for (const auto& [a, b] : intervals_) v = std::max(v, std::min(x(0) - a, b - x(0)));
      return v;
    }
  }
  return 0.0;
}

double Domain::delta(const Point& x) const { return std::max(signed_delta(x), 0.0); }

Point Domain::reflect(const Point& x) const {
  if (kind_ != DomainKind::half_space) throw UnsupportedError("reflection is defined for the half-space only");
  require_point(x, d_);
  Point y = x;
  y(d_ - 1) = -y(d_ - 1);
  return y;
}

}  // namespace sbm
