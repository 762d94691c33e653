#pragma once

#include <Eigen/Core>

#include <string>
#include <utility>
#include <vector>

namespace sbm {

/// A point of R^d, d <= 4, stored inline.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

enum class DomainKind { full_space, half_space, ball, exterior_ball, interval_union, annulus };

/// Model C^{1,1} open sets with exact boundary distance.
class Domain {
 public:
  static Domain full_space(int d);
  /// {x : x_d > 0}
  static Domain half_space(int d);
  static Domain ball(const Point& center, double radius);
  static Domain exterior_ball(const Point& center, double radius);
  /// d = 1 union of disjoint open intervals; lengths and gaps must be >= r0.
  static Domain interval_union(std::vector<std::pair<double, double>> intervals, double r0);
  static Domain annulus(const Point& center, double r1, double r2);

  /// "ball:R=1", "half_space", "interval_union:-3,-1,1,3;r0=0.5", "annulus:R1=1,R2=2", ...
  /// centers are the origin unless given as c=x1/x2/...
  static Domain parse(const std::string& spec, int d);

  DomainKind kind() const { return kind_; }
  int dim() const { return d_; }
  bool bounded() const;
  std::string id() const;

  /// Distance to the complement; 0 outside D, +inf for the full space.
  double delta(const Point& x) const;
  bool contains(const Point& x) const { return delta(x) > 0.0; }
  /// Positive inside, negative outside, 0 on the boundary.
  double signed_delta(const Point& x) const;
  bool in_closure(const Point& x) const { return signed_delta(x) >= 0.0; }

  /// Point reflected across the boundary hyperplane (half-space only).
  Point reflect(const Point& x) const;

  const Point& center() const { return center_; }
  double radius() const { return r1_; }
  double outer_radius() const { return r2_; }
  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }

 private:
  Domain(DomainKind kind, int d) : kind_(kind), d_(d) {}

  DomainKind kind_;
  int d_;
  Point center_;
  double r1_ = 0.0;
  double r2_ = 0.0;
  std::vector<std::pair<double, double>> intervals_;
};

/// Origin of R^d.
Point origin(int d);
/// Point from coordinates.
Point make_point(std::initializer_list<double> coords);

}  // namespace sbm
