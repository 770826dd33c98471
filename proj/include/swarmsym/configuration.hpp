#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace swarmsym {

using Point = Eigen::Vector2d;

// Relative tolerance used for geometric comparisons unless a caller overrides it.
inline constexpr double kDefaultTol = 1e-9;
// Absolute tolerance used when the swarm has collapsed to a single point.
inline constexpr double kCoincidentTol = 1e-12;

// Ordered tuple of n planar robot positions, stored in the stacked form
// z = (x_1, y_1, ..., x_n, y_n). Robot labels are the positional indices.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(Eigen::VectorXd coords);
  explicit Configuration(const std::vector<Point>& points);
  Configuration(std::initializer_list<std::pair<double, double>> points);

  int size() const { return static_cast<int>(coords_.size() / 2); }
  Point point(int i) const { return {coords_[2 * i], coords_[2 * i + 1]}; }
  void set_point(int i, const Point& p) {
    coords_[2 * i] = p.x();
    coords_[2 * i + 1] = p.y();
  }
  std::vector<Point> points() const;
  const Eigen::VectorXd& coords() const { return coords_; }

  bool operator==(const Configuration& other) const { return coords_ == other.coords_; }

 private:
  Eigen::VectorXd coords_;
};

Point centroid(const Configuration& z);

// Translates the swarm so that its centroid is the origin. Applying it to an
// already centered configuration returns the input unchanged.
Configuration center(const Configuration& z);

// Largest pairwise Euclidean distance; zero iff all robots coincide.
double diameter(const Configuration& z);

// Absolute comparison threshold derived from a relative tolerance.
double scaled_tolerance(const Configuration& z, double tol);

Configuration rotated(const Configuration& z, double angle);
Configuration translated(const Configuration& z, const Point& offset);

// Euclidean norm of the difference in R^{2n}.
double distance(const Configuration& a, const Configuration& b);

// {"positions": [[x, y], ...]}
Configuration configuration_from_json(const std::string& text);
std::string configuration_to_json(const Configuration& z);
Configuration read_configuration(const std::filesystem::path& path);
void write_configuration(const std::filesystem::path& path, const Configuration& z);

}  // namespace swarmsym
