#include "swarmsym/fixtures.hpp"

#include <cmath>
#include <vector>

#include "swarmsym/errors.hpp"
#include "swarmsym/symmetry.hpp"

namespace swarmsym::fixtures {

namespace {

Point polar(double r, double degrees) {
  const double a = degrees * kPi / 180.0;
  return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace

Configuration triangle() {
  return Configuration(std::vector<Point>{polar(1.0, 90.0), polar(1.0, 210.0), polar(1.0, 330.0)});
}

Configuration regular_polygon(int m, double r, double phase) {
  if (m < 1) throw InputError("polygon needs at least one vertex");
  std::vector<Point> points;
  for (int k = 0; k < m; ++k) {
    const double a = phase + kTwoPi * k / m;
    points.emplace_back(r * std::cos(a), r * std::sin(a));
  }
  return Configuration(points);
}

Configuration star16(double amplitude) {
  std::vector<Point> points;
  for (int k = 0; k < 16; ++k) {
    const double r = 1.0 + (k % 2 == 0 ? amplitude : -amplitude);
    const double a = kTwoPi * k / 16;
    points.emplace_back(r * std::cos(a), r * std::sin(a));
  }
  return Configuration(points);
}

Configuration two_triangles() {
  return Configuration(std::vector<Point>{polar(2.0, 90.0), polar(1.0, 120.0), polar(2.0, 210.0),
                                          polar(1.0, 240.0), polar(2.0, 330.0), polar(1.0, 0.0)});
}

}  // namespace swarmsym::fixtures
