#pragma once

#include <string>
#include <vector>

#include "swarmsym/configuration.hpp"

namespace swarmsym {

// One regular m-gon ring centred at the centroid. m = 1 is a single point
// (the centre ring or a lone robot on its circle).
struct PolygonRing {
  double radius = 0.0;
  int m = 0;
  double start_angle = 0.0;
  std::vector<int> labels;  // zero-based, ascending
};

struct StructureReport {
  std::vector<std::vector<int>> collision_classes;
  bool collinear = false;
  double collinear_axis = 0.0;  // angle in [0, pi), meaningful when collinear
  bool has_polygon_partition = false;
  std::vector<PolygonRing> polygon_partition;
  std::vector<double> reflection_axes;  // ascending, in [0, pi)
  int rotational_order = 1;
  bool full_symmetry = false;  // all robots collided
};

StructureReport classify_structure(const Configuration& z, double tol = kDefaultTol);

// Groups labels whose positions are within tol * diameter of each other
// (transitively). Classes are ordered by their smallest label.
std::vector<std::vector<int>> collision_classes(const Configuration& z, double tol = kDefaultTol);

std::string structure_to_json(const StructureReport& report);

}  // namespace swarmsym
