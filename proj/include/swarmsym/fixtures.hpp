#pragma once

#include "swarmsym/configuration.hpp"

namespace swarmsym::fixtures {

// Unit equilateral triangle, labels counterclockwise from the top vertex.
Configuration triangle();

// Regular m-gon of radius r, vertex k at angle phase + 2 pi k / m.
Configuration regular_polygon(int m, double r = 1.0, double phase = 0.0);

// 16-gon with radii alternating 1 + a, 1 - a (even labels outward).
Configuration star16(double amplitude);

// Outer triangle (labels 1, 3, 5) of radius 2 at 90, 210, 330 degrees and
// inner triangle (labels 2, 4, 6) of radius 1 at 120, 240, 0 degrees.
Configuration two_triangles();

}  // namespace swarmsym::fixtures
