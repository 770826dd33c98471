#pragma once

// Random configuration and group generators shared by the property tests
// and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "swarmsym/configuration.hpp"
#include "swarmsym/fixtures.hpp"
#include "swarmsym/symmetry.hpp"

namespace swarmsym::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Configuration random_configuration(std::mt19937_64& rng, int n, double scale = 1.0) {
  Eigen::VectorXd v(2 * n);
  for (int k = 0; k < 2 * n; ++k) v[k] = uniform(rng, -scale, scale);
  return Configuration(v);
}

inline Permutation random_permutation(std::mt19937_64& rng, int n) {
  std::vector<int> image(n);
  std::iota(image.begin(), image.end(), 0);
  std::shuffle(image.begin(), image.end(), rng);
  return Permutation(image);
}

inline OrthogonalElement random_orthogonal(std::mt19937_64& rng) {
  const double a = uniform(rng, 0.0, kTwoPi);
  return uniform_int(rng, 0, 1) ? OrthogonalElement::rotation(a) : OrthogonalElement::reflection(a / 2);
}

inline SymmetryElement random_element(std::mt19937_64& rng, int n) {
  return {random_orthogonal(rng), random_permutation(rng, n)};
}

// A configuration with a prescribed kind of symmetry, randomly rotated,
// scaled and relabelled.
inline Configuration symmetric_template(std::mt19937_64& rng, int n) {
  std::vector<Point> pts;
  const int kind = uniform_int(rng, 0, 5);
  auto ring = [&](int m, double r, double phase) {
    for (int k = 0; k < m; ++k) {
      const double a = phase + kTwoPi * k / m;
      pts.emplace_back(r * std::cos(a), r * std::sin(a));
    }
  };
  if (kind == 0) {
    ring(n, uniform(rng, 0.5, 2.0), 0.0);
  } else if (kind == 1 && n % 2 == 0 && n >= 4) {
    ring(n / 2, uniform(rng, 0.5, 1.0), 0.0);
    ring(n / 2, uniform(rng, 1.2, 2.0), uniform(rng, 0.0, kTwoPi / (n / 2)));
  } else if (kind == 2 && n >= 3) {
    pts.emplace_back(0.0, 0.0);
    ring(n - 1, uniform(rng, 0.5, 2.0), 0.0);
  } else if (kind == 3) {
    for (int k = 0; k + 1 < n; k += 2) {
      const double x = uniform(rng, -2.0, 2.0), y = uniform(rng, 0.2, 2.0);
      pts.emplace_back(x, y);
      pts.emplace_back(x, -y);
    }
    if (n % 2) pts.emplace_back(uniform(rng, -2.0, 2.0), 0.0);
  } else if (kind == 4 && n % 2 == 0) {
    for (int k = 0; k < n; k += 2) {
      const Point p(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0));
      pts.push_back(p);
      pts.push_back(-p);
    }
  } else {
    for (int k = 0; k < n; ++k) pts.emplace_back(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0));
  }
  const Permutation shuffle = random_permutation(rng, n);
  std::vector<Point> relabelled(n);
  for (int i = 0; i < n; ++i) relabelled[i] = pts[shuffle(i)];
  return rotated(Configuration(relabelled), uniform(rng, 0.0, kTwoPi));
}

// A random point of Fix(H) for a detected isotropy group H of a random template.
struct SymmetrizedSample {
  SymmetryGroup group;
  Configuration z;
};

inline SymmetrizedSample symmetrized(std::mt19937_64& rng, int n) {
  const SymmetryGroup h = detect_symmetries(symmetric_template(rng, n));
  const Eigen::VectorXd v = project_to_fixed(h, random_configuration(rng, n, 2.0).coords());
  return {h, Configuration(v)};
}

}  // namespace swarmsym::testing
