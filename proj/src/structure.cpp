#include "swarmsym/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "swarmsym/errors.hpp"
#include "swarmsym/symmetry.hpp"

namespace swarmsym {

namespace {

double angle_of(const Point& p) {
  double a = std::atan2(p.y(), p.x());
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

struct Site {
  Point position;
  double radius;
  double angle;
  std::vector<int> labels;
};

bool is_regular(const std::vector<const Site*>& sites, double radius, double eps) {
  const int m = static_cast<int>(sites.size());
  if (m < 2) return true;
  const double expected = kTwoPi / m;
  const double slack = eps / radius;
  for (int i = 0; i < m; ++i) {
    double gap = sites[(i + 1) % m]->angle - sites[i]->angle;
    if (i == m - 1) gap += kTwoPi;
    if (std::fabs(gap - expected) > slack) return false;
  }
  return true;
}

// Splits one radius shell into interleaved regular m-gons, largest m first.
bool split_shell(const std::vector<const Site*>& shell, double radius, double eps,
                 std::vector<PolygonRing>& rings) {
  const int k = static_cast<int>(shell.size());
  if (k == 1) {
    rings.push_back({radius, 1, shell[0]->angle, shell[0]->labels});
    return true;
  }
  for (int m = k; m >= 2; --m) {
    if (k % m != 0) continue;
    const int stride = k / m;
    std::vector<PolygonRing> candidate;
    bool ok = true;
    for (int s = 0; s < stride && ok; ++s) {
      std::vector<const Site*> subset;
      for (int i = s; i < k; i += stride) subset.push_back(shell[i]);
      ok = is_regular(subset, radius, eps);
      if (!ok) break;
      PolygonRing ring{radius, m, subset.front()->angle, {}};
      for (const Site* site : subset) {
        ring.labels.insert(ring.labels.end(), site->labels.begin(), site->labels.end());
      }
      std::sort(ring.labels.begin(), ring.labels.end());
      candidate.push_back(std::move(ring));
    }
    if (ok) {
      rings.insert(rings.end(), candidate.begin(), candidate.end());
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<std::vector<int>> collision_classes(const Configuration& z, double tol) {
  const int n = z.size();
  const double eps = scaled_tolerance(z, tol);
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((z.point(i) - z.point(j)).norm() <= eps) {
        const int a = root(i), b = root(j);
        parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<int>> classes;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = root(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(classes.size());
      classes.emplace_back();
    }
    classes[slot[r]].push_back(i);
  }
  return classes;
}

StructureReport classify_structure(const Configuration& z_in, double tol) {
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  StructureReport report;
  const Configuration z = center(z_in);
  const double eps = scaled_tolerance(z, tol);
  report.collision_classes = collision_classes(z, tol);

  if (diameter(z) <= kCoincidentTol) {
    report.full_symmetry = true;
    report.collinear = true;
    report.rotational_order = z.size();
    report.has_polygon_partition = true;
    std::vector<int> all(z.size());
    std::iota(all.begin(), all.end(), 0);
    report.polygon_partition.push_back({0.0, 1, 0.0, all});
    return report;
  }

  std::vector<Site> sites;
  for (const auto& cls : report.collision_classes) {
    Point p = Point::Zero();
    for (int i : cls) p += z.point(i);
    p /= static_cast<double>(cls.size());
    sites.push_back({p, p.norm(), angle_of(p), cls});
  }

  // Collinearity: principal axis of the distinct sites.
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& s : sites) cov += s.position * s.position.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> pca(cov);
  const Point axis = pca.eigenvectors().col(1);
  const Point normal(-axis.y(), axis.x());
  double spread = 0.0;
  for (const auto& s : sites) spread = std::max(spread, std::fabs(normal.dot(s.position)));
  report.collinear = spread <= eps;
  if (report.collinear) {
    double a = std::atan2(axis.y(), axis.x());
    a = std::fmod(a + kTwoPi, kPi);
    if (a >= kPi - 1e-12) a = 0.0;
    report.collinear_axis = a;
  }

  // Concentric polygon decomposition, shells by ascending radius.
  std::vector<const Site*> order;
  for (const auto& s : sites) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](const Site* a, const Site* b) {
    if (a->radius != b->radius) return a->radius < b->radius;
    return a->angle < b->angle;
  });
  report.has_polygon_partition = true;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && order[j]->radius - order[i]->radius <= eps) ++j;
    std::vector<const Site*> shell(order.begin() + i, order.begin() + j);
    std::sort(shell.begin(), shell.end(),
              [](const Site* a, const Site* b) { return a->angle < b->angle; });
    const double radius = shell.front()->radius;
    if (radius <= eps) {
      std::vector<int> labels;
      for (const Site* s : shell) labels.insert(labels.end(), s->labels.begin(), s->labels.end());
      std::sort(labels.begin(), labels.end());
      report.polygon_partition.push_back({0.0, 1, 0.0, labels});
    } else if (!split_shell(shell, radius, eps, report.polygon_partition)) {
      report.has_polygon_partition = false;
    }
    i = j;
  }
  if (!report.has_polygon_partition) {
    report.polygon_partition.clear();
  } else {
    std::stable_sort(report.polygon_partition.begin(), report.polygon_partition.end(),
                     [eps](const PolygonRing& a, const PolygonRing& b) {
                       if (std::fabs(a.radius - b.radius) > eps) return a.radius < b.radius;
                       return a.start_angle < b.start_angle;
                     });
  }

  const SymmetryGroup group = detect_symmetries(z, tol);
  report.rotational_order = group.rotation_count();
  for (const auto& e : group.elements()) {
    if (e.rho.is_rotation()) continue;
    const bool seen = std::any_of(report.reflection_axes.begin(), report.reflection_axes.end(),
                                  [&](double a) {
                                    const double d = std::fabs(a - e.rho.angle());
                                    return std::min(d, kPi - d) <= kAngleTol;
                                  });
    if (!seen) report.reflection_axes.push_back(e.rho.angle());
  }
  std::sort(report.reflection_axes.begin(), report.reflection_axes.end());
  return report;
}

std::string structure_to_json(const StructureReport& report) {
  nlohmann::json doc;
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& cls : report.collision_classes) {
    nlohmann::json labels = nlohmann::json::array();
    for (int i : cls) labels.push_back(i + 1);
    classes.push_back(labels);
  }
  doc["collision_classes"] = classes;
  doc["collinear"] = report.collinear;
  if (report.collinear) doc["collinear_axis"] = report.collinear_axis;
  if (report.has_polygon_partition) {
    nlohmann::json rings = nlohmann::json::array();
    for (const auto& ring : report.polygon_partition) {
      nlohmann::json labels = nlohmann::json::array();
      for (int i : ring.labels) labels.push_back(i + 1);
      rings.push_back({{"radius", ring.radius}, {"m", ring.m}, {"labels", labels}});
    }
    doc["polygon_partition"] = rings;
  } else {
    doc["polygon_partition"] = nullptr;
  }
  doc["reflection_axes"] = report.reflection_axes;
  doc["rotational_order"] = report.rotational_order;
  doc["full_symmetry"] = report.full_symmetry;
  return doc.dump();
}

}  // namespace swarmsym
