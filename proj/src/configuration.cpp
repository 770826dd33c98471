#include "swarmsym/configuration.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "swarmsym/errors.hpp"

namespace swarmsym {

namespace {

void validate(const Eigen::VectorXd& coords) {
  if (coords.size() < 2 || coords.size() % 2 != 0) {
    throw InputError("configuration needs at least one robot (even, nonzero coordinate count)");
  }
  if (!coords.allFinite()) {
    throw InputError("configuration has non-finite coordinates");
  }
}

}  // namespace

Configuration::Configuration(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  validate(coords_);
}

Configuration::Configuration(const std::vector<Point>& points) : coords_(2 * points.size()) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    coords_[2 * i] = points[i].x();
    coords_[2 * i + 1] = points[i].y();
  }
  validate(coords_);
}

Configuration::Configuration(std::initializer_list<std::pair<double, double>> points)
    : coords_(2 * points.size()) {
  int i = 0;
  for (const auto& [x, y] : points) {
    coords_[2 * i] = x;
    coords_[2 * i + 1] = y;
    ++i;
  }
  validate(coords_);
}

std::vector<Point> Configuration::points() const {
  std::vector<Point> out;
  out.reserve(size());
  for (int i = 0; i < size(); ++i) out.push_back(point(i));
  return out;
}

Point centroid(const Configuration& z) {
  Point c = Point::Zero();
  for (int i = 0; i < z.size(); ++i) c += z.point(i);
  return c / static_cast<double>(z.size());
}

Configuration center(const Configuration& z) {
  const Point c = centroid(z);
  const double diam = diameter(z);
  if (diam == 0.0) {
    return Configuration(Eigen::VectorXd::Zero(z.coords().size()));
  }
  // Already centered to well below the postcondition: keep bits stable.
  if (c.norm() <= 1e-13 * diam) return z;
  Configuration out = z;
  for (int i = 0; i < z.size(); ++i) out.set_point(i, z.point(i) - c);
  return out;
}

double diameter(const Configuration& z) {
  double best = 0.0;
  for (int i = 0; i < z.size(); ++i) {
    for (int j = i + 1; j < z.size(); ++j) {
      best = std::max(best, (z.point(i) - z.point(j)).norm());
    }
  }
  return best;
}

double scaled_tolerance(const Configuration& z, double tol) {
  const double diam = diameter(z);
  return diam > 0.0 ? tol * diam : kCoincidentTol;
}

Configuration rotated(const Configuration& z, double angle) {
  const Eigen::Matrix2d r = Eigen::Rotation2Dd(angle).toRotationMatrix();
  Configuration out = z;
  for (int i = 0; i < z.size(); ++i) out.set_point(i, r * z.point(i));
  return out;
}

Configuration translated(const Configuration& z, const Point& offset) {
  Configuration out = z;
  for (int i = 0; i < z.size(); ++i) out.set_point(i, z.point(i) + offset);
  return out;
}

double distance(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size()) throw InputError("distance: robot counts differ");
  return (a.coords() - b.coords()).norm();
}

Configuration configuration_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("positions") || !doc["positions"].is_array()) {
    throw InputError("configuration JSON must be an object with a \"positions\" array");
  }
  std::vector<Point> points;
  for (const auto& entry : doc["positions"]) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
        !entry[1].is_number()) {
      throw InputError("each position must be a two-element numeric array [x, y]");
    }
    points.emplace_back(entry[0].get<double>(), entry[1].get<double>());
  }
  if (points.empty()) throw InputError("configuration has no robots");
  return Configuration(points);
}

std::string configuration_to_json(const Configuration& z) {
  nlohmann::json positions = nlohmann::json::array();
  for (int i = 0; i < z.size(); ++i) {
    positions.push_back({z.point(i).x(), z.point(i).y()});
  }
  return nlohmann::json{{"positions", positions}}.dump();
}

Configuration read_configuration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return configuration_from_json(buffer.str());
}

void write_configuration(const std::filesystem::path& path, const Configuration& z) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << configuration_to_json(z) << '\n';
}

}  // namespace swarmsym
