#include "swarmsym/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "swarmsym/errors.hpp"
#include "swarmsym/spectral.hpp"

namespace swarmsym {

namespace {

void check_step_size(double h) {
  if (!(h >= 0.0 && h <= 1.0)) throw InputError("step size must lie in [0, 1]");
}

Point mean_of(const std::vector<Point>& points) {
  Point sum = Point::Zero();
  for (const auto& p : points) sum += p;
  return sum / static_cast<double>(points.size());
}

Eigen::MatrixXd row_normalized(Eigen::MatrixXd a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double s = a.row(i).sum();
    if (s == 0.0) {
      a(i, i) = 1.0;
    } else {
      a.row(i) /= s;
    }
  }
  return a;
}

Eigen::MatrixXd adjacency(const ConnectivityGraph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.size(), g.size());
  for (const auto& [i, j] : g.edges()) a(i, j) = a(j, i) = 1.0;
  return a;
}

}  // namespace

Protocol gtm_protocol(double viewing_range, double h) {
  check_step_size(h);
  Protocol p;
  p.name = "gtm";
  p.viewing_range = viewing_range;
  p.step_size = h;
  p.rule = [](const Point& self, const std::vector<Point>& neighbors) {
    return neighbors.empty() ? self : mean_of(neighbors);
  };
  p.graph_weights = [](const ConnectivityGraph& g) { return row_normalized(adjacency(g)); };
  p.graph_determined_weights = true;
  return p;
}

Protocol uniform_average_protocol(double viewing_range, double h) {
  check_step_size(h);
  Protocol p;
  p.name = "uniform-average";
  p.viewing_range = viewing_range;
  p.step_size = h;
  p.rule = [](const Point& self, const std::vector<Point>& neighbors) {
    Point sum = self;
    for (const auto& q : neighbors) sum += q;
    return Point(sum / static_cast<double>(neighbors.size() + 1));
  };
  p.graph_weights = [](const ConnectivityGraph& g) {
    return row_normalized(adjacency(g) + Eigen::MatrixXd::Identity(g.size(), g.size()));
  };
  p.graph_determined_weights = true;
  return p;
}

Protocol stationary_protocol(double viewing_range) {
  Protocol p;
  p.name = "stationary";
  p.viewing_range = viewing_range;
  p.step_size = 1.0;
  p.rule = [](const Point& self, const std::vector<Point>&) { return self; };
  p.graph_weights = [](const ConnectivityGraph& g) {
    return Eigen::MatrixXd::Identity(g.size(), g.size()).eval();
  };
  p.graph_determined_weights = true;
  return p;
}

Protocol laplacian_protocol(std::string name, double viewing_range, double h, WeightRule rule,
                            bool graph_determined) {
  check_step_size(h);
  Protocol p;
  p.name = std::move(name);
  p.viewing_range = viewing_range;
  p.step_size = h;
  p.weight_rule = std::move(rule);
  p.graph_determined_weights = graph_determined;
  return p;
}

Protocol global_protocol(std::string name, double h, GlobalRule rule) {
  check_step_size(h);
  Protocol p;
  p.name = std::move(name);
  p.viewing_range = INFINITY;
  p.step_size = h;
  p.global_rule = std::move(rule);
  return p;
}

void validate_weights(const Eigen::MatrixXd& w, const ConnectivityGraph& g, double tol) {
  const int n = g.size();
  if (w.rows() != n || w.cols() != n) throw InputError("weight matrix does not match graph size");
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      const double x = w(i, j);
      if (!std::isfinite(x)) throw ProtocolError(i, "non-finite weight");
      if (x < 0.0) throw ProtocolError(i, "negative weight");
      if (std::fabs(x - w(j, i)) > tol) throw ProtocolError(i, "weight matrix is not symmetric");
      if (i != j && x != 0.0 && !g.has_edge(i, j)) {
        throw ProtocolError(i, "nonzero weight on a non-edge to robot " + std::to_string(j + 1));
      }
      row += x;
    }
    if (std::fabs(row - 1.0) > tol * n) throw ProtocolError(i, "weights do not sum to 1");
  }
}

Configuration laplacian_step(const Eigen::MatrixXd& w, double h, const Configuration& z) {
  const int n = z.size();
  if (w.rows() != n || w.cols() != n) throw InputError("laplacian_step: dimension mismatch");
  Eigen::VectorXd x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = z.coords()[2 * i];
    y[i] = z.coords()[2 * i + 1];
  }
  const Eigen::VectorXd wx = w * x, wy = w * y;
  Eigen::VectorXd out(2 * n);
  for (int i = 0; i < n; ++i) {
    out[2 * i] = (1.0 - h) * x[i] + h * wx[i];
    out[2 * i + 1] = (1.0 - h) * y[i] + h * wy[i];
  }
  return Configuration(std::move(out));
}

Eigen::MatrixXd gtm_weights(int n) { return circulant(gtm_generator(n)); }

Configuration reduced_step(const Protocol& p, const Configuration& z, const ConnectivityGraph& g) {
  const int n = z.size();
  if (g.size() != n) throw InputError("graph and configuration sizes differ");
  const double h = p.step_size;
  if (p.weight_rule) {
    const Eigen::MatrixXd w = p.weight_rule(z, g);
    validate_weights(w, g);
    return laplacian_step(w, h, z);
  }
  if (!p.rule && !p.global_rule) throw InputError("protocol " + p.name + " has no rule");

  // Every target is computed from the round-start snapshot before any move.
  std::vector<Point> targets(n);
  for (int i = 0; i < n; ++i) {
    if (p.global_rule) {
      targets[i] = p.global_rule(i, z);
    } else {
      std::vector<Point> seen;
      for (int j : g.neighbors(i)) seen.push_back(z.point(j));
      std::sort(seen.begin(), seen.end(), [](const Point& a, const Point& b) {
        return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
      });
      targets[i] = p.rule(z.point(i), seen);
    }
    if (!targets[i].allFinite()) throw ProtocolError(i, "rule produced a non-finite target");
  }
  Configuration out = z;
  for (int i = 0; i < n; ++i) out.set_point(i, z.point(i) + h * (targets[i] - z.point(i)));
  return out;
}

Configuration step(const Protocol& p, const Configuration& z) {
  if (p.global_rule) return reduced_step(p, z, ConnectivityGraph(z.size()));
  return reduced_step(p, z, build_graph(z, p.viewing_range));
}

std::optional<Eigen::MatrixXd> reduced_system_weights(const Protocol& p, const Configuration& z,
                                                      const ConnectivityGraph& g) {
  if (p.weight_rule) return p.weight_rule(z, g);
  if (p.graph_weights) return p.graph_weights(g);
  return std::nullopt;
}

Trace run(const Protocol& p, const Configuration& z0, int rounds, const RunOptions& options) {
  if (rounds < 0) throw InputError("rounds must be nonnegative");
  const MonitorFlags& monitor = options.monitor;
  const bool any_monitor = monitor.symmetry || monitor.structure || monitor.connectivity;
  Trace trace;
  trace.configurations.push_back(z0);

  SymmetryGroup current;
  auto record_for = [&](int round, const Configuration& z) {
    RoundRecord rec;
    rec.round = round;
    if (monitor.symmetry) {
      rec.full_gamma = current.is_full_gamma();
      rec.group_order = current.order();
      rec.symmetricity = current.rotation_count();
    }
    if (monitor.structure) rec.structure = classify_structure(z, options.tol);
    return rec;
  };
  if (monitor.symmetry) current = detect_symmetries(z0, options.tol);
  if (any_monitor) trace.records.push_back(record_for(0, z0));

  Configuration z = z0;
  for (int r = 1; r <= rounds; ++r) {
    const ConnectivityGraph g =
        options.fixed_graph ? *options.fixed_graph
                            : (p.global_rule ? ConnectivityGraph(z.size()) : build_graph(z, p.viewing_range));
    Configuration next = reduced_step(p, z, g);

    SymmetryGroup next_group;
    std::vector<std::string> gained;
    std::vector<GainClass> classes;
    if (monitor.symmetry) {
      next_group = detect_symmetries(next, options.tol);
      if (!subset_check(current, next_group)) {
        throw InvariantViolation("round " + std::to_string(r) + ": symmetry lost");
      }
      if (next_group.is_full_gamma() && !current.is_full_gamma()) {
        gained.push_back("full");
      } else if (!next_group.is_full_gamma()) {
        std::optional<bool> invertible;
        for (const auto& e : next_group.elements()) {
          if (current.contains(e)) continue;
          gained.push_back(to_string(e));
          if (!invertible) {
            const auto w = reduced_system_weights(p, z, g);
            invertible = w && p.graph_determined_weights &&
                         is_invertible(*w, p.step_size, options.singular_tol);
          }
          const GainClass c = classify_gain(e, g, *invertible);
          if (c == GainClass::kViolation) {
            throw InvariantViolation("round " + std::to_string(r) + ": gained " + to_string(e) +
                                     " inside Γ(G) with an invertible reduced map");
          }
          classes.push_back(c);
        }
      }
    }

    std::size_t lost = 0;
    if (monitor.connectivity && !p.global_rule) {
      const ConnectivityGraph after = build_graph(next, p.viewing_range);
      for (const auto& [i, j] : build_graph(z, p.viewing_range).edges()) {
        if (!after.has_edge(i, j)) ++lost;
      }
    }

    z = std::move(next);
    current = std::move(next_group);
    trace.configurations.push_back(z);
    if (any_monitor) {
      RoundRecord rec = record_for(r, z);
      rec.gained = std::move(gained);
      rec.gain_classes = std::move(classes);
      rec.edges_lost = lost;
      trace.records.push_back(std::move(rec));
    }
  }
  return trace;
}

std::string trace_to_csv(const Trace& trace) {
  std::ostringstream out;
  out << "round,robot,x,y\n";
  char buf[96];
  for (std::size_t r = 0; r < trace.configurations.size(); ++r) {
    const Configuration& z = trace.configurations[r];
    for (int i = 0; i < z.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%zu,%d,%.17g,%.17g\n", r, i + 1, z.point(i).x(), z.point(i).y());
      out << buf;
    }
  }
  return out.str();
}

std::string symmetry_log(const Trace& trace) {
  std::ostringstream out;
  for (const auto& rec : trace.records) {
    out << rec.round << ", " << (rec.full_gamma ? std::string("full") : std::to_string(rec.group_order))
        << ", " << rec.symmetricity << ", ";
    for (std::size_t k = 0; k < rec.gained.size(); ++k) out << (k ? ";" : "") << rec.gained[k];
    out << '\n';
  }
  return out.str();
}

}  // namespace swarmsym
