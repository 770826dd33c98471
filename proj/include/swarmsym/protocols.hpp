#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "swarmsym/configuration.hpp"
#include "swarmsym/connectivity.hpp"
#include "swarmsym/structure.hpp"
#include "swarmsym/symmetry.hpp"

namespace swarmsym {

// Target point from the robot's own position and the multiset of visible
// neighbour positions (passed in a canonical, label-independent order).
using TargetRule = std::function<Point(const Point& self, const std::vector<Point>& neighbors)>;

// Target of robot i from the whole configuration; not tied to visibility.
using GlobalRule = std::function<Point(int i, const Configuration& z)>;

// Weight matrix W(z) on the given graph for Laplacian-type protocols.
using WeightRule = std::function<Eigen::MatrixXd(const Configuration& z, const ConnectivityGraph& g)>;

struct Protocol {
  std::string name;
  double viewing_range = 1.0;
  double step_size = 0.0;
  TargetRule rule;
  GlobalRule global_rule;
  WeightRule weight_rule;
  // Linear built-ins: the W of the reduced map for a given graph.
  std::function<Eigen::MatrixXd(const ConnectivityGraph& g)> graph_weights;
  // Weights depend on the graph alone, so the reduced map commutes with Aut(G).
  bool graph_determined_weights = false;
};

// Each robot moves an h-fraction toward the mean of its visible neighbours;
// on a cycle visibility graph this is the midpoint of its two neighbours.
Protocol gtm_protocol(double viewing_range, double h);
// h-fraction toward the mean of the closed neighbourhood (self included).
Protocol uniform_average_protocol(double viewing_range, double h);
Protocol stationary_protocol(double viewing_range);
// z+ = ((1-h) I + h W(z)) z with W validated on every step.
Protocol laplacian_protocol(std::string name, double viewing_range, double h, WeightRule rule,
                            bool graph_determined = false);
Protocol global_protocol(std::string name, double h, GlobalRule rule);

// Look-Compute-Move with a freshly built visibility graph.
Configuration step(const Protocol& p, const Configuration& z);
// Compute-Move with a frozen graph.
Configuration reduced_step(const Protocol& p, const Configuration& z, const ConnectivityGraph& g);

// ((1-h) I + h W) applied to the x and y coordinate vectors separately.
Configuration laplacian_step(const Eigen::MatrixXd& w, double h, const Configuration& z);

Eigen::MatrixXd gtm_weights(int n);

// Throws ProtocolError naming the first offending robot.
void validate_weights(const Eigen::MatrixXd& w, const ConnectivityGraph& g, double tol = 1e-12);

// The n x n matrix W with F_G(z) = ((1-h) I + h W) z, when the protocol is linear on g.
std::optional<Eigen::MatrixXd> reduced_system_weights(const Protocol& p, const Configuration& z,
                                                      const ConnectivityGraph& g);

struct MonitorFlags {
  bool symmetry = false;
  bool structure = false;
  bool connectivity = false;
};

struct RoundRecord {
  int round = 0;
  bool full_gamma = false;
  std::size_t group_order = 0;
  int symmetricity = 0;
  std::vector<std::string> gained;
  std::vector<GainClass> gain_classes;
  std::optional<StructureReport> structure;
  std::size_t edges_lost = 0;
};

struct Trace {
  std::vector<Configuration> configurations;
  std::vector<RoundRecord> records;  // one per configuration when monitoring
};

struct RunOptions {
  MonitorFlags monitor;
  // Reduced evolution on this graph instead of a fresh Look each round.
  std::optional<ConnectivityGraph> fixed_graph;
  double tol = kDefaultTol;
  // |sigma| threshold below which the reduced map counts as singular.
  double singular_tol = 1e-9;
};

// Throws InvariantViolation on symmetry loss or a VIOLATION gain class.
Trace run(const Protocol& p, const Configuration& z0, int rounds, const RunOptions& options = {});

// "round,robot,x,y" rows with 17 significant digits.
std::string trace_to_csv(const Trace& trace);
// "round, |Γ|, symmetricity, gained_elements" lines.
std::string symmetry_log(const Trace& trace);

}  // namespace swarmsym
