#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "swarmsym/configuration.hpp"
#include "swarmsym/symmetry.hpp"

namespace swarmsym {

// Undirected simple graph on vertices 0..n-1.
class ConnectivityGraph {
 public:
  ConnectivityGraph() = default;
  explicit ConnectivityGraph(int n);
  ConnectivityGraph(int n, const std::vector<std::pair<int, int>>& edges);

  int size() const { return n_; }
  bool has_edge(int i, int j) const { return adjacency_[i * n_ + j] != 0; }
  void add_edge(int i, int j);
  int degree(int i) const;
  std::vector<int> neighbors(int i) const;
  // Pairs (i, j) with i < j in lexicographic order.
  std::vector<std::pair<int, int>> edges() const;
  std::size_t edge_count() const;

  bool operator==(const ConnectivityGraph& other) const = default;

 private:
  int n_ = 0;
  std::vector<char> adjacency_;
};

// Edge iff ||z_i - z_j|| <= viewing_range (inclusive, no tolerance).
ConnectivityGraph build_graph(const Configuration& z, double viewing_range);
ConnectivityGraph cycle_graph(int n);
ConnectivityGraph path_graph(int n);

// "i j" per line, one-based, sorted.
std::string to_edge_list(const ConnectivityGraph& g);

struct AutomorphismGroup {
  std::vector<Permutation> elements;  // sorted
  std::vector<Permutation> generators;
};

bool preserves_adjacency(const Permutation& kappa, const ConnectivityGraph& g);

// All of Aut(g) by pruned backtracking; throws CapExceeded past `cap`.
AutomorphismGroup automorphisms(const ConnectivityGraph& g, std::size_t cap = 1000000);

// Powers of the label shift i -> i+1 that are automorphisms.
std::vector<Permutation> rotational_automorphisms(const ConnectivityGraph& g);

// Greedy generating set: keeps each element not already in the span of earlier picks.
std::vector<Permutation> greedy_generators(const std::vector<Permutation>& elements);

bool in_gamma_G(const SymmetryElement& gamma, const ConnectivityGraph& g);

enum class GainClass { kOutsideGammaG, kInsideGammaGNoninvertible, kViolation };

GainClass classify_gain(const SymmetryElement& gamma_new, const ConnectivityGraph& g,
                        bool reduced_invertible);

std::string to_string(GainClass c);

}  // namespace swarmsym
