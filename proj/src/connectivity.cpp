#include "swarmsym/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "swarmsym/errors.hpp"

namespace swarmsym {

ConnectivityGraph::ConnectivityGraph(int n) : n_(n), adjacency_(static_cast<std::size_t>(n) * n, 0) {
  if (n < 1) throw InputError("graph needs at least one vertex");
}

ConnectivityGraph::ConnectivityGraph(int n, const std::vector<std::pair<int, int>>& edges)
    : ConnectivityGraph(n) {
  for (const auto& [i, j] : edges) add_edge(i, j);
}

void ConnectivityGraph::add_edge(int i, int j) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw InputError("edge endpoint out of range");
  if (i == j) throw InputError("self-loops are not allowed");
  adjacency_[i * n_ + j] = 1;
  adjacency_[j * n_ + i] = 1;
}

int ConnectivityGraph::degree(int i) const {
  int d = 0;
  for (int j = 0; j < n_; ++j) d += adjacency_[i * n_ + j];
  return d;
}

std::vector<int> ConnectivityGraph::neighbors(int i) const {
  std::vector<int> out;
  for (int j = 0; j < n_; ++j) {
    if (adjacency_[i * n_ + j]) out.push_back(j);
  }
  return out;
}

std::vector<std::pair<int, int>> ConnectivityGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if (has_edge(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::size_t ConnectivityGraph::edge_count() const { return edges().size(); }

ConnectivityGraph build_graph(const Configuration& z, double viewing_range) {
  if (!(viewing_range > 0.0)) throw InputError("viewing range must be positive");
  ConnectivityGraph g(z.size());
  for (int i = 0; i < z.size(); ++i) {
    for (int j = i + 1; j < z.size(); ++j) {
      const Point d = z.point(i) - z.point(j);
      if (std::hypot(d.x(), d.y()) <= viewing_range) g.add_edge(i, j);
    }
  }
  return g;
}

ConnectivityGraph cycle_graph(int n) {
  if (n < 3) throw InputError("cycle graph needs n >= 3");
  ConnectivityGraph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

ConnectivityGraph path_graph(int n) {
  ConnectivityGraph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

std::string to_edge_list(const ConnectivityGraph& g) {
  std::ostringstream out;
  for (const auto& [i, j] : g.edges()) out << (i + 1) << ' ' << (j + 1) << '\n';
  return out.str();
}

bool preserves_adjacency(const Permutation& kappa, const ConnectivityGraph& g) {
  if (kappa.size() != g.size()) throw InputError("permutation and graph sizes differ");
  for (const auto& [i, j] : g.edges()) {
    if (!g.has_edge(kappa(i), kappa(j))) return false;
  }
  return true;
}

AutomorphismGroup automorphisms(const ConnectivityGraph& g, std::size_t cap) {
  const int n = g.size();
  std::vector<std::vector<int>> signature(n);
  for (int v = 0; v < n; ++v) {
    signature[v].push_back(g.degree(v));
    std::vector<int> nd;
    for (int u : g.neighbors(v)) nd.push_back(g.degree(u));
    std::sort(nd.begin(), nd.end());
    signature[v].insert(signature[v].end(), nd.begin(), nd.end());
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return signature[a] < signature[b]; });

  std::vector<int> image(n, -1);
  std::vector<char> used(n, 0);
  std::vector<Permutation> found;

  std::function<void(int)> extend = [&](int depth) {
    if (depth == n) {
      if (found.size() >= cap) {
        throw CapExceeded("automorphism search exceeded " + std::to_string(cap) + " elements");
      }
      found.emplace_back(image);
      return;
    }
    const int v = order[depth];
    for (int w = 0; w < n; ++w) {
      if (used[w] || signature[w] != signature[v]) continue;
      bool consistent = true;
      for (int k = 0; k < depth && consistent; ++k) {
        const int u = order[k];
        consistent = g.has_edge(u, v) == g.has_edge(image[u], w);
      }
      if (!consistent) continue;
      image[v] = w;
      used[w] = 1;
      extend(depth + 1);
      used[w] = 0;
      image[v] = -1;
    }
  };
  extend(0);

  std::sort(found.begin(), found.end());
  AutomorphismGroup group;
  group.generators = greedy_generators(found);
  group.elements = std::move(found);
  return group;
}

std::vector<Permutation> rotational_automorphisms(const ConnectivityGraph& g) {
  std::vector<Permutation> out;
  for (int k = 0; k < g.size(); ++k) {
    Permutation shift = Permutation::cyclic_shift(g.size(), k);
    if (preserves_adjacency(shift, g)) out.push_back(std::move(shift));
  }
  return out;
}

std::vector<Permutation> greedy_generators(const std::vector<Permutation>& elements) {
  std::vector<Permutation> gens;
  if (elements.empty()) return gens;
  std::set<Permutation> span{Permutation::identity(elements.front().size())};
  for (const auto& e : elements) {
    if (span.count(e)) continue;
    gens.push_back(e);
    // Re-close from the current span with all generators.
    std::vector<Permutation> frontier(span.begin(), span.end());
    for (std::size_t k = 0; k < frontier.size(); ++k) {
      for (const auto& gen : gens) {
        Permutation next = frontier[k].then(gen);
        if (span.insert(next).second) frontier.push_back(std::move(next));
      }
    }
  }
  return gens;
}

bool in_gamma_G(const SymmetryElement& gamma, const ConnectivityGraph& g) {
  return preserves_adjacency(gamma.kappa, g);
}

GainClass classify_gain(const SymmetryElement& gamma_new, const ConnectivityGraph& g,
                        bool reduced_invertible) {
  if (!in_gamma_G(gamma_new, g)) return GainClass::kOutsideGammaG;
  return reduced_invertible ? GainClass::kViolation : GainClass::kInsideGammaGNoninvertible;
}

std::string to_string(GainClass c) {
  switch (c) {
    case GainClass::kOutsideGammaG:
      return "OUTSIDE_GAMMA_G";
    case GainClass::kInsideGammaGNoninvertible:
      return "INSIDE_GAMMA_G_NONINVERTIBLE";
    case GainClass::kViolation:
      return "VIOLATION";
  }
  return "UNKNOWN";
}

}  // namespace swarmsym
