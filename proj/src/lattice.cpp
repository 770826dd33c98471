#include "swarmsym/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "swarmsym/errors.hpp"

namespace swarmsym {

SymmetryGroup join(const SymmetryGroup& a, const SymmetryGroup& b, std::size_t cap) {
  if (a.degree() != b.degree()) throw InputError("join: groups act on different n");
  if (a.is_full_gamma() || b.is_full_gamma()) return SymmetryGroup::full_gamma(a.degree());
  std::vector<SymmetryElement> gens = a.generators();
  for (const auto& g : b.generators()) gens.push_back(g);
  return close_group(a.degree(), gens, cap);
}

SymmetryGroup meet(const SymmetryGroup& a, const SymmetryGroup& b) {
  if (a.degree() != b.degree()) throw InputError("meet: groups act on different n");
  if (a.is_full_gamma()) return b;
  if (b.is_full_gamma()) return a;
  std::vector<SymmetryElement> common;
  for (const auto& e : a.elements()) {
    if (b.contains(e)) common.push_back(e);
  }
  return SymmetryGroup::from_elements(a.degree(), std::move(common));
}

SymmetryGroup conjugate(const SymmetryGroup& h, const SymmetryElement& gamma) {
  if (h.is_full_gamma()) return h;
  const SymmetryElement inv = inverse(gamma);
  std::vector<SymmetryElement> out;
  out.reserve(h.order());
  for (const auto& e : h.elements()) out.push_back(compose(compose(inv, e), gamma));
  return SymmetryGroup::from_elements(h.degree(), std::move(out));
}

std::optional<SymmetryElement> conjugacy_witness(const SymmetryGroup& a, const SymmetryGroup& b,
                                                 const std::vector<SymmetryElement>& candidates) {
  if (a.degree() != b.degree() || a.is_full_gamma() != b.is_full_gamma()) return std::nullopt;
  if (a.is_full_gamma()) return SymmetryElement::identity(a.degree());
  if (a.order() != b.order() || a.rotation_count() != b.rotation_count()) return std::nullopt;
  for (const auto& c : candidates) {
    const SymmetryElement inv = inverse(c);
    const bool all = std::all_of(a.elements().begin(), a.elements().end(), [&](const SymmetryElement& e) {
      return b.contains(compose(compose(inv, e), c));
    });
    if (all) return c;
  }
  return std::nullopt;
}

bool are_conjugate(const SymmetryGroup& a, const SymmetryGroup& b,
                   const std::vector<SymmetryElement>& candidates) {
  return conjugacy_witness(a, b, candidates).has_value();
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<int> image(n);
  std::iota(image.begin(), image.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(image);
  } while (std::next_permutation(image.begin(), image.end()));
  return out;
}

std::vector<SymmetryElement> dihedral_candidates(int n, int m, const std::vector<Permutation>& perms) {
  if (m < 1) throw InputError("rotation order must be positive");
  const std::vector<Permutation> labels = perms.empty() ? all_permutations(n) : perms;
  std::vector<OrthogonalElement> orth;
  for (int k = 0; k < m; ++k) orth.push_back(OrthogonalElement::rotation(kTwoPi * k / m));
  for (int k = 0; k < m; ++k) orth.push_back(OrthogonalElement::reflection(kPi * k / m));
  std::vector<SymmetryElement> out;
  out.reserve(orth.size() * labels.size());
  for (const auto& rho : orth) {
    for (const auto& kappa : labels) {
      if (kappa.size() != n) throw InputError("candidate permutation has wrong degree");
      out.push_back({rho, kappa});
    }
  }
  return out;
}

bool fixes_basis(const SymmetryElement& gamma, const Eigen::MatrixXd& basis, double tol) {
  const Eigen::Matrix2d r = gamma.rho.matrix();
  const int n = gamma.size();
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector2d moved = r * basis.col(c).segment<2>(2 * gamma.kappa(i));
      if ((moved - basis.col(c).segment<2>(2 * i)).norm() > tol) return false;
    }
  }
  return true;
}

SymmetryGroup isotropy_closure(const SymmetryGroup& h, const std::vector<SymmetryElement>& candidates) {
  if (h.is_full_gamma()) return h;
  const Eigen::MatrixXd basis = fixed_subspace(h);
  std::vector<SymmetryElement> out(h.elements().begin(), h.elements().end());
  for (const auto& g : candidates) {
    if (g.size() == h.degree() && fixes_basis(g, basis)) out.push_back(g);
  }
  return SymmetryGroup::from_elements(h.degree(), std::move(out));
}

std::vector<SymmetryElement> lattice_conjugators(const SymmetryGroup& base, int m) {
  const int n = base.degree();
  // Label orbits of the base group.
  std::vector<int> orbit(n, -1);
  int orbits = 0;
  for (int i = 0; i < n; ++i) {
    if (orbit[i] >= 0) continue;
    std::vector<int> stack{i};
    orbit[i] = orbits;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const auto& e : base.elements()) {
        const int w = e.kappa(v);
        if (orbit[w] < 0) {
          orbit[w] = orbits;
          stack.push_back(w);
        }
      }
    }
    ++orbits;
  }
  std::vector<Permutation> perms;
  for (const auto& p : all_permutations(n)) {
    bool keeps = true;
    for (int i = 0; i < n && keeps; ++i) keeps = orbit[p(i)] == orbit[i];
    if (keeps) perms.push_back(p);
  }
  std::vector<OrthogonalElement> orth;
  for (int k = 0; k < 2 * m; ++k) orth.push_back(OrthogonalElement::rotation(kPi * k / m));
  for (int k = 0; k < 2 * m; ++k) orth.push_back(OrthogonalElement::reflection(kPi * k / (2.0 * m)));
  std::vector<SymmetryElement> out;
  for (const auto& rho : orth) {
    for (const auto& kappa : perms) {
      SymmetryElement c{rho, kappa};
      if (same_group(conjugate(base, c), base)) out.push_back(std::move(c));
    }
  }
  return out;
}

namespace {

struct Subspace {
  Eigen::MatrixXd basis;
  Eigen::MatrixXd projector;
  int depth = 0;
  bool realizable = false;
  SymmetryGroup group;
  std::optional<Configuration> witness;
};

std::size_t projector_key(const Eigen::MatrixXd& p) {
  std::size_t h = static_cast<std::size_t>(p.cols()) * 1315423911u;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const long long q = std::llround(p.data()[k] * 1e6);
    h ^= static_cast<std::size_t>(q) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

bool same_projector(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() <= 1e-7;
}

class Registry {
 public:
  // Returns the index of an equal subspace, or -1.
  int find(const Eigen::MatrixXd& projector, int dim, const std::vector<Subspace>& nodes) const {
    const auto it = by_key_.find(projector_key(projector));
    if (it != by_key_.end()) {
      for (int k : it->second) {
        if (same_projector(nodes[k].projector, projector)) return k;
      }
    }
    // Rounding may split equal projectors across keys.
    if (dim < static_cast<int>(by_dim_.size())) {
      for (int k : by_dim_[dim]) {
        if (same_projector(nodes[k].projector, projector)) return k;
      }
    }
    return -1;
  }
  void insert(const Eigen::MatrixXd& projector, int dim, int index) {
    by_key_[projector_key(projector)].push_back(index);
    if (dim >= static_cast<int>(by_dim_.size())) by_dim_.resize(dim + 1);
    by_dim_[dim].push_back(index);
  }

 private:
  std::unordered_map<std::size_t, std::vector<int>> by_key_;
  std::vector<std::vector<int>> by_dim_;
};

// A random point of the subspace whose isotropy group has exactly this Fix.
void find_witness(Subspace& s, int n, std::mt19937_64& rng, double tol) {
  const int d = static_cast<int>(s.basis.cols());
  if (d == 0) {
    s.realizable = true;
    s.group = SymmetryGroup::full_gamma(n);
    s.witness = Configuration(Eigen::VectorXd::Zero(2 * n));
    return;
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr int kAttempts = 100;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Eigen::VectorXd coeffs(d);
    for (int k = 0; k < d; ++k) coeffs[k] = normal(rng);
    const Configuration w(Eigen::VectorXd(s.basis * coeffs));
    SymmetryGroup g = detect_symmetries(w, tol);
    const Eigen::MatrixXd fix = fixed_subspace(g);
    // A generic point's isotropy is as small as it gets; a larger Fix means
    // the subspace is not the fixed space of any isotropy group.
    if (fix.cols() > d) return;
    if (fix.cols() == d && same_projector(fix * fix.transpose(), s.projector)) {
      s.realizable = true;
      s.group = std::move(g);
      s.witness = w;
      return;
    }
  }
}

bool below(const IsotropyNode& a, const IsotropyNode& b, bool conj,
           const std::vector<SymmetryElement>& conjugators) {
  if (b.group.is_full_gamma()) return !a.group.is_full_gamma();
  if (a.group.is_full_gamma() || a.group.order() >= b.group.order()) return false;
  if (!conj) return subset_check(a.group, b.group);
  for (const auto& c : conjugators) {
    if (subset_check(conjugate(a.group, c), b.group)) return true;
  }
  return false;
}

}  // namespace

IsotropyLattice upward_lattice(const Configuration& z, const LatticeOptions& options) {
  const int n = z.size();
  if (options.permutations.empty() && n > options.max_n) {
    throw InputError("lattice expansion over S_n is limited to n <= " + std::to_string(options.max_n));
  }
  const int m = options.max_rot_order > 0 ? options.max_rot_order : 2 * n;
  IsotropyLattice lattice;
  lattice.up_to_conjugacy = options.dedup_conjugacy;

  const SymmetryGroup gz = detect_symmetries(z, options.tol);
  if (gz.is_full_gamma()) {
    lattice.nodes.push_back({gz, 0, Eigen::MatrixXd(2 * n, 0), z});
    lattice.top = 0;
    lattice.explored = 1;
    return lattice;
  }

  std::vector<SymmetryElement> candidates = dihedral_candidates(n, m, options.permutations);
  {
    ElementIndex index;
    for (int k = 0; k < static_cast<int>(candidates.size()); ++k) index.insert(candidates[k], k);
    for (const auto& e : gz.elements()) {
      if (index.find(e, candidates) < 0) {
        index.insert(e, static_cast<int>(candidates.size()));
        candidates.push_back(e);
      }
    }
  }

  std::mt19937_64 rng(options.seed);
  std::vector<Subspace> nodes;
  Registry registry;
  {
    Subspace root;
    root.basis = fixed_subspace(gz);
    root.projector = root.basis * root.basis.transpose();
    root.realizable = true;
    root.group = gz;
    root.witness = z;
    registry.insert(root.projector, static_cast<int>(root.basis.cols()), 0);
    nodes.push_back(std::move(root));
  }

  for (std::size_t k = 0; k < nodes.size() && !lattice.truncated; ++k) {
    const Eigen::MatrixXd basis = nodes[k].basis;
    const int d = static_cast<int>(basis.cols());
    if (d == 0) continue;
    if (options.max_depth >= 0 && nodes[k].depth >= options.max_depth) continue;
    for (const auto& g : candidates) {
      if (fixes_basis(g, basis)) continue;
      Eigen::MatrixXd moved(basis.rows(), d);
      for (int c = 0; c < d; ++c) moved.col(c) = apply(g, Eigen::VectorXd(basis.col(c))) - basis.col(c);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(moved, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      int rank = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > 1e-10 * sv[0]) ++rank;
      }
      Subspace child;
      child.basis = basis * svd.matrixV().rightCols(d - rank);
      child.projector = child.basis * child.basis.transpose();
      const int cd = d - rank;
      if (registry.find(child.projector, cd, nodes) >= 0) continue;
      if (nodes.size() >= options.node_cap) {
        lattice.truncated = true;
        break;
      }
      child.depth = nodes[k].depth + 1;
      find_witness(child, n, rng, options.tol);
      registry.insert(child.projector, cd, static_cast<int>(nodes.size()));
      nodes.push_back(std::move(child));
    }
  }
  if (lattice.truncated && !options.allow_partial) {
    throw CapExceeded("lattice expansion exceeded " + std::to_string(options.node_cap) + " subspaces");
  }
  lattice.explored = nodes.size();

  // Visible nodes: the start group and every realizable subspace.
  std::vector<int> visible;
  for (int k = 0; k < static_cast<int>(nodes.size()); ++k) {
    if (nodes[k].realizable) visible.push_back(k);
  }
  std::stable_sort(visible.begin() + 1, visible.end(), [&](int a, int b) {
    const int da = static_cast<int>(nodes[a].basis.cols()), db = static_cast<int>(nodes[b].basis.cols());
    if (da != db) return da > db;
    return nodes[a].group.order() < nodes[b].group.order();
  });

  std::vector<SymmetryElement> conjugators;
  if (options.dedup_conjugacy) conjugators = lattice_conjugators(gz, m);

  for (int k : visible) {
    IsotropyNode node{nodes[k].group, static_cast<int>(nodes[k].basis.cols()), nodes[k].basis,
                      nodes[k].witness};
    if (options.dedup_conjugacy) {
      const bool duplicate = std::any_of(lattice.nodes.begin(), lattice.nodes.end(), [&](const IsotropyNode& r) {
        return r.fix_dim == node.fix_dim && are_conjugate(node.group, r.group, conjugators);
      });
      if (duplicate) continue;
    }
    lattice.nodes.push_back(std::move(node));
  }
  lattice.bottom = 0;
  for (int k = 0; k < static_cast<int>(lattice.nodes.size()); ++k) {
    if (lattice.nodes[k].group.is_full_gamma()) lattice.top = k;
  }

  const int count = static_cast<int>(lattice.nodes.size());
  std::vector<std::vector<char>> less(count, std::vector<char>(count, 0));
  for (int a = 0; a < count; ++a) {
    for (int b = 0; b < count; ++b) {
      if (a != b) less[a][b] = below(lattice.nodes[a], lattice.nodes[b], options.dedup_conjugacy, conjugators);
    }
  }
  for (int a = 0; a < count; ++a) {
    for (int b = 0; b < count; ++b) {
      if (!less[a][b]) continue;
      bool covering = true;
      for (int c = 0; c < count && covering; ++c) covering = !(less[a][c] && less[c][b]);
      if (covering) lattice.edges.emplace_back(a, b);
    }
  }
  return lattice;
}

namespace {

std::string node_label(const IsotropyNode& node) {
  std::ostringstream out;
  out << "order=" << (node.group.is_full_gamma() ? std::string("inf") : std::to_string(node.group.order()))
      << ", fixdim=" << node.fix_dim << ", gens=[";
  if (node.group.is_full_gamma()) {
    out << "Γ";
  } else {
    const auto gens = node.group.generators();
    for (std::size_t k = 0; k < gens.size(); ++k) out << (k ? "; " : "") << to_string(gens[k]);
  }
  out << "]";
  return out.str();
}

}  // namespace

std::string lattice_to_dot(const IsotropyLattice& lattice) {
  std::ostringstream out;
  out << "digraph isotropy_lattice {\n  rankdir=BT;\n";
  for (std::size_t k = 0; k < lattice.nodes.size(); ++k) {
    out << "  n" << k << " [label=\"" << node_label(lattice.nodes[k]) << "\"];\n";
  }
  for (const auto& [a, b] : lattice.edges) out << "  n" << a << " -> n" << b << ";\n";
  out << "}\n";
  return out.str();
}

std::string lattice_to_json(const IsotropyLattice& lattice) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t k = 0; k < lattice.nodes.size(); ++k) {
    const auto& node = lattice.nodes[k];
    nlohmann::json gens = nlohmann::json::array();
    if (!node.group.is_full_gamma()) {
      for (const auto& g : node.group.generators()) gens.push_back(to_string(g));
    }
    nlohmann::json entry{{"id", k},
                         {"full_gamma", node.group.is_full_gamma()},
                         {"fix_dim", node.fix_dim},
                         {"generators", gens},
                         {"label", node_label(node)}};
    entry["order"] = node.group.is_full_gamma() ? nlohmann::json("inf") : nlohmann::json(node.group.order());
    if (node.witness) entry["witness"] = nlohmann::json::parse(configuration_to_json(*node.witness))["positions"];
    nodes.push_back(entry);
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : lattice.edges) edges.push_back({a, b});
  nlohmann::json doc{{"nodes", nodes},
                     {"edges", edges},
                     {"bottom", lattice.bottom},
                     {"top", lattice.top},
                     {"up_to_conjugacy", lattice.up_to_conjugacy},
                     {"truncated", lattice.truncated},
                     {"explored", lattice.explored}};
  return doc.dump(2);
}

}  // namespace swarmsym
