#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swarmsym/configuration.hpp"
#include "swarmsym/symmetry.hpp"

namespace swarmsym {

struct IsotropyNode {
  SymmetryGroup group;
  int fix_dim = 0;
  Eigen::MatrixXd fix_basis;  // 2n x fix_dim
  std::optional<Configuration> witness;
};

struct IsotropyLattice {
  std::vector<IsotropyNode> nodes;
  // Covering pairs (smaller group, larger group) as node indices.
  std::vector<std::pair<int, int>> edges;
  int bottom = 0;
  int top = -1;
  bool up_to_conjugacy = false;
  bool truncated = false;
  // Distinct fixed subspaces explored, realizable or not.
  std::size_t explored = 0;
};

// <A u B>, cap-guarded.
SymmetryGroup join(const SymmetryGroup& a, const SymmetryGroup& b, std::size_t cap = 100000);
SymmetryGroup meet(const SymmetryGroup& a, const SymmetryGroup& b);

// {gamma^-1 h gamma : h in H}.
SymmetryGroup conjugate(const SymmetryGroup& h, const SymmetryElement& gamma);
std::optional<SymmetryElement> conjugacy_witness(const SymmetryGroup& a, const SymmetryGroup& b,
                                                 const std::vector<SymmetryElement>& candidates);
bool are_conjugate(const SymmetryGroup& a, const SymmetryGroup& b,
                   const std::vector<SymmetryElement>& candidates);

// Rotations by 2 pi k / m and reflections at pi k / m, each paired with every
// permutation in `perms` (all of S_n when empty).
std::vector<SymmetryElement> dihedral_candidates(int n, int m,
                                                 const std::vector<Permutation>& perms = {});
std::vector<Permutation> all_permutations(int n);

// Whether gamma fixes every column of `basis` to within tol.
bool fixes_basis(const SymmetryElement& gamma, const Eigen::MatrixXd& basis, double tol = 1e-9);

// Candidates fixing Fix(H) pointwise, together with H itself.
SymmetryGroup isotropy_closure(const SymmetryGroup& h, const std::vector<SymmetryElement>& candidates);

struct LatticeOptions {
  int max_rot_order = 0;  // 0 selects 2n
  std::vector<Permutation> permutations;  // empty selects S_n
  bool dedup_conjugacy = false;
  std::size_t node_cap = 20000;
  int max_depth = -1;  // -1: unbounded
  int max_n = 8;       // ignored when explicit permutations are given
  std::uint64_t seed = 0x5eed5eedULL;
  double tol = kDefaultTol;
  bool allow_partial = false;  // return a truncated lattice instead of throwing
};

IsotropyLattice upward_lattice(const Configuration& z, const LatticeOptions& options = {});

// Conjugators used when deduplicating: normalizer-type dihedral rotations and
// reflections of order 4m paired with label permutations that normalize
// `base` and map each of its label orbits onto itself.
std::vector<SymmetryElement> lattice_conjugators(const SymmetryGroup& base, int m);

std::string lattice_to_dot(const IsotropyLattice& lattice);
std::string lattice_to_json(const IsotropyLattice& lattice);

}  // namespace swarmsym
