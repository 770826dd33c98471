#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "swarmsym/configuration.hpp"

namespace swarmsym {

// Tolerance for comparing rotation angles and reflection axes (radians).
inline constexpr double kAngleTol = 1e-9;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class OrthKind { kRotation, kReflection };

// Element of O(2): a rotation by `angle` in [0, 2pi), or a reflection across
// the line through the origin at `angle` in [0, pi).
class OrthogonalElement {
 public:
  OrthogonalElement() = default;
  static OrthogonalElement identity() { return rotation(0.0); }
  static OrthogonalElement rotation(double angle);
  static OrthogonalElement reflection(double axis_angle);

  OrthKind kind() const { return kind_; }
  bool is_rotation() const { return kind_ == OrthKind::kRotation; }
  double angle() const { return angle_; }
  double determinant() const { return is_rotation() ? 1.0 : -1.0; }

  Eigen::Matrix2d matrix() const;
  Point apply(const Point& p) const;
  // (*this) after rhs, i.e. the map p -> this(rhs(p)).
  OrthogonalElement compose(const OrthogonalElement& rhs) const;
  OrthogonalElement inverse() const;
  bool approx_equal(const OrthogonalElement& other, double tol = kAngleTol) const;

 private:
  OrthogonalElement(OrthKind kind, double angle) : kind_(kind), angle_(angle) {}

  OrthKind kind_ = OrthKind::kRotation;
  double angle_ = 0.0;
};

// Bijection on {0..n-1} stored as its image array.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> image);
  static Permutation identity(int n);
  // Builds from a one-based image list, e.g. {3, 4, 5, 6, 1, 2}.
  static Permutation from_one_based(const std::vector<int>& image);
  // i -> (i + k) mod n.
  static Permutation cyclic_shift(int n, int k);
  static Permutation transposition(int n, int a, int b);

  int size() const { return static_cast<int>(image_.size()); }
  int operator()(int i) const { return image_[i]; }
  const std::vector<int>& image() const { return image_; }
  bool is_identity() const;
  Permutation inverse() const;
  // i -> next(this(i)).
  Permutation then(const Permutation& next) const;
  // The 2n x 2n block matrix M_kappa with (M_kappa)_{ij} = I_2 iff kappa(i) = j.
  Eigen::MatrixXd block_matrix() const;
  std::size_t hash() const;

  auto operator<=>(const Permutation&) const = default;
  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> image_;
};

// gamma = M_kappa M_rho, acting as (gamma z)_i = rho z_{kappa(i)}.
struct SymmetryElement {
  OrthogonalElement rho;
  Permutation kappa;

  static SymmetryElement identity(int n) {
    return {OrthogonalElement::identity(), Permutation::identity(n)};
  }
  int size() const { return kappa.size(); }
  Eigen::MatrixXd matrix() const;
  bool approx_equal(const SymmetryElement& other, double tol = kAngleTol) const {
    return kappa == other.kappa && rho.approx_equal(other.rho, tol);
  }
};

Configuration apply(const SymmetryElement& gamma, const Configuration& z);
Eigen::VectorXd apply(const SymmetryElement& gamma, const Eigen::VectorXd& v);
// a after b: apply(compose(a, b), z) == apply(a, apply(b, z)).
SymmetryElement compose(const SymmetryElement& a, const SymmetryElement& b);
SymmetryElement inverse(const SymmetryElement& a);
// "rot(θ)∘perm[i1,...,in]" or "refl(θ)∘perm[...]", one-based labels.
std::string to_string(const SymmetryElement& gamma);

// Tolerance-aware lookup of symmetry elements keyed by their permutation.
class ElementIndex {
 public:
  void insert(const SymmetryElement& e, int position);
  int find(const SymmetryElement& e, const std::vector<SymmetryElement>& storage,
           double tol = kAngleTol) const;
  void clear() { buckets_.clear(); }

 private:
  std::unordered_map<std::size_t, std::vector<int>> buckets_;
};

// Finite subgroup of O(2) x S_n, or the flagged full group Gamma (only
// realized by the all-collided configuration).
class SymmetryGroup {
 public:
  SymmetryGroup() = default;
  static SymmetryGroup trivial(int n);
  static SymmetryGroup full_gamma(int n);
  // Trusts that `elements` is closed; removes duplicates and sorts.
  static SymmetryGroup from_elements(int n, std::vector<SymmetryElement> elements);

  int degree() const { return n_; }
  bool is_full_gamma() const { return full_; }
  // Number of stored elements; for the full group this is the witness set size.
  std::size_t order() const { return elements_.size(); }
  const std::vector<SymmetryElement>& elements() const { return elements_; }
  bool contains(const SymmetryElement& e, double tol = kAngleTol) const;
  // Number of distinct rotation angles among the elements.
  int rotation_count(double tol = kAngleTol) const;
  // Greedy generating set (each generator enlarges the closure of the previous ones).
  std::vector<SymmetryElement> generators() const;
  // Exhaustive check of identity, closure and inverses.
  bool satisfies_group_axioms(double tol = kAngleTol) const;

 private:
  int n_ = 0;
  bool full_ = false;
  std::vector<SymmetryElement> elements_;
  ElementIndex index_;
};

// Equality of element sets (full-group flags must agree).
bool same_group(const SymmetryGroup& a, const SymmetryGroup& b, double tol = kAngleTol);

// Isotropy subgroup Gamma_z within relative tolerance `tol`.
SymmetryGroup detect_symmetries(const Configuration& z, double tol = kDefaultTol,
                                bool chirality_only = false);

// Number of rotational symmetries; n for the all-collided configuration.
int symmetricity(const Configuration& z, double tol = kDefaultTol);

// Smallest group containing the generators; throws CapExceeded past `cap` elements.
SymmetryGroup close_group(int n, const std::vector<SymmetryElement>& generators,
                          std::size_t cap = 100000);

// Orthonormal basis (columns) of Fix(H) in R^{2n}.
Eigen::MatrixXd fixed_subspace(const SymmetryGroup& h);

// Group average (1/|H|) sum gamma v, the orthogonal projection onto Fix(H).
Eigen::VectorXd project_to_fixed(const SymmetryGroup& h, const Eigen::VectorXd& v);

// Every element of a has a tolerance match in b.
bool subset_check(const SymmetryGroup& a, const SymmetryGroup& b, double tol = kAngleTol);

using EvolutionMap = std::function<Configuration(const Configuration&)>;

// ||F(gamma z) - gamma F(z)||_2.
double equivariance_residual(const EvolutionMap& f, const Configuration& z,
                             const SymmetryElement& gamma);

}  // namespace swarmsym
