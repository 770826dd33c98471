#include "swarmsym/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "swarmsym/errors.hpp"

namespace swarmsym {

namespace {

double wrap(double angle, double period) {
  double a = std::fmod(angle, period);
  if (a < 0.0) a += period;
  // Snap values within rounding of the period or of zero onto zero.
  if (a >= period - 1e-12 || a <= 1e-12) a = 0.0;
  return a;
}

double circular_gap(double a, double b, double period) {
  const double d = std::fabs(wrap(a - b, period));
  return std::min(d, period - d);
}

}  // namespace

// ---------------------------------------------------------------------------
// OrthogonalElement

OrthogonalElement OrthogonalElement::rotation(double angle) {
  return {OrthKind::kRotation, wrap(angle, kTwoPi)};
}

OrthogonalElement OrthogonalElement::reflection(double axis_angle) {
  return {OrthKind::kReflection, wrap(axis_angle, kPi)};
}

Eigen::Matrix2d OrthogonalElement::matrix() const {
  Eigen::Matrix2d m;
  if (is_rotation()) {
    const double c = std::cos(angle_), s = std::sin(angle_);
    m << c, -s, s, c;
  } else {
    const double c = std::cos(2.0 * angle_), s = std::sin(2.0 * angle_);
    m << c, s, s, -c;
  }
  return m;
}

Point OrthogonalElement::apply(const Point& p) const { return matrix() * p; }

OrthogonalElement OrthogonalElement::compose(const OrthogonalElement& rhs) const {
  // R(a)R(b) = R(a+b), R(a)S(b) = S(b + a/2), S(a)R(b) = S(a - b/2), S(a)S(b) = R(2(a-b)).
  if (is_rotation() && rhs.is_rotation()) return rotation(angle_ + rhs.angle_);
  if (is_rotation()) return reflection(rhs.angle_ + 0.5 * angle_);
  if (rhs.is_rotation()) return reflection(angle_ - 0.5 * rhs.angle_);
  return rotation(2.0 * (angle_ - rhs.angle_));
}

OrthogonalElement OrthogonalElement::inverse() const {
  return is_rotation() ? rotation(-angle_) : *this;
}

bool OrthogonalElement::approx_equal(const OrthogonalElement& other, double tol) const {
  if (kind_ != other.kind_) return false;
  const double period = is_rotation() ? kTwoPi : kPi;
  return circular_gap(angle_, other.angle_, period) <= tol;
}

// ---------------------------------------------------------------------------
// Permutation

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  std::vector<char> seen(image_.size(), 0);
  for (int v : image_) {
    if (v < 0 || v >= static_cast<int>(image_.size()) || seen[v]) {
      throw InputError("permutation image is not a bijection");
    }
    seen[v] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> image(n);
  std::iota(image.begin(), image.end(), 0);
  return Permutation(std::move(image));
}

Permutation Permutation::from_one_based(const std::vector<int>& image) {
  std::vector<int> zero_based(image.size());
  std::transform(image.begin(), image.end(), zero_based.begin(), [](int v) { return v - 1; });
  return Permutation(std::move(zero_based));
}

Permutation Permutation::cyclic_shift(int n, int k) {
  std::vector<int> image(n);
  for (int i = 0; i < n; ++i) image[i] = ((i + k) % n + n) % n;
  return Permutation(std::move(image));
}

Permutation Permutation::transposition(int n, int a, int b) {
  std::vector<int> image(n);
  std::iota(image.begin(), image.end(), 0);
  std::swap(image[a], image[b]);
  return Permutation(std::move(image));
}

bool Permutation::is_identity() const {
  for (int i = 0; i < size(); ++i) {
    if (image_[i] != i) return false;
  }
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(image_.size());
  for (int i = 0; i < size(); ++i) inv[image_[i]] = i;
  return Permutation(std::move(inv));
}

Permutation Permutation::then(const Permutation& next) const {
  if (next.size() != size()) throw InputError("permutation sizes differ");
  std::vector<int> out(image_.size());
  for (int i = 0; i < size(); ++i) out[i] = next.image_[image_[i]];
  return Permutation(std::move(out));
}

Eigen::MatrixXd Permutation::block_matrix() const {
  const int n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    m(2 * i, 2 * image_[i]) = 1.0;
    m(2 * i + 1, 2 * image_[i] + 1) = 1.0;
  }
  return m;
}

std::size_t Permutation::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (int v : image_) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// SymmetryElement

Eigen::MatrixXd SymmetryElement::matrix() const {
  const int n = size();
  const Eigen::Matrix2d r = rho.matrix();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) m.block<2, 2>(2 * i, 2 * kappa(i)) = r;
  return m;
}

Eigen::VectorXd apply(const SymmetryElement& gamma, const Eigen::VectorXd& v) {
  const int n = gamma.size();
  if (v.size() != 2 * n) throw InputError("symmetry element and vector sizes differ");
  const Eigen::Matrix2d r = gamma.rho.matrix();
  Eigen::VectorXd out(v.size());
  for (int i = 0; i < n; ++i) {
    out.segment<2>(2 * i) = r * v.segment<2>(2 * gamma.kappa(i));
  }
  return out;
}

Configuration apply(const SymmetryElement& gamma, const Configuration& z) {
  if (gamma.size() != z.size()) {
    throw InputError("symmetry element acts on " + std::to_string(gamma.size()) +
                     " robots, configuration has " + std::to_string(z.size()));
  }
  return Configuration(apply(gamma, z.coords()));
}

SymmetryElement compose(const SymmetryElement& a, const SymmetryElement& b) {
  if (a.size() != b.size()) throw InputError("compose: element sizes differ");
  return {a.rho.compose(b.rho), a.kappa.then(b.kappa)};
}

SymmetryElement inverse(const SymmetryElement& a) {
  return {a.rho.inverse(), a.kappa.inverse()};
}

std::string to_string(const SymmetryElement& gamma) {
  char angle[64];
  std::snprintf(angle, sizeof(angle), "%.12g", gamma.rho.angle());
  std::string out = gamma.rho.is_rotation() ? "rot(" : "refl(";
  out += angle;
  out += ")∘perm[";
  for (int i = 0; i < gamma.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(gamma.kappa(i) + 1);
  }
  return out + "]";
}

// ---------------------------------------------------------------------------
// ElementIndex

void ElementIndex::insert(const SymmetryElement& e, int position) {
  buckets_[e.kappa.hash()].push_back(position);
}

int ElementIndex::find(const SymmetryElement& e, const std::vector<SymmetryElement>& storage,
                       double tol) const {
  const auto it = buckets_.find(e.kappa.hash());
  if (it == buckets_.end()) return -1;
  for (int pos : it->second) {
    if (storage[pos].approx_equal(e, tol)) return pos;
  }
  return -1;
}

// ---------------------------------------------------------------------------
// SymmetryGroup

SymmetryGroup SymmetryGroup::trivial(int n) {
  return from_elements(n, {SymmetryElement::identity(n)});
}

SymmetryGroup SymmetryGroup::full_gamma(int n) {
  std::vector<SymmetryElement> witness{SymmetryElement::identity(n)};
  witness.push_back({OrthogonalElement::rotation(1.0), Permutation::identity(n)});
  witness.push_back({OrthogonalElement::reflection(0.0), Permutation::identity(n)});
  if (n >= 2) {
    witness.push_back({OrthogonalElement::identity(), Permutation::transposition(n, 0, 1)});
    witness.push_back({OrthogonalElement::identity(), Permutation::cyclic_shift(n, 1)});
  }
  SymmetryGroup g = from_elements(n, std::move(witness));
  g.full_ = true;
  return g;
}

SymmetryGroup SymmetryGroup::from_elements(int n, std::vector<SymmetryElement> elements) {
  SymmetryGroup g;
  g.n_ = n;
  for (auto& e : elements) {
    if (e.size() != n) throw InputError("group element has wrong degree");
    if (g.index_.find(e, g.elements_) >= 0) continue;
    g.index_.insert(e, static_cast<int>(g.elements_.size()));
    g.elements_.push_back(std::move(e));
  }
  std::sort(g.elements_.begin(), g.elements_.end(),
            [](const SymmetryElement& a, const SymmetryElement& b) {
              if (a.rho.kind() != b.rho.kind()) return a.rho.kind() < b.rho.kind();
              if (a.rho.angle() != b.rho.angle()) return a.rho.angle() < b.rho.angle();
              return a.kappa < b.kappa;
            });
  g.index_.clear();
  for (int i = 0; i < static_cast<int>(g.elements_.size()); ++i) {
    g.index_.insert(g.elements_[i], i);
  }
  return g;
}

bool SymmetryGroup::contains(const SymmetryElement& e, double tol) const {
  if (e.size() != n_) return false;
  if (full_) return true;
  return index_.find(e, elements_, tol) >= 0;
}

int SymmetryGroup::rotation_count(double tol) const {
  if (full_) return n_;
  std::vector<double> angles;
  for (const auto& e : elements_) {
    if (e.rho.is_rotation()) angles.push_back(e.rho.angle());
  }
  std::sort(angles.begin(), angles.end());
  std::vector<double> distinct;
  for (double a : angles) {
    bool seen = false;
    for (double d : distinct) seen = seen || circular_gap(a, d, kTwoPi) <= tol;
    if (!seen) distinct.push_back(a);
  }
  return static_cast<int>(distinct.size());
}

std::vector<SymmetryElement> SymmetryGroup::generators() const {
  if (full_) {
    std::vector<SymmetryElement> out;
    for (const auto& e : elements_) {
      if (!(e.rho.is_rotation() && e.rho.angle() == 0.0 && e.kappa.is_identity())) {
        out.push_back(e);
      }
    }
    return out;
  }
  std::vector<SymmetryElement> gens;
  SymmetryGroup span = trivial(n_);
  for (const auto& e : elements_) {
    if (span.contains(e)) continue;
    gens.push_back(e);
    span = close_group(n_, gens, elements_.size() + 1);
  }
  return gens;
}

bool SymmetryGroup::satisfies_group_axioms(double tol) const {
  if (full_) return true;
  if (!contains(SymmetryElement::identity(n_), tol)) return false;
  for (const auto& a : elements_) {
    if (!contains(inverse(a), tol)) return false;
    for (const auto& b : elements_) {
      if (!contains(compose(a, b), tol)) return false;
    }
  }
  return true;
}

bool same_group(const SymmetryGroup& a, const SymmetryGroup& b, double tol) {
  if (a.degree() != b.degree() || a.is_full_gamma() != b.is_full_gamma()) return false;
  if (a.is_full_gamma()) return true;
  if (a.order() != b.order()) return false;
  return subset_check(a, b, tol);
}

// ---------------------------------------------------------------------------
// Detection

namespace {

struct Cluster {
  std::vector<int> labels;  // ascending
  Point position;
};

std::vector<Cluster> collision_clusters(const Configuration& z, double eps) {
  const int n = z.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((z.point(i) - z.point(j)).norm() <= eps) parent[root(j)] = root(i);
    }
  }
  std::vector<Cluster> clusters;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = root(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(clusters.size());
      clusters.push_back({{}, Point::Zero()});
    }
    clusters[slot[r]].labels.push_back(i);
  }
  for (auto& c : clusters) {
    for (int i : c.labels) c.position += z.point(i);
    c.position /= static_cast<double>(c.labels.size());
  }
  return clusters;
}

// Appends every kappa with rho z_{kappa(i)} = z_i (within eps) to `out`.
void recover_permutations(const Configuration& z, const std::vector<Cluster>& clusters,
                          const OrthogonalElement& rho, double eps, std::size_t cap,
                          std::vector<SymmetryElement>& out) {
  const int n = z.size();
  const OrthogonalElement rho_inv = rho.inverse();
  std::vector<int> match(clusters.size(), -1);
  std::vector<char> used(clusters.size(), 0);
  for (std::size_t a = 0; a < clusters.size(); ++a) {
    const Point target = rho_inv.apply(clusters[a].position);
    int best = -1;
    double best_dist = 0.0;
    for (std::size_t b = 0; b < clusters.size(); ++b) {
      const double d = (clusters[b].position - target).norm();
      if (best < 0 || d < best_dist) {
        best = static_cast<int>(b);
        best_dist = d;
      }
    }
    if (best_dist > eps || used[best] ||
        clusters[best].labels.size() != clusters[a].labels.size()) {
      return;
    }
    used[best] = 1;
    match[a] = best;
  }

  // Enumerate all label bijections between matched clusters.
  std::vector<std::vector<int>> images;
  for (std::size_t a = 0; a < clusters.size(); ++a) images.push_back(clusters[match[a]].labels);
  std::vector<int> image(n);
  std::size_t produced = 0;
  auto emit = [&]() {
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t k = 0; k < clusters[a].labels.size(); ++k) {
        image[clusters[a].labels[k]] = images[a][k];
      }
    }
    SymmetryElement candidate{rho, Permutation(image)};
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, (rho.apply(z.point(candidate.kappa(i))) - z.point(i)).norm());
    }
    if (worst <= eps) {
      if (out.size() >= cap) throw CapExceeded("symmetry detection exceeded element cap");
      out.push_back(std::move(candidate));
    }
    ++produced;
  };
  // Odometer over per-cluster permutations.
  std::function<void(std::size_t)> recurse = [&](std::size_t a) {
    if (a == clusters.size()) {
      emit();
      return;
    }
    std::sort(images[a].begin(), images[a].end());
    do {
      recurse(a + 1);
    } while (std::next_permutation(images[a].begin(), images[a].end()));
  };
  recurse(0);
}

}  // namespace

SymmetryGroup detect_symmetries(const Configuration& z_in, double tol, bool chirality_only) {
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  const int n = z_in.size();
  const Configuration z = center(z_in);
  const double diam = diameter(z);
  if (diam <= kCoincidentTol) return SymmetryGroup::full_gamma(n);
  const double eps = tol * diam;

  int reference = -1;
  for (int i = 0; i < n; ++i) {
    const double r = z.point(i).norm();
    if (r <= eps) continue;
    if (reference < 0 || r < z.point(reference).norm()) reference = i;
  }
  const Point ref = z.point(reference);
  const double ref_radius = ref.norm();
  const double ref_angle = std::atan2(ref.y(), ref.x());

  std::vector<OrthogonalElement> candidates;
  auto add_candidate = [&](const OrthogonalElement& rho) {
    for (const auto& c : candidates) {
      if (c.approx_equal(rho)) return;
    }
    candidates.push_back(rho);
  };
  for (int s = 0; s < n; ++s) {
    const Point p = z.point(s);
    if (std::fabs(p.norm() - ref_radius) > eps) continue;
    const double angle = std::atan2(p.y(), p.x());
    add_candidate(OrthogonalElement::rotation(angle - ref_angle));
    if (!chirality_only) add_candidate(OrthogonalElement::reflection(0.5 * (ref_angle + angle)));
  }

  const auto clusters = collision_clusters(z, eps);
  std::vector<SymmetryElement> elements;
  constexpr std::size_t kDetectionCap = 1000000;
  for (const auto& rho : candidates) {
    recover_permutations(z, clusters, rho, eps, kDetectionCap, elements);
  }
  return SymmetryGroup::from_elements(n, std::move(elements));
}

int symmetricity(const Configuration& z, double tol) {
  return detect_symmetries(z, tol, false).rotation_count();
}

SymmetryGroup close_group(int n, const std::vector<SymmetryElement>& generators,
                          std::size_t cap) {
  for (const auto& g : generators) {
    if (g.size() != n) throw InputError("close_group: generator has wrong degree");
  }
  std::vector<SymmetryElement> elements{SymmetryElement::identity(n)};
  ElementIndex index;
  index.insert(elements[0], 0);
  for (std::size_t k = 0; k < elements.size(); ++k) {
    for (const auto& g : generators) {
      SymmetryElement e = compose(elements[k], g);
      if (index.find(e, elements) >= 0) continue;
      if (elements.size() >= cap) {
        throw CapExceeded("group closure exceeded " + std::to_string(cap) +
                          " elements (continuous subgroup suspected)");
      }
      index.insert(e, static_cast<int>(elements.size()));
      elements.push_back(std::move(e));
    }
  }
  return SymmetryGroup::from_elements(n, std::move(elements));
}

Eigen::MatrixXd fixed_subspace(const SymmetryGroup& h) {
  const int dim = 2 * h.degree();
  if (h.is_full_gamma()) return Eigen::MatrixXd(dim, 0);
  std::vector<const SymmetryElement*> active;
  for (const auto& e : h.elements()) {
    if (!(e.rho.is_rotation() && e.rho.angle() == 0.0 && e.kappa.is_identity())) {
      active.push_back(&e);
    }
  }
  if (active.empty()) return Eigen::MatrixXd::Identity(dim, dim);

  Eigen::MatrixXd stacked(dim * static_cast<Eigen::Index>(active.size()), dim);
  for (std::size_t k = 0; k < active.size(); ++k) {
    stacked.middleRows(dim * k, dim) = active[k]->matrix() - Eigen::MatrixXd::Identity(dim, dim);
  }
  // Reduce the tall stack to a square factor before the SVD.
  Eigen::MatrixXd reduced = stacked;
  if (stacked.rows() > dim) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(stacked);
    reduced = qr.matrixQR().topRows(dim).triangularView<Eigen::Upper>();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(reduced, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-10 * (sv.size() > 0 ? sv[0] : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) ++rank;
  }
  return svd.matrixV().rightCols(dim - rank);
}

Eigen::VectorXd project_to_fixed(const SymmetryGroup& h, const Eigen::VectorXd& v) {
  if (h.is_full_gamma()) return Eigen::VectorXd::Zero(v.size());
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(v.size());
  for (const auto& e : h.elements()) sum += apply(e, v);
  return sum / static_cast<double>(h.order());
}

bool subset_check(const SymmetryGroup& a, const SymmetryGroup& b, double tol) {
  if (a.degree() != b.degree()) throw InputError("subset_check: groups act on different n");
  if (b.is_full_gamma()) return true;
  if (a.is_full_gamma()) return false;
  return std::all_of(a.elements().begin(), a.elements().end(),
                     [&](const SymmetryElement& e) { return b.contains(e, tol); });
}

double equivariance_residual(const EvolutionMap& f, const Configuration& z,
                             const SymmetryElement& gamma) {
  const Configuration lhs = f(apply(gamma, z));
  const Configuration rhs = apply(gamma, f(z));
  return (lhs.coords() - rhs.coords()).norm();
}

}  // namespace swarmsym
