#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace swarmsym {

// |sigma| at or below this counts as a zero eigenvalue.
inline constexpr double kSingularTol = 1e-9;

struct CriticalStep {
  int j = 0;
  double h = 0.0;
};

struct SpectralReport {
  std::vector<double> lambdas;
  std::vector<double> sigmas;
  double h = 0.0;
  std::vector<CriticalStep> critical_h;
  int kernel_dim = 0;
  Eigen::MatrixXd kernel_basis;  // 2n x kernel_dim, orthonormal columns
};

// First row (0, 1/2, 0, ..., 0, 1/2).
std::vector<double> gtm_generator(int n);
Eigen::MatrixXd circulant(const std::vector<double>& w);

// lambda_j = sum_i w_i cos(2 pi i j / n); rejects generators with w_i != w_{n-i}.
std::vector<double> circulant_eigs(const std::vector<double>& w);

std::vector<double> shift_spectrum(const std::vector<double>& lambdas, double h);

// h_j = 1 / (1 - lambda_j) for every lambda_j in [-1, 0], ascending by h.
std::vector<CriticalStep> critical_step_sizes(const std::vector<double>& lambdas);

// Ascending eigenvalues of a symmetric matrix.
std::vector<double> symmetric_eigs(const Eigen::MatrixXd& w);

// (1 - h) I + h W.
Eigen::MatrixXd reduced_matrix(const Eigen::MatrixXd& w, double h);

// min |sigma| > tol. Non-symmetric W falls back to the smallest singular value.
bool is_invertible(const Eigen::MatrixXd& w, double h, double tol = kSingularTol);

struct GatheringDiagnostics {
  bool valid = false;
  bool row_sums_ok = false;
  bool unit_eigenvalue_simple = false;
  bool ones_eigenvector = false;
  bool others_bounded = false;
  // Some non-unit eigenvalue has modulus within tol of 1 (e.g. -1 on even cycles).
  bool marginal = false;
  std::vector<double> eigenvalues;
  std::string message;
};

GatheringDiagnostics validate_gathering(const Eigen::MatrixXd& w, double tol = kSingularTol);

// Dense analysis of a symmetric W at step size h.
SpectralReport analyze(const Eigen::MatrixXd& w, double h);
// Same, with eigenvalues in circulant order j = 0..n-1.
SpectralReport analyze_circulant(const std::vector<double>& generator, double h);

struct KernelSplit {
  Eigen::VectorXd v0;  // component in ker(A_h)
  Eigen::VectorXd v;   // component in ker(A_h)^perp
};

KernelSplit kernel_decompose(const Eigen::MatrixXd& w, double h, const Eigen::VectorXd& z);

std::string report_to_json(const SpectralReport& report);

// Scatter of sigma_{j,h} against j, one series per h.
std::string spectrum_svg(const std::vector<double>& lambdas, const std::vector<double>& hs);

}  // namespace swarmsym
