#include "swarmsym/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "swarmsym/errors.hpp"

namespace swarmsym {

namespace {

constexpr double kPiLocal = 3.14159265358979323846;

bool is_symmetric(const Eigen::MatrixXd& w, double tol) {
  return w.rows() == w.cols() && (w - w.transpose()).cwiseAbs().maxCoeff() <= tol;
}

void require_square(const Eigen::MatrixXd& w) {
  if (w.rows() != w.cols() || w.rows() == 0) throw InputError("weight matrix must be square");
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& w, double h) {
  const int n = static_cast<int>(w.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w);
  std::vector<int> kernel;
  for (int k = 0; k < n; ++k) {
    if (std::fabs(1.0 - h + h * es.eigenvalues()[k]) <= kSingularTol) kernel.push_back(k);
  }
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(2 * n, 2 * static_cast<int>(kernel.size()));
  for (std::size_t c = 0; c < kernel.size(); ++c) {
    const Eigen::VectorXd u = es.eigenvectors().col(kernel[c]);
    for (int i = 0; i < n; ++i) {
      basis(2 * i, 2 * c) = u[i];
      basis(2 * i + 1, 2 * c + 1) = u[i];
    }
  }
  return basis;
}

}  // namespace

std::vector<double> gtm_generator(int n) {
  if (n < 3) throw InputError("Go-To-The-Middle needs n >= 3");
  std::vector<double> w(n, 0.0);
  w[1] += 0.5;
  w[n - 1] += 0.5;
  return w;
}

Eigen::MatrixXd circulant(const std::vector<double>& w) {
  const int n = static_cast<int>(w.size());
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m(r, c) = w[((c - r) % n + n) % n];
  }
  return m;
}

std::vector<double> circulant_eigs(const std::vector<double>& w) {
  const int n = static_cast<int>(w.size());
  if (n == 0) throw InputError("empty circulant generator");
  double scale = 0.0;
  for (double x : w) scale = std::max(scale, std::fabs(x));
  for (int i = 1; i < n; ++i) {
    if (std::fabs(w[i] - w[n - i]) > 1e-12 * std::max(scale, 1.0)) {
      throw InputError("circulant generator is not symmetric (w_i != w_{n-i})");
    }
  }
  std::vector<double> lambdas(n);
  for (int j = 0; j < n; ++j) {
    double re = 0.0, im = 0.0;
    for (int i = 0; i < n; ++i) {
      const double angle = 2.0 * kPiLocal * static_cast<double>((static_cast<long long>(i) * j) % n) / n;
      re += w[i] * std::cos(angle);
      im += w[i] * std::sin(angle);
    }
    if (std::fabs(im) > 1e-12 * std::max(1.0, scale * n)) {
      throw InputError("circulant eigenvalue has a non-negligible imaginary part");
    }
    lambdas[j] = re;
  }
  return lambdas;
}

std::vector<double> shift_spectrum(const std::vector<double>& lambdas, double h) {
  std::vector<double> sigmas(lambdas.size());
  std::transform(lambdas.begin(), lambdas.end(), sigmas.begin(),
                 [h](double l) { return 1.0 - h + h * l; });
  return sigmas;
}

std::vector<CriticalStep> critical_step_sizes(const std::vector<double>& lambdas) {
  constexpr double kEdge = 1e-12;
  std::vector<CriticalStep> out;
  for (int j = 0; j < static_cast<int>(lambdas.size()); ++j) {
    const double l = lambdas[j];
    if (l >= -1.0 - kEdge && l <= kEdge) out.push_back({j, 1.0 / (1.0 - l)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CriticalStep& a, const CriticalStep& b) { return a.h < b.h; });
  return out;
}

std::vector<double> symmetric_eigs(const Eigen::MatrixXd& w) {
  require_square(w);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

Eigen::MatrixXd reduced_matrix(const Eigen::MatrixXd& w, double h) {
  require_square(w);
  return (1.0 - h) * Eigen::MatrixXd::Identity(w.rows(), w.cols()) + h * w;
}

bool is_invertible(const Eigen::MatrixXd& w, double h, double tol) {
  require_square(w);
  if (is_symmetric(w, 1e-14)) {
    double smallest = INFINITY;
    for (double s : shift_spectrum(symmetric_eigs(w), h)) smallest = std::min(smallest, std::fabs(s));
    return smallest > tol;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(reduced_matrix(w, h));
  return svd.singularValues().minCoeff() > tol;
}

GatheringDiagnostics validate_gathering(const Eigen::MatrixXd& w, double tol) {
  require_square(w);
  GatheringDiagnostics d;
  const int n = static_cast<int>(w.rows());
  if (!is_symmetric(w, tol)) {
    d.message = "weight matrix is not symmetric";
    return d;
  }
  d.row_sums_ok = (w.rowwise().sum().array() - 1.0).abs().maxCoeff() <= tol;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w);
  const Eigen::VectorXd& ev = es.eigenvalues();
  d.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  int unit = 0, unit_index = -1;
  d.others_bounded = true;
  for (int k = 0; k < n; ++k) {
    if (std::fabs(ev[k] - 1.0) <= tol) {
      ++unit;
      unit_index = k;
      continue;
    }
    if (std::fabs(ev[k]) > 1.0 + tol) d.others_bounded = false;
    if (std::fabs(ev[k]) >= 1.0 - tol) d.marginal = true;
  }
  d.unit_eigenvalue_simple = unit == 1;
  if (d.unit_eigenvalue_simple) {
    const Eigen::VectorXd u = es.eigenvectors().col(unit_index);
    const Eigen::VectorXd ones = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    d.ones_eigenvector = std::fabs(std::fabs(u.dot(ones)) - 1.0) <= 1e-9;
  }
  d.valid = d.row_sums_ok && d.unit_eigenvalue_simple && d.ones_eigenvector && d.others_bounded;

  std::ostringstream msg;
  if (!d.row_sums_ok) msg << "row sums differ from 1; ";
  if (!d.unit_eigenvalue_simple) msg << "eigenvalue 1 has multiplicity " << unit << "; ";
  if (d.unit_eigenvalue_simple && !d.ones_eigenvector) msg << "eigenvector of 1 is not constant; ";
  if (!d.others_bounded) msg << "an eigenvalue exceeds 1 in modulus; ";
  if (d.marginal) msg << "marginal: a non-unit eigenvalue has modulus 1; ";
  d.message = msg.str();
  if (d.message.empty()) d.message = "ok";
  return d;
}

SpectralReport analyze(const Eigen::MatrixXd& w, double h) {
  require_square(w);
  if (!is_symmetric(w, 1e-12)) throw InputError("spectral analysis needs a symmetric weight matrix");
  SpectralReport r;
  r.h = h;
  r.lambdas = symmetric_eigs(w);
  r.sigmas = shift_spectrum(r.lambdas, h);
  r.critical_h = critical_step_sizes(r.lambdas);
  r.kernel_basis = kernel_basis(w, h);
  r.kernel_dim = static_cast<int>(r.kernel_basis.cols());
  return r;
}

SpectralReport analyze_circulant(const std::vector<double>& generator, double h) {
  SpectralReport r;
  r.h = h;
  r.lambdas = circulant_eigs(generator);
  r.sigmas = shift_spectrum(r.lambdas, h);
  r.critical_h = critical_step_sizes(r.lambdas);
  r.kernel_basis = kernel_basis(circulant(generator), h);
  r.kernel_dim = static_cast<int>(r.kernel_basis.cols());
  return r;
}

KernelSplit kernel_decompose(const Eigen::MatrixXd& w, double h, const Eigen::VectorXd& z) {
  if (z.size() != 2 * w.rows()) throw InputError("kernel_decompose: dimension mismatch");
  const Eigen::MatrixXd basis = analyze(w, h).kernel_basis;
  KernelSplit split;
  split.v0 = basis.cols() > 0 ? Eigen::VectorXd(basis * (basis.transpose() * z))
                              : Eigen::VectorXd::Zero(z.size());
  split.v = z - split.v0;
  return split;
}

std::string report_to_json(const SpectralReport& report) {
  nlohmann::json crit = nlohmann::json::array();
  for (const auto& c : report.critical_h) crit.push_back({{"j", c.j}, {"h", c.h}});
  nlohmann::json doc{{"lambdas", report.lambdas},
                     {"sigmas", report.sigmas},
                     {"h", report.h},
                     {"critical_h", crit},
                     {"kernel_dim", report.kernel_dim}};
  return doc.dump();
}

std::string spectrum_svg(const std::vector<double>& lambdas, const std::vector<double>& hs) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  constexpr double kWidth = 640, kHeight = 400, kMargin = 50;
  const int n = static_cast<int>(lambdas.size());
  double lo = 0.0, hi = 1.0;
  for (double h : hs) {
    for (double s : shift_spectrum(lambdas, h)) {
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
  }
  if (hi - lo < 1e-12) hi = lo + 1.0;
  auto px = [&](double j) {
    return kMargin + (n > 1 ? j / (n - 1) : 0.5) * (kWidth - 2 * kMargin);
  };
  auto py = [&](double s) { return kHeight - kMargin - (s - lo) / (hi - lo) * (kHeight - 2 * kMargin); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin
      << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\""
      << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << fmt("%.3f", py(0.0)) << "\" x2=\"" << kWidth - kMargin
      << "\" y2=\"" << fmt("%.3f", py(0.0)) << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">j</text>\n";
  out << "<text x=\"12\" y=\"" << kHeight / 2 << "\">σ</text>\n";
  out << "<text x=\"" << kMargin - 6 << "\" y=\"" << fmt("%.3f", py(lo)) << "\" text-anchor=\"end\">"
      << fmt("%.3g", lo) << "</text>\n";
  out << "<text x=\"" << kMargin - 6 << "\" y=\"" << fmt("%.3f", py(hi)) << "\" text-anchor=\"end\">"
      << fmt("%.3g", hi) << "</text>\n";

  for (std::size_t k = 0; k < hs.size(); ++k) {
    const char* color = kColors[k % (sizeof(kColors) / sizeof(kColors[0]))];
    const auto sigmas = shift_spectrum(lambdas, hs[k]);
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (int j = 0; j < n; ++j) {
      out << (j ? " " : "") << fmt("%.3f", px(j)) << ',' << fmt("%.3f", py(sigmas[j]));
    }
    out << "\"/>\n";
    for (int j = 0; j < n; ++j) {
      out << "<circle cx=\"" << fmt("%.3f", px(j)) << "\" cy=\"" << fmt("%.3f", py(sigmas[j]))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    out << "<text x=\"" << kWidth - kMargin + 4 << "\" y=\"" << kMargin + 16 * k << "\" fill=\"" << color
        << "\">h=" << fmt("%.5g", hs[k]) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace swarmsym
