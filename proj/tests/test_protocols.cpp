#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "support.hpp"
#include "swarmsym/connectivity.hpp"
#include "swarmsym/errors.hpp"
#include "swarmsym/fixtures.hpp"
#include "swarmsym/protocols.hpp"
#include "swarmsym/spectral.hpp"

namespace swarmsym {
namespace {

using testing::random_configuration;
using testing::random_element;
using testing::random_orthogonal;
using testing::symmetrized;
using testing::uniform;
using testing::uniform_int;

const double kHStar = 1.0 / (1.0 - std::cos(7.0 * kPi / 8.0));

std::vector<Protocol> built_ins(double range, double h) {
  return {gtm_protocol(range, h), uniform_average_protocol(range, h), stationary_protocol(range)};
}

double radius(const Configuration& z, int i) { return (z.point(i) - centroid(z)).norm(); }

TEST(Step, StationaryKeepsConfiguration) {
  std::mt19937_64 rng(61);
  const Configuration z = random_configuration(rng, 6);
  EXPECT_EQ(step(stationary_protocol(1.0), z), z);
}

TEST(Step, GtmOnThreeRobotLine) {
  const Configuration z{{-1, 0}, {0, 0}, {1, 0}};
  const Configuration next = reduced_step(gtm_protocol(2.0, 1.0), z, cycle_graph(3));
  const Configuration expected{{0.5, 0}, {0, 0}, {-0.5, 0}};
  EXPECT_LE((next.coords() - expected.coords()).norm(), 1e-15);
  EXPECT_EQ(step(gtm_protocol(2.0, 1.0), z), next);
}

TEST(Step, GtmOnStarAtCriticalStepGivesPolygon) {
  const Configuration star = fixtures::star16(0.2);
  const double range = 0.58;
  ASSERT_EQ(build_graph(star, range), cycle_graph(16));
  const Configuration next = step(gtm_protocol(range, kHStar), star);
  EXPECT_EQ(symmetricity(next, 1e-8), 16);
  const double r0 = radius(next, 0);
  for (int i = 1; i < 16; ++i) EXPECT_NEAR(radius(next, i), r0, 1e-12);
}

TEST(Step, IsolatedRobotStays) {
  const Configuration z{{0, 0}, {10, 0}, {10.5, 0}};
  const Configuration next = step(gtm_protocol(1.0, 0.5), z);
  EXPECT_EQ(next.point(0), z.point(0));
  EXPECT_NEAR(next.point(1).x(), 10.25, 1e-15);
}

TEST(ReducedStep, FreshGraphMatchesStepExactly) {
  std::mt19937_64 rng(62);
  for (int t = 0; t < 100; ++t) {
    const Configuration z = random_configuration(rng, uniform_int(rng, 2, 10));
    const double range = diameter(z) * uniform(rng, 0.2, 1.1);
    for (const Protocol& p : built_ins(range, uniform(rng, 0, 1))) {
      EXPECT_EQ(reduced_step(p, z, build_graph(z, range)), step(p, z)) << p.name;
    }
  }
}

TEST(ReducedStep, ZeroStepIsIdentity) {
  const Configuration z = fixtures::star16(0.2);
  EXPECT_EQ(reduced_step(gtm_protocol(1.0, 0.0), z, cycle_graph(16)), z);
}

TEST(ReducedStep, SizeMismatchThrows) {
  EXPECT_THROW(reduced_step(gtm_protocol(1.0, 0.5), fixtures::triangle(), cycle_graph(4)), InputError);
}

TEST(LaplacianStep, Examples) {
  std::mt19937_64 rng(63);
  const Configuration z = random_configuration(rng, 5);
  EXPECT_EQ(laplacian_step(gtm_weights(5), 0.0, z), z);

  const Eigen::MatrixXd avg = Eigen::MatrixXd::Constant(5, 5, 0.2);
  const Configuration gathered = laplacian_step(avg, 1.0, z);
  for (int i = 0; i < 5; ++i) EXPECT_LE((gathered.point(i) - centroid(z)).norm(), 1e-12);

  const double h = 0.3;
  const Configuration polygon = laplacian_step(gtm_weights(16), h, fixtures::regular_polygon(16));
  const double expected = 1 - h + h * std::cos(kTwoPi / 16);
  for (int i = 0; i < 16; ++i) EXPECT_NEAR(polygon.point(i).norm(), expected, 1e-12);

  EXPECT_THROW(laplacian_step(gtm_weights(4), 0.5, z), InputError);
}

TEST(LaplacianStep, MatchesExplicitMatrix) {
  std::mt19937_64 rng(64);
  for (int t = 0; t < 50; ++t) {
    const int n = uniform_int(rng, 3, 12);
    const Eigen::MatrixXd w = gtm_weights(n);
    const double h = uniform(rng, 0, 1);
    const Configuration z = random_configuration(rng, n);
    const Eigen::MatrixXd a = Eigen::kroneckerProduct(reduced_matrix(w, h), Eigen::Matrix2d::Identity());
    const Eigen::VectorXd expected = a * z.coords();
    EXPECT_LE((laplacian_step(w, h, z).coords() - expected).norm(), 1e-12 * std::max(1.0, expected.norm()));
  }
}

TEST(GtmWeights, Examples) {
  const Eigen::MatrixXd w3 = gtm_weights(3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_EQ(w3(i, j), i == j ? 0.0 : 0.5);
  }
  const Eigen::MatrixXd w4 = gtm_weights(4);
  EXPECT_EQ(w4(0, 1), 0.5);
  EXPECT_EQ(w4(0, 3), 0.5);
  EXPECT_EQ(w4(0, 2), 0.0);
  const Eigen::MatrixXd w16 = gtm_weights(16);
  EXPECT_LE((w16.rowwise().sum() - Eigen::VectorXd::Ones(16)).norm(), 1e-15);
  EXPECT_EQ(w16, w16.transpose());
  EXPECT_TRUE(validate_gathering(w16).valid);
  EXPECT_THROW(gtm_weights(2), InputError);
}

TEST(ValidateWeights, RejectsBadMatrices) {
  const ConnectivityGraph c4 = cycle_graph(4);
  EXPECT_NO_THROW(validate_weights(gtm_weights(4), c4));
  Eigen::MatrixXd off_edge = gtm_weights(4);
  off_edge(0, 2) = off_edge(2, 0) = 0.1;
  EXPECT_THROW(validate_weights(off_edge, c4), ProtocolError);
  Eigen::MatrixXd asym = gtm_weights(4);
  asym(0, 1) = 0.6;
  asym(0, 3) = 0.4;
  EXPECT_THROW(validate_weights(asym, c4), ProtocolError);
  Eigen::MatrixXd negative = gtm_weights(4);
  negative(0, 1) = negative(1, 0) = -0.5;
  EXPECT_THROW(validate_weights(negative, c4), ProtocolError);
}

TEST(LaplacianProtocol, InvalidRuleRaisesProtocolError) {
  const Protocol bad = laplacian_protocol("doubled", 10.0, 0.5, [](const Configuration& z, const ConnectivityGraph& g) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(z.size(), z.size());
    for (const auto& [i, j] : g.edges()) w(i, j) = w(j, i) = 1.0;
    return w;
  });
  EXPECT_THROW(step(bad, fixtures::triangle()), ProtocolError);
  const Protocol good = laplacian_protocol("gtm-like", 10.0, 0.5,
                                           [](const Configuration& z, const ConnectivityGraph&) {
                                             return gtm_weights(z.size());
                                           });
  const Eigen::VectorXd a = step(good, fixtures::triangle()).coords();
  EXPECT_LE((a - step(gtm_protocol(10.0, 0.5), fixtures::triangle()).coords()).norm(), 1e-15);
}

TEST(GlobalProtocol, UsesWholeConfiguration) {
  const Protocol to_centroid = global_protocol("centroid", 1.0, [](int, const Configuration& z) { return centroid(z); });
  std::mt19937_64 rng(65);
  const Configuration z = random_configuration(rng, 5);
  const Configuration next = step(to_centroid, z);
  for (int i = 0; i < 5; ++i) EXPECT_LE((next.point(i) - centroid(z)).norm(), 1e-12);
}

TEST(Properties, Equivariance) {
  std::mt19937_64 rng(66);
  for (int t = 0; t < 500; ++t) {
    const int n = uniform_int(rng, 2, 10);
    const Configuration z = uniform_int(rng, 0, 1) ? symmetrized(rng, n).z : random_configuration(rng, n);
    const double diam = diameter(z);
    const double range = diam * uniform(rng, 0.2, 1.1);
    const SymmetryElement gamma = random_element(rng, n);
    for (const Protocol& p : built_ins(range, uniform(rng, 0, 1))) {
      const EvolutionMap f = [&](const Configuration& c) { return step(p, c); };
      EXPECT_LE(equivariance_residual(f, z, gamma), 1e-10 * diam) << p.name;
    }
  }
}

TEST(Properties, ReducedEquivarianceUnderAutomorphisms) {
  std::mt19937_64 rng(67);
  for (int t = 0; t < 200; ++t) {
    const int n = uniform_int(rng, 3, 10);
    const ConnectivityGraph g = cycle_graph(n);
    const auto aut = automorphisms(g).elements;
    const SymmetryElement gamma{random_orthogonal(rng), aut[uniform_int(rng, 0, static_cast<int>(aut.size()) - 1)]};
    const Configuration z = random_configuration(rng, n);
    const Protocol p = gtm_protocol(1.0, uniform(rng, 0, 1));
    const EvolutionMap f = [&](const Configuration& c) { return reduced_step(p, c, g); };
    EXPECT_LE(equivariance_residual(f, z, gamma), 1e-10 * diameter(z));
  }
}

TEST(Properties, TranslationEquivariance) {
  std::mt19937_64 rng(68);
  for (int t = 0; t < 200; ++t) {
    const int n = uniform_int(rng, 2, 10);
    const Configuration z = random_configuration(rng, n);
    const Point xi(uniform(rng, -5, 5), uniform(rng, -5, 5));
    for (const Protocol& p : built_ins(diameter(z) * uniform(rng, 0.3, 1.1), uniform(rng, 0, 1))) {
      const Configuration a = step(p, translated(z, xi));
      const Configuration b = translated(step(p, z), xi);
      EXPECT_LE((a.coords() - b.coords()).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, xi.norm())) << p.name;
    }
  }
}

TEST(Properties, NoLoss) {
  std::mt19937_64 rng(69);
  for (int t = 0; t < 300; ++t) {
    const int n = uniform_int(rng, 3, 10);
    const Configuration z = uniform_int(rng, 0, 1) ? symmetrized(rng, n).z : random_configuration(rng, n);
    for (const Protocol& p : built_ins(diameter(z) * uniform(rng, 0.3, 1.1), uniform(rng, 0, 1))) {
      EXPECT_TRUE(subset_check(detect_symmetries(z), detect_symmetries(step(p, z)))) << p.name;
    }
  }
}

TEST(Properties, FixedSubspaceInvariance) {
  std::mt19937_64 rng(70);
  for (int t = 0; t < 200; ++t) {
    const auto sample = symmetrized(rng, uniform_int(rng, 3, 10));
    const double diam = diameter(sample.z);
    for (const Protocol& p : built_ins(diam * uniform(rng, 0.3, 1.1), uniform(rng, 0, 1))) {
      const Eigen::VectorXd fz = step(p, sample.z).coords();
      EXPECT_LE((fz - project_to_fixed(sample.group, fz)).norm(), 1e-9 * diam) << p.name;
    }
  }
}

TEST(Properties, GtmOnCycleKeepsCycleEdges) {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 50; ++t) {
    const int n = uniform_int(rng, 3, 16);
    // Perturbed polygon whose visibility graph is the label cycle.
    Configuration z = fixtures::regular_polygon(n);
    const double spacing = 2 * std::sin(kPi / n);
    for (int i = 0; i < n; ++i) {
      z.set_point(i, z.point(i) + 0.05 * spacing * Point(uniform(rng, -1, 1), uniform(rng, -1, 1)));
    }
    const double range = 1.2 * spacing;
    if (build_graph(z, range) != cycle_graph(n)) continue;
    RunOptions options;
    options.fixed_graph = cycle_graph(n);
    const Trace trace = run(gtm_protocol(range, uniform(rng, 0.05, 1.0)), z, 20, options);
    for (const auto& c : trace.configurations) {
      const ConnectivityGraph g = build_graph(c, range);
      for (const auto& [i, j] : cycle_graph(n).edges()) EXPECT_TRUE(g.has_edge(i, j));
    }
  }
}

TEST(Run, LostEdgesMatchDirectCount) {
  std::mt19937_64 rng(72);
  std::size_t total = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = uniform_int(rng, 3, 16);
    Configuration z = fixtures::regular_polygon(n);
    const double spacing = 2 * std::sin(kPi / n);
    for (int i = 0; i < n; ++i) {
      z.set_point(i, z.point(i) + 0.05 * spacing * Point(uniform(rng, -1, 1), uniform(rng, -1, 1)));
    }
    const double range = 1.2 * spacing;
    RunOptions options;
    options.monitor = {false, false, true};
    const Trace trace = run(gtm_protocol(range, uniform(rng, 0.05, 1.0)), z, 20, options);
    ASSERT_EQ(trace.records.size(), trace.configurations.size());
    EXPECT_EQ(trace.records[0].edges_lost, 0u);
    for (std::size_t r = 1; r < trace.configurations.size(); ++r) {
      const ConnectivityGraph before = build_graph(trace.configurations[r - 1], range);
      const ConnectivityGraph after = build_graph(trace.configurations[r], range);
      std::size_t lost = 0;
      for (const auto& [i, j] : before.edges()) lost += !after.has_edge(i, j);
      EXPECT_EQ(trace.records[r].edges_lost, lost);
      total += lost;
    }
  }
  // GTM does not preserve connectivity on general graphs.
  EXPECT_GT(total, 0u);
}

TEST(Run, ZeroRoundsEchoesInput) {
  const Trace trace = run(gtm_protocol(1.0, 0.5), fixtures::triangle(), 0);
  ASSERT_EQ(trace.configurations.size(), 1u);
  EXPECT_EQ(trace.configurations[0], fixtures::triangle());
}

TEST(Run, PolygonRadiusDecaysGeometrically) {
  const double h = 0.25;
  const Configuration z0 = fixtures::regular_polygon(16);
  const double range = 2 * std::sin(kPi / 16) * 1.01;
  RunOptions options;
  options.monitor = {true, false, false};
  options.fixed_graph = cycle_graph(16);
  const Trace trace = run(gtm_protocol(range, h), z0, 100, options);
  ASSERT_EQ(trace.configurations.size(), 101u);
  const double factor = 1 - h + h * std::cos(kPi / 8);
  for (int t = 0; t <= 100; ++t) {
    EXPECT_NEAR(trace.configurations[t].point(0).norm(), std::pow(factor, t), 1e-12);
    EXPECT_EQ(trace.records[t].symmetricity, 16);
  }
}

TEST(Run, StarGainsRotationsAtCriticalStep) {
  RunOptions options;
  options.monitor = {true, false, false};
  options.fixed_graph = cycle_graph(16);
  const Trace trace = run(gtm_protocol(1.0, kHStar), fixtures::star16(0.2), 1, options);
  ASSERT_EQ(trace.records.size(), 2u);
  EXPECT_EQ(trace.records[0].symmetricity, 8);
  EXPECT_EQ(trace.records[1].symmetricity, 16);
  EXPECT_FALSE(trace.records[1].gained.empty());
  for (GainClass c : trace.records[1].gain_classes) EXPECT_EQ(c, GainClass::kInsideGammaGNoninvertible);
}

TEST(Run, LossOfSymmetryAborts) {
  // A non-equivariant rule pushes robot 1 along global +x.
  const Protocol drift = global_protocol("drift", 1.0, [](int i, const Configuration& z) {
    return i == 0 ? Point(z.point(0) + Point(0.3, 0.1)) : z.point(i);
  });
  RunOptions options;
  options.monitor = {true, false, false};
  EXPECT_THROW(run(drift, fixtures::triangle(), 1, options), InvariantViolation);
}

TEST(Run, TraceCsvAndLog) {
  RunOptions options;
  options.monitor = {true, false, false};
  const Trace trace = run(gtm_protocol(10.0, 0.5), fixtures::triangle(), 2, options);
  const std::string csv = trace_to_csv(trace);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "round,robot,x,y");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 9);
  std::istringstream log(symmetry_log(trace));
  int lines = 0;
  while (std::getline(log, line)) {
    EXPECT_EQ(line.rfind(std::to_string(lines) + ", 6, 3,", 0), 0u) << line;
    ++lines;
  }
  EXPECT_EQ(lines, 3);
}

}  // namespace
}  // namespace swarmsym
