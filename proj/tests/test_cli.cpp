#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string command = std::string(SWARMSYM_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) { return std::string(SWARMSYM_FIXTURES) + "/" + name; }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("swarmsym_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string out_dir() const { return "--output-dir " + dir_.string(); }
  fs::path dir_;
};

TEST_F(Cli, SymmetriesTriangle) {
  const Result r = cli("symmetries " + fixture("triangle.json"));
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["order"].get<int>(), 6);
  EXPECT_EQ(doc["symmetricity"].get<int>(), 3);
  EXPECT_EQ(doc["elements"].size(), 6u);
}

TEST_F(Cli, SymmetriesStar) {
  const auto doc = nlohmann::json::parse(cli("symmetries " + fixture("star16.json")).out);
  EXPECT_EQ(doc["order"].get<int>(), 16);
  EXPECT_EQ(doc["symmetricity"].get<int>(), 8);
}

TEST_F(Cli, SymmetriesSingleRobotIsFullGamma) {
  const auto doc = nlohmann::json::parse(cli("symmetries " + fixture("single.json")).out);
  EXPECT_TRUE(doc["full_gamma"].get<bool>());
  EXPECT_EQ(doc["order"].get<std::string>(), "inf");
}

TEST_F(Cli, ChiralityOnly) {
  const auto doc = nlohmann::json::parse(cli("symmetries --chirality-only " + fixture("polygon16.json")).out);
  EXPECT_EQ(doc["order"].get<int>(), 16);
}

TEST_F(Cli, ClassifyTwoTriangles) {
  const Result r = cli("classify " + fixture("two_triangles.json"));
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["rotational_order"].get<int>(), 3);
  EXPECT_EQ(doc["polygon_partition"].size(), 2u);
}

TEST_F(Cli, SimulateStarGainsSymmetry) {
  const Result r = cli(out_dir() + " --tol 1e-5 simulate " + fixture("star16.json") +
                       " --protocol gtm --h 0.51980 --range 0.58 --rounds 1 --singular-tol 1e-4");
  ASSERT_EQ(r.code, 0);
  std::istringstream log(r.out);
  std::string first, second;
  std::getline(log, first);
  std::getline(log, second);
  EXPECT_EQ(first.rfind("0, 16, 8,", 0), 0u) << first;
  EXPECT_EQ(second.rfind("1, 32, 16,", 0), 0u) << second;
  EXPECT_EQ(slurp(dir_ / "symmetry.log"), r.out);
  EXPECT_EQ(slurp(dir_ / "trace.csv").rfind("round,robot,x,y\n", 0), 0u);
}

TEST_F(Cli, SimulatePolygonKeepsSymmetricity) {
  const Result r = cli(out_dir() + " simulate " + fixture("polygon16.json") +
                       " --protocol gtm --h 0.25 --range 0.4 --rounds 50 --cycle");
  ASSERT_EQ(r.code, 0);
  std::istringstream log(r.out);
  std::string line;
  int rounds = 0;
  while (std::getline(log, line)) {
    EXPECT_NE(line.find(", 16,"), std::string::npos) << line;
    ++rounds;
  }
  EXPECT_EQ(rounds, 51);
}

TEST_F(Cli, SimulateZeroRoundsEchoesInput) {
  ASSERT_EQ(cli(out_dir() + " simulate " + fixture("triangle.json") + " --rounds 0").code, 0);
  std::istringstream csv(slurp(dir_ / "trace.csv"));
  std::string line;
  int rows = 0;
  std::getline(csv, line);
  while (std::getline(csv, line)) {
    EXPECT_EQ(line.rfind("0,", 0), 0u);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}

TEST_F(Cli, SpectrumSixteen) {
  const Result r = cli(out_dir() + " spectrum --n 16 --generator gtm --h 0.5,0.51980");
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(slurp(dir_ / "spectrum.json"));
  const auto& crit = doc["reports"][0]["critical_h"];
  bool half = false, star = false;
  for (const auto& c : crit) {
    half |= std::fabs(c["h"].get<double>() - 0.5) < 1e-12;
    star |= std::fabs(c["h"].get<double>() - 0.51980) < 1e-4;
  }
  EXPECT_TRUE(half);
  EXPECT_TRUE(star);
  EXPECT_GT(fs::file_size(dir_ / "spectrum.svg"), 0u);
}

TEST_F(Cli, SpectrumFifteenSmallestCritical) {
  ASSERT_EQ(cli(out_dir() + " spectrum --n 15 --h 0.3").code, 0);
  const auto doc = nlohmann::json::parse(slurp(dir_ / "spectrum.json"));
  const double smallest = doc["reports"][0]["critical_h"][0]["h"].get<double>();
  EXPECT_NEAR(smallest, 1.0 / (1.0 - std::cos(14 * M_PI / 15)), 1e-12);
}

TEST_F(Cli, SpectrumZeroStep) {
  ASSERT_EQ(cli(out_dir() + " spectrum --n 8 --h 0").code, 0);
  const auto doc = nlohmann::json::parse(slurp(dir_ / "spectrum.json"));
  for (const auto& s : doc["reports"][0]["sigmas"]) EXPECT_DOUBLE_EQ(s.get<double>(), 1.0);
}

TEST_F(Cli, SpectrumAsymmetricGeneratorIsInputError) {
  EXPECT_EQ(cli(out_dir() + " spectrum --generator 0,1,0,0 --h 0.5").code, 2);
}

TEST_F(Cli, LatticeTriangle) {
  const Result r = cli(out_dir() + " lattice " + fixture("triangle.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "nodes 2\nedges 1\n");
  EXPECT_TRUE(fs::exists(dir_ / "lattice.dot"));
  EXPECT_TRUE(fs::exists(dir_ / "lattice.json"));
}

TEST_F(Cli, LatticeTwoTriangles) {
  const Result r = cli(out_dir() + " lattice " + fixture("two_triangles.json") + " --max-rot-order 6 --conjugacy");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("nodes 8\n", 0), 0u) << r.out;
}

TEST_F(Cli, LatticeGenericFour) {
  const Result r = cli(out_dir() + " lattice " + fixture("generic4.json") + " --max-depth 1");
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(slurp(dir_ / "lattice.json"));
  const int bottom = doc["bottom"].get<int>();
  EXPECT_EQ(doc["nodes"][bottom]["order"].get<int>(), 1);
}

TEST_F(Cli, LatticeCapIsExitFive) {
  const Result r = cli(out_dir() + " lattice " + fixture("two_triangles.json") + " --node-cap 3");
  EXPECT_EQ(r.code, 5);
  EXPECT_TRUE(fs::exists(dir_ / "lattice.json"));
  EXPECT_TRUE(nlohmann::json::parse(slurp(dir_ / "lattice.json"))["truncated"].get<bool>());
}

TEST_F(Cli, Automorphisms) {
  const Result r = cli("automorphisms " + fixture("polygon16.json") + " --range 0.4 --rotational");
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["order"].get<int>(), 32);
  EXPECT_EQ(doc["rotational"].size(), 16u);
}

TEST_F(Cli, ErrorExitCodes) {
  EXPECT_EQ(cli("symmetries /nonexistent.json").code, 2);
  EXPECT_EQ(cli("bogus").code, 2);
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli(out_dir() + " simulate " + fixture("triangle.json") + " --protocol nope").code, 2);

  const fs::path bad = dir_ / "bad.json";
  std::ofstream(bad) << R"({"positions": [[1]]})";
  EXPECT_EQ(cli("symmetries " + bad.string()).code, 2);
}

TEST_F(Cli, HelpExitsZero) {
  EXPECT_EQ(cli("--help").code, 0);
}

TEST_F(Cli, RepeatedRunsAreByteIdentical) {
  const std::string args = " simulate " + fixture("star16.json") + " --h 0.3 --range 0.58 --rounds 5";
  ASSERT_EQ(cli(out_dir() + args).code, 0);
  const std::string trace = slurp(dir_ / "trace.csv");
  const std::string log = slurp(dir_ / "symmetry.log");
  ASSERT_EQ(cli(out_dir() + args).code, 0);
  EXPECT_EQ(slurp(dir_ / "trace.csv"), trace);
  EXPECT_EQ(slurp(dir_ / "symmetry.log"), log);

  ASSERT_EQ(cli(out_dir() + " lattice " + fixture("triangle.json")).code, 0);
  const std::string dot = slurp(dir_ / "lattice.dot");
  ASSERT_EQ(cli(out_dir() + " lattice " + fixture("triangle.json")).code, 0);
  EXPECT_EQ(slurp(dir_ / "lattice.dot"), dot);

  EXPECT_EQ(cli("symmetries " + fixture("two_triangles.json")).out,
            cli("symmetries " + fixture("two_triangles.json")).out);
}

}  // namespace
