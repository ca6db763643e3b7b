#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <gtest/gtest.h>

#ifdef CCC_TOOL_PATH

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(CCC_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch_dir(const std::string& name) {
  return fs::temp_directory_path() / ("ccc_cli_" + name + "_" + std::to_string(std::random_device{}()));
}

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("simulate --horizon"), 2);
  EXPECT_EQ(run("certify"), 2);
  EXPECT_EQ(run("simulate --mu 1.5 --out /tmp/ccc_cli_unused"), 2);
  EXPECT_EQ(run("simulate --config /nonexistent/ccc.cfg"), 2);
  EXPECT_EQ(run("certify --trajectory /nonexistent/traj.csv"), 2);
}

TEST(Cli, SimulateThenCertify) {
  const auto dir = scratch_dir("sim");
  EXPECT_EQ(run("simulate --seed 3 --out " + dir.string()), 0);
  ASSERT_TRUE(fs::exists(dir / "trajectory.csv"));
  EXPECT_TRUE(fs::exists(dir / "report.txt"));
  const auto cert = dir / "cert";
  EXPECT_EQ(run("certify --trajectory " + (dir / "trajectory.csv").string() + " --out " + cert.string()), 0);
  EXPECT_TRUE(fs::exists(cert / "report.csv"));
  // mu* is admissible, so the strict run passes; a mu far outside I_kappa fails.
  EXPECT_EQ(run("certify --strict --trajectory " + (dir / "trajectory.csv").string()), 0);
  EXPECT_EQ(run("certify --strict --mu 0.01 --trajectory " + (dir / "trajectory.csv").string()), 1);
  fs::remove_all(dir);
}

TEST(Cli, BatchAndPacking) {
  const auto dir = scratch_dir("batch");
  EXPECT_EQ(run("batch --runs 5 --horizon 10 --percentiles 10,50 --seed 2 --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "percentile_10.csv"));
  EXPECT_TRUE(fs::exists(dir / "percentile_50.csv"));
  EXPECT_EQ(run("batch --runs 0 --out " + dir.string()), 2);
  EXPECT_EQ(run("packing-demo --candidates 50 --samples 2000 --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "packing.txt"));
  fs::remove_all(dir);
}

TEST(Cli, ConfigFile) {
  const auto dir = scratch_dir("cfg");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "run.cfg");
    f << "horizon = 12\nseed = 8\n";
  }
  EXPECT_EQ(run("simulate --config " + (dir / "run.cfg").string() + " --out " + (dir / "out").string()), 0);
  std::ifstream cfg(dir / "out" / "config.txt");
  std::string all((std::istreambuf_iterator<char>(cfg)), std::istreambuf_iterator<char>());
  EXPECT_NE(all.find("horizon = 12"), std::string::npos);
  EXPECT_NE(all.find("seed = 8"), std::string::npos);
  fs::remove_all(dir);
}

#endif
