#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("hullmod_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(HULLMOD_CLI) + " --out-dir " + work_dir().string() + " " + args +
                          " > " + (work_dir() / "stdout.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, GenerateCoverModulus) {
  ASSERT_EQ(run("--seed 3 generate --kind segment --m 6 --n 8 --out seg.csv"), 0);
  const auto cls = (work_dir() / "seg.csv").string();
  ASSERT_EQ(run("cover --class " + cls + " --grid geometric:1:0.05:6 --check"), 0);
  const auto covering = slurp(work_dir() / "covering.csv");
  EXPECT_EQ(covering.rfind("eps,size,entropy,seed,draws,config_hash", 0), 0u);
  ASSERT_EQ(run("modulus --class " + cls + " --grid 0.5,0.25 --draws 200 --hull true"), 0);
  EXPECT_NE(slurp(work_dir() / "modulus_hull.csv").find(",1,200,"), std::string::npos);
}

TEST(Cli, Theorem1CheckPassesOnTwoPoint) {
  ASSERT_EQ(run("generate --kind two_point --n 4 --out tp.csv"), 0);
  EXPECT_EQ(run("theorem1-check --class " + (work_dir() / "tp.csv").string() + " --draws 2000"), 0);
}

TEST(Cli, FixpointPrintsJson) {
  ASSERT_EQ(run("fixpoint --equation uo --psi linear:0.5"), 0);
  EXPECT_NE(slurp(work_dir() / "stdout.txt").find("\"value\": 0.25"), std::string::npos);
}

TEST(Cli, ConfigFileSuppliesOptions) {
  std::ofstream(work_dir() / "run.toml") << "seed = 12\n";
  ASSERT_EQ(run("--config " + (work_dir() / "run.toml").string() + " rates --kind ex2_Veq2 --V 2 --grid 0.3,0.1"), 0);
  EXPECT_NE(slurp(work_dir() / "rates.csv").find(",12,0,"), std::string::npos);
}

TEST(Cli, RejectsUnknownInput) {
  EXPECT_NE(run("generate --kind torus"), 0);
  EXPECT_NE(run("nosuchcommand"), 0);
}
