#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ptnlms/io.hpp"

namespace fs = std::filesystem;

namespace {

#ifndef PTNLMS_CLI_PATH
#error "PTNLMS_CLI_PATH must point at the built command-line binary"
#endif

struct CliResult {
  int exit_code = -1;
  std::string output;
};

fs::path temp_dir() {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("ptnlms_cli_test_" + std::to_string(++counter));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args, const fs::path& workdir) {
  const fs::path log = workdir / "cli_output.log";
  const std::string cmd = std::string(PTNLMS_CLI_PATH) + " " + args + " > " +
                          log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult result;
#ifdef _WIN32
  result.exit_code = status;
#else
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#endif
  std::ifstream in(log);
  std::ostringstream ss;
  ss << in.rdbuf();
  result.output = ss.str();
  return result;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("list prints the four built-in scenarios") {
  const fs::path dir = temp_dir();
  const CliResult r = run_cli("list", dir);
  CHECK(r.exit_code == 0);
  for (const char* name : {"fig1", "fig2a", "fig2b", "fig2c"})
    CHECK(r.output.find(name) != std::string::npos);
  CHECK(r.output.find("taps=64") != std::string::npos);
  CHECK(r.output.find("taps=100") != std::string::npos);
  CHECK(r.output.find("mu=0.99") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("analyze reports the conditioning facts") {
  const fs::path dir = temp_dir();
  const CliResult r = run_cli("analyze --wo 0.99,0.01 --rule prop", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("kappa(R)      = 1") != std::string::npos);
  CHECK(r.output.find("kappa(G_o)    = 99") != std::string::npos);
  CHECK(r.output.find("kappa(R')     = 99") != std::string::npos);
  CHECK(r.output.find("holds") != std::string::npos);

  const CliResult uniform = run_cli("analyze --wo 0.5,0.5,0.5 --rule prop", dir);
  CHECK(uniform.exit_code == 0);
  CHECK(uniform.output.find("kappa(G_o)    = 1") != std::string::npos);

  const CliResult degenerate = run_cli("analyze --wo 1,0,0.5 --rule prop", dir);
  CHECK(degenerate.exit_code == 0);
  CHECK(degenerate.output.find("kappa(G_o)    = inf") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("run: unknown scenario is a config error") {
  const fs::path dir = temp_dir();
  const CliResult r = run_cli("run --scenario fig9 --out " + dir.string(), dir);
  CHECK(r.exit_code == 1);
  CHECK_FALSE(fs::exists(dir / "curves.csv"));
  fs::remove_all(dir);
}

TEST_CASE("run: writes curves, metadata, and a plot script deterministically") {
  const fs::path dir = temp_dir();
  const fs::path out_a = dir / "a";
  const fs::path out_b = dir / "b";
  const std::string base =
      "run --scenario fig2a --trials 2 --horizon 50 --seed 7 --out ";
  const CliResult ra = run_cli(base + out_a.string(), dir);
  REQUIRE(ra.exit_code == 0);
  const CliResult rb = run_cli(base + out_b.string(), dir);
  REQUIRE(rb.exit_code == 0);

  for (const char* f : {"curves.csv", "meta.txt", "plot.gp"}) {
    CHECK(fs::exists(out_a / f));
    CHECK(slurp(out_a / f) == slurp(out_b / f));
  }

  const ptnlms::CurveTable table = ptnlms::read_curves_csv(out_a / "curves.csv");
  CHECK(table.names ==
        std::vector<std::string>{"nlms", "pnlms", "ipnlms", "l0nlms"});
  for (const auto& curve : table.mse) CHECK(curve.size() == 50);
  fs::remove_all(dir);
}

TEST_CASE("run: step-size override lands in the metadata") {
  const fs::path dir = temp_dir();
  const CliResult r = run_cli(
      "run --scenario fig2a --trials 1 --horizon 10 --mu.pnlms 0.25 --out " +
          dir.string(),
      dir);
  REQUIRE(r.exit_code == 0);
  const ptnlms::ResolvedRun meta = ptnlms::read_meta(dir / "meta.txt");
  bool found = false;
  for (const auto& a : meta.algorithms)
    if (a.name == "pnlms") {
      CHECK(a.mu == 0.25);
      found = true;
    }
  CHECK(found);
  fs::remove_all(dir);
}

TEST_CASE("run: a run replayed from its metadata file is identical") {
  const fs::path dir = temp_dir();
  const fs::path out_a = dir / "a";
  const fs::path out_b = dir / "b";
  const CliResult ra = run_cli(
      "run --scenario fig2b --trials 2 --horizon 40 --seed 3 --out " +
          out_a.string(),
      dir);
  REQUIRE(ra.exit_code == 0);
  const CliResult rb = run_cli(
      "run --config " + (out_a / "meta.txt").string() + " --out " +
          out_b.string(),
      dir);
  REQUIRE(rb.exit_code == 0);
  CHECK(slurp(out_a / "curves.csv") == slurp(out_b / "curves.csv"));
  fs::remove_all(dir);
}

TEST_CASE("fig1 run also emits the mean coefficient trajectories") {
  const fs::path dir = temp_dir();
  const CliResult r = run_cli(
      "run --scenario fig1 --horizon 30 --out " + dir.string(), dir);
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(dir / "weights.csv"));
  const std::string head = slurp(dir / "weights.csv");
  CHECK(head.rfind("iteration,algorithm,w0,w1", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("contours: writes a parsable grid and rejects bad dimensions") {
  const fs::path dir = temp_dir();
  const CliResult r = run_cli(
      "contours --wo 0.99,0.01 --rule prop --samples 21 --out " + dir.string(),
      dir);
  REQUIRE(r.exit_code == 0);
  const ptnlms::ContourGrid grid = ptnlms::read_grid_csv(dir / "grid.csv");
  CHECK(grid.axis0.samples == 21);
  CHECK(grid.axis1.samples == 21);
  CHECK(fs::exists(dir / "plot.gp"));

  const CliResult bad = run_cli(
      "contours --wo 1,0,0 --rule nlms --out " + dir.string(), dir);
  CHECK(bad.exit_code == 1);
  fs::remove_all(dir);
}

TEST_CASE("missing subcommand or unknown flag is a usage error") {
  const fs::path dir = temp_dir();
  CHECK(run_cli("", dir).exit_code == 1);
  CHECK(run_cli("run --no-such-flag", dir).exit_code == 1);
  CHECK(run_cli("--help", dir).exit_code == 0);
  fs::remove_all(dir);
}
