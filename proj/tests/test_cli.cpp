#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string binary() {
  const char* p = std::getenv("STABLEFISHER_BIN");
  REQUIRE_MESSAGE(p != nullptr, "STABLEFISHER_BIN must point at the CLI binary");
  return p;
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("stablefisher_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  // shield the tests from an output-dir override in the ambient environment
  const int rc = std::system(
      ("env -u STABLEFISHER_OUTDIR " + binary() + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("converge on an exact stable source is a fixed point") {
  const fs::path dir = fresh_dir("converge");
  write_file(dir / "run.cfg",
             "command = converge\n"
             "source = stable(1,0,1,0)\n"
             "ns = 1,2,4\n"
             "grid = -64,0.015625,8192\n");
  const int rc = run_cli("converge --config " + (dir / "run.cfg").string() + " --out " + dir.string());
  CHECK(rc == 0);
  const auto rows = parse_csv(read_file(dir / "convergence.csv"));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0][0] == "n");
  CHECK(rows[0][2] == "rel_fisher");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][2]) <= 1e-8);
    CHECK(rows[i][7] == "0");  // not failed
  }
}

TEST_CASE("repeated runs are byte-identical") {
  const fs::path dir = fresh_dir("determinism");
  write_file(dir / "run.cfg",
             "command = converge\n"
             "source = cauchy\n"
             "ns = 2,4\n"
             "grid = -64,0.015625,8192\n");
  const std::string cmd = "converge --config " + (dir / "run.cfg").string();
  CHECK(run_cli(cmd + " --out " + (dir / "a").string()) == 0);
  CHECK(run_cli(cmd + " --out " + (dir / "b").string()) == 0);
  CHECK(read_file(dir / "a" / "convergence.csv") == read_file(dir / "b" / "convergence.csv"));
  CHECK(!read_file(dir / "a" / "convergence.csv").empty());
}

TEST_CASE("verify on the gaussian source is green") {
  const fs::path dir = fresh_dir("verify");
  write_file(dir / "run.cfg", "command = verify\nsource = gaussian\n");
  const int rc = run_cli("verify --config " + (dir / "run.cfg").string() + " --out " + dir.string());
  CHECK(rc == 0);
  const auto rows = parse_csv(read_file(dir / "report.csv"));
  REQUIRE(rows.size() > 1);
  REQUIRE(rows[0][4] == "satisfied");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][4] == "1");
}

TEST_CASE("density command writes the score column") {
  const fs::path dir = fresh_dir("density");
  write_file(dir / "run.cfg",
             "command = density\nlaw = 1,0,1,0\ngrid = -32,0.015625,4096\n");
  CHECK(run_cli("density --config " + (dir / "run.cfg").string() + " --out " + dir.string()) == 0);
  const auto rows = parse_csv(read_file(dir / "density.csv"));
  REQUIRE(rows.size() == 4097);
  CHECK(rows[0] == std::vector<std::string>{"x", "value", "derivative", "score"});
}

TEST_CASE("config errors exit with status 2") {
  const fs::path dir = fresh_dir("badcfg");
  write_file(dir / "unknown.cfg", "command = verify\nnonsense = 1\n");
  CHECK(run_cli("verify --config " + (dir / "unknown.cfg").string()) == 2);
  write_file(dir / "nolaw.cfg", "command = density\n");
  CHECK(run_cli("density --config " + (dir / "nolaw.cfg").string()) == 2);
  CHECK(run_cli("verify --config " + (dir / "missing.cfg").string()) == 2);
}

TEST_CASE("output directory env override wins") {
  const fs::path dir = fresh_dir("envdir");
  const fs::path envout = dir / "env_out";
  write_file(dir / "run.cfg",
             "command = density\nlaw = 2,0,0.5,0\ngrid = -16,0.03125,1024\nout = " +
                 (dir / "cfg_out").string() + "\n");
  const std::string cmd = "STABLEFISHER_OUTDIR=" + envout.string() + " " + binary() +
                          " density --config " + (dir / "run.cfg").string() + " > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(fs::exists(envout / "density.csv"));
  CHECK(!fs::exists(dir / "cfg_out" / "density.csv"));
}

TEST_CASE("threads do not change the bytes") {
  const fs::path dir = fresh_dir("threads");
  write_file(dir / "run.cfg",
             "command = converge\n"
             "source = cauchy\n"
             "ns = 2,4,8\n"
             "grid = -64,0.015625,8192\n");
  const std::string cmd = "converge --config " + (dir / "run.cfg").string();
  CHECK(run_cli(cmd + " --out " + (dir / "serial").string()) == 0);
  CHECK(run_cli(cmd + " --threads 3 --out " + (dir / "parallel").string()) == 0);
  CHECK(read_file(dir / "serial" / "convergence.csv") ==
        read_file(dir / "parallel" / "convergence.csv"));
}
