#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include "json.hpp"
#include <sstream>
#include <string>

#include "hyperspec/verify.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hyperspec-cli-test-" + name);
  fs::remove_all(p);
  return p;
}

// Runs the CLI with stdout and stderr captured into files; returns the exit code.
int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + HYPERSPEC_CLI_PATH + "\" " + args + " >\"" + log.string() + ".out\" 2>\"" +
                          log.string() + ".err\"";
  const int status = std::system(cmd.c_str());
#ifdef WEXITSTATUS
  return WEXITSTATUS(status);
#else
  return status;
#endif
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("spectrum writes a manifest and classifies Bergman") {
  const fs::path out = scratch("spectrum");
  REQUIRE(run("spectrum --kernel bergman --grid 0:5:0.5 --out \"" + out.string() + "\"", out.string()) == 0);
  REQUIRE(fs::exists(out / "manifest.json"));
  const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(m.contains("version"));
  CHECK(m["command"] == "spectrum");
  CHECK(slurp(out / "manifest.json").find("NotHyperuniform") != std::string::npos);
}

TEST_CASE("nv output is byte-identical across runs and worker counts") {
  const fs::path a = scratch("nv-a"), b = scratch("nv-b");
  const std::string base = "nv --process poisson --space hyperbolic-disk --radii 0.5:2:0.5 --replicas 200 --seed 4 ";
  REQUIRE(run(base + "--workers 1 --out \"" + a.string() + "\"", a.string()) == 0);
  REQUIRE(run(base + "--workers 4 --out \"" + b.string() + "\"", b.string()) == 0);
  CHECK(hyperspec::compare_directories(a, b).empty());
}

TEST_CASE("sample output is reproducible") {
  const fs::path a = scratch("sample-a"), b = scratch("sample-b");
  const std::string base = "sample --process gaf --radius 2 --seed 11 --stream 3 ";
  REQUIRE(run(base + "--out \"" + a.string() + "\"", a.string()) == 0);
  REQUIRE(run(base + "--out \"" + b.string() + "\"", b.string()) == 0);
  CHECK(hyperspec::compare_directories(a, b).empty());
}

TEST_CASE("output directory falls back to the environment variable") {
  const fs::path out = scratch("env");
  const fs::path log = scratch("env-log");
#ifdef _WIN32
  const std::string prefix = "set HYPERSPEC_OUT_DIR=" + out.string() + " && ";
#else
  const std::string prefix = "HYPERSPEC_OUT_DIR=\"" + out.string() + "\" ";
#endif
  const std::string cmd = prefix + "\"" + HYPERSPEC_CLI_PATH + "\" heat --kernel poisson --space euclidean-2 >\"" +
                          log.string() + "\" 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("invalid input exits with code 2 and a JSON error") {
  const fs::path log = scratch("bad");
  CHECK(run("variance --kernel poisson --space euclidean-9 --profile ball --radii 1", log) == 2);
  const auto err = nlohmann::json::parse(slurp(log.string() + ".err"));
  CHECK(err.contains("error"));
  CHECK(run("spectrum --kernel weyl-heisenberg --lambda 3.14159 --out \"" + scratch("nondpp").string() + "\"", log) == 2);
  CHECK(run("nv --process ginibre --radii 1:3:1 --replicas 1", log) == 2);
  CHECK(run("no-such-command", log) == 2);
}

TEST_CASE("verify prints one line per requested criterion") {
  const fs::path out = scratch("verify");
  REQUIRE(run("verify --suite 2,functional-equation --out \"" + out.string() + "\"", out.string()) == 0);
  const std::string stdout_text = slurp(out.string() + ".out");
  CHECK(stdout_text.find("PASS [criterion 2]") != std::string::npos);
  CHECK(fs::exists(out / "summary.json"));
}
