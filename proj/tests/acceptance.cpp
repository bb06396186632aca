// Acceptance driver: criteria 1-8 in process, then criterion 9 (the same suite through the
// CLI must produce byte-identical artifacts). Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hyperspec/verify.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace hyperspec;

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : HYPERSPEC_CLI_PATH;
  const fs::path root = fs::temp_directory_path() / "hyperspec-acceptance";
  const fs::path dir_a = root / "in-process";
  const fs::path dir_b = root / "cli";
  fs::remove_all(root);
  fs::create_directories(root);

  SuiteOptions options;
  options.seed = 7;
  std::vector<CriterionResult> results;
  bool all_pass = true;
  for (int id : parse_suite("all")) {
    CriterionResult r = run_criterion(id, options);
    std::cout << format_result_line(r) << std::endl;
    all_pass = all_pass && r.pass();
    results.push_back(std::move(r));
  }
  write_suite_artifacts(results, options, dir_a);

  const auto start = std::chrono::steady_clock::now();
  const std::string cmd = "\"" + cli + "\" verify --suite all --seed 7 --out \"" + dir_b.string() + "\" >\"" +
                          (root / "cli.log").string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  // The CLI additionally writes manifest.json (its command echo); every suite artifact must match.
  std::vector<std::string> diffs;
  for (const auto& d : compare_directories(dir_a, dir_b)) {
    if (!(d == "manifest.json" && !fs::exists(dir_a / d))) diffs.push_back(d);
  }
  bool manifest_ok = false;
  try {
    std::ifstream in(dir_b / "manifest.json");
    manifest_ok = in && nlohmann::json::parse(in).contains("version");
  } catch (const std::exception&) {
    manifest_ok = false;
  }
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir_a)) files += e.is_regular_file();
  const bool pass9 = status == 0 && diffs.empty() && files > 0 && manifest_ok;
  std::ostringstream line;
  line << (pass9 ? "PASS" : "FAIL") << " [criterion 9] Reproducibility: " << files
       << " artifacts from the in-process run and the CLI run (seed 7) ";
  if (diffs.empty()) {
    line << "are byte-identical";
  } else {
    line << "differ in";
    for (const auto& d : diffs) line << ' ' << d;
  }
  line << (manifest_ok ? "; CLI manifest ok" : "; CLI manifest missing or invalid");
  if (status != 0) line << "; CLI exit status " << status;
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.1f s)", seconds);
  line << buf;
  std::cout << line.str() << std::endl;
  all_pass = all_pass && pass9;
  return all_pass ? 0 : 1;
}
