#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "contacton/harness.hpp"

namespace fs = std::filesystem;
using contacton::harness::RunReport;
using contacton::harness::ScenarioConfig;

namespace {

int run_one(const std::string& path, const std::string& out_override, bool many, bool verbose) {
  try {
    std::ifstream in(path);
    if (!in) throw contacton::Error("cannot read " + path);
    const ScenarioConfig cfg = ScenarioConfig::from_json(nlohmann::json::parse(in));
    std::string out = out_override.empty() ? cfg.out_dir : out_override;
    if (many) out = (fs::path(out) / fs::path(path).stem()).string();
    const RunReport rep = contacton::harness::run(cfg, out);

    std::printf("%s [%s]: %s (%.2f s) -> %s\n", path.c_str(), rep.scenario.c_str(),
                rep.pass() ? "PASS" : "FAIL", rep.seconds, out.c_str());
    for (const auto& c : rep.checks)
      if (verbose || !c.pass)
        std::printf("  %-4s %-44s value=%.6g tol=%.3g\n", c.pass ? "ok" : "FAIL", c.name.c_str(),
                    c.value, c.tolerance);
    if (rep.diagnostics.contains("error"))
      std::printf("  error: %s\n", rep.diagnostics["error"].get<std::string>().c_str());
    std::ofstream timing(fs::path(out) / "timing.json");
    timing << nlohmann::json{{"seconds", rep.seconds}}.dump() << '\n';
    return rep.pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s: %s\n", path.c_str(), e.what());
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contact instanton experiments"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  std::string out;
  int jobs = 1;
  bool verbose = false;
  auto* run = app.add_subcommand("run", "run scenario configs");
  run->add_option("config", configs, "scenario config JSON files")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "output directory (overrides out_dir)");
  run->add_option("--jobs", jobs, "configs run in parallel processes")->check(CLI::PositiveNumber);
  run->add_flag("--verbose", verbose, "print every check");

  auto* list = app.add_subcommand("list-scenarios", "list registered scenarios");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& [name, what] : contacton::harness::list_scenarios())
      std::printf("%-18s %s\n", name.c_str(), what.c_str());
    return 0;
  }

  const bool many = configs.size() > 1;
  if (jobs <= 1 || !many) {
    int status = 0;
    for (const auto& c : configs) status = std::max(status, run_one(c, out, many, verbose));
    return status;
  }

  // Fan out over processes; each child owns a disjoint output directory.
  const int threads = std::max(1, omp_get_max_threads() / jobs);
  int status = 0;
  std::size_t next = 0;
  int running = 0;
  std::fflush(stdout);
  while (next < configs.size() || running > 0) {
    while (running < jobs && next < configs.size()) {
      const pid_t pid = fork();
      if (pid < 0) {
        std::perror("fork");
        return 2;
      }
      if (pid == 0) {
        omp_set_num_threads(threads);
        const int rc = run_one(configs[next], out, true, verbose);
        std::fflush(stdout);
        _exit(rc);
      }
      ++next;
      ++running;
    }
    int ws = 0;
    if (wait(&ws) > 0) {
      --running;
      const int rc = WIFEXITED(ws) ? WEXITSTATUS(ws) : 2;
      status = std::max(status, rc);
    }
  }
  return status;
}
