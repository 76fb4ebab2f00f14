#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "contacton/errors.hpp"
#include "contacton/report.hpp"

namespace contacton::harness {

// Flat scenario configuration.  Every key is optional except "scenario";
// defaults below are the documented tolerances.
struct ScenarioConfig {
  std::string scenario;
  int n = 1;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  bool write_solution = true;

  // calculus-suite
  std::vector<std::string> hamiltonians = {"reeb",        "coord:z",
                                           "coord:p1",    "coord:q1",
                                           "quadratic:1", "quadratic:1 + coord:z"};
  std::string partner = "quadratic:1 + coord:z";
  int samples = 100;
  double sample_box = 1.0;
  bool flow_laws = true;
  int flow_law_points = 10;
  double flow_step = 1e-3;
  double flow_time = 1.0;
  double analytic_tolerance = 1e-8;
  double flow_tolerance = 1e-6;

  // chord-search; Legendrians are j1(c + a |q|^2 / 2)
  std::string hamiltonian = "reeb";
  double lower_c = 0.0, lower_a = 0.0;
  double upper_c = 0.7, upper_a = 0.0;
  double seed_q_min = -0.5, seed_q_max = 0.5;
  int seed_count = 5;
  double seed_t1 = 1.0;
  double expected_duration = -1.0;  // checked when >= 0
  double duration_tolerance = 1e-9;
  double chord_tolerance = 1e-9;
  int chord_max_iterations = 50;
  int chord_steps = 400;
  double action_tolerance = 1e-6;
  double margin_min = 1e-6;
  double cond_max = 1e8;
  double reverify_tolerance = 1e-7;
  bool require_nondegenerate = false;

  // strips
  double tau_min = 0.0, tau_max = 2.0;
  int n_tau = 64, n_t = 32;
  std::string far_field = "dirichlet";
  double c = 0.7;
  std::vector<double> q0;  // defaults to zeros
  double strip_tolerance = 1e-10;
  std::string jet1_case = "sector";  // sector | reeb
  double sector_a = 1.0, sector_r = 1.0;
  double noise = 1e-2;
  std::string relax_method = "gauss-newton";
  double relax_tolerance = 1e-8;
  int max_iterations = 200;
  double stagnation = 1e-14;
  double relax_residual_tolerance = 1e-6;
  double relax_error_tolerance = 1e-6;
  double charge_scale = 10.0;    // |Q| and T spread below charge_scale h^2
  double identity_scale = 10.0;  // identity defects below identity_scale h^2
  double decay_tolerance = 0.05; // relative error of the fitted rate
  double decay_window = 0.5;
  int decay_min_slices = 8;

  // refinement-study
  int refinement_levels = 3;
  double order_target = 2.0;
  double order_window = 0.3;
  double finest_bound = 1e-3;

  static ScenarioConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  // Throws Error on an unknown scenario, unresolvable specs or bad tolerances.
  void validate() const;
};

struct RunReport {
  std::string scenario;
  nlohmann::json config;
  std::vector<Check> checks;
  nlohmann::json diagnostics = nlohmann::json::object();
  std::vector<std::string> artifacts;
  double seconds = 0.0;  // kept out of report.json

  bool pass() const { return !checks.empty() && all_pass(checks); }
  nlohmann::json to_json() const;
};

std::vector<std::pair<std::string, std::string>> list_scenarios();

// Runs one scenario, writing report.json and series files into out_dir.
// Errors raised inside the scenario become a failing "error" check.
RunReport run(const ScenarioConfig& config, const std::string& out_dir);

}  // namespace contacton::harness
