#include "contacton/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "contacton/calculus.hpp"
#include "contacton/chord.hpp"
#include "contacton/diagnostics.hpp"
#include "contacton/io.hpp"
#include "contacton/solver.hpp"

namespace contacton::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::pair<std::string, std::string>> kScenarios = {
    {"calculus-suite", "contact Hamiltonian identities and conformal-exponent laws"},
    {"chord-search", "Newton shooting for Hamiltonian chords over a seed sweep"},
    {"reeb-strip", "exact Reeb-chord strip regression"},
    {"jet1-solve", "one-jet strip solve with residual, invariant and identity diagnostics"},
    {"relax", "least-squares relaxation of a perturbed strip"},
    {"refinement-study", "order of accuracy of the one-jet sector diagnostics"},
};

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(std::string("config key '") + key + "': " + e.what());
  }
}

json check_json(const Check& c) {
  return {{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}};
}

Check order_check(const std::string& name, double order, double target, double window) {
  return Check{name + " order", order, window,
               std::isfinite(order) && std::abs(order - target) <= window};
}

Eigen::VectorXd q0_of(const ScenarioConfig& c) {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(c.n);
  for (int k = 0; k < c.n && k < static_cast<int>(c.q0.size()); ++k) q[k] = c.q0[k];
  return q;
}

instanton::StripGrid grid_of(const ScenarioConfig& c, int level = 0) {
  return instanton::StripGrid::make(c.tau_min, c.tau_max, c.n_tau << level, c.n_t << level);
}

instanton::DecayOptions decay_of(const ScenarioConfig& c) {
  instanton::DecayOptions d;
  d.window_fraction = c.decay_window;
  d.min_slices = c.decay_min_slices;
  return d;
}

double grid_h(const instanton::StripGrid& g) { return std::max(g.h_tau(), g.h_t()); }

struct Context {
  const ScenarioConfig& cfg;
  fs::path dir;
  RunReport& rep;

  std::string path(const std::string& name) {
    rep.artifacts.push_back(name);
    return (dir / name).string();
  }
  void add(Check c) { rep.checks.push_back(std::move(c)); }
};

json invariants_json(const instanton::AsymptoticInvariants& inv) {
  return {{"T_mean", inv.T_mean},   {"T_spread", inv.T_spread}, {"Q_mean", inv.Q_mean},
          {"Q_spread", inv.Q_spread}, {"Q_max", inv.Q_max},
          {"decay",
           {{"delta", inv.decay.exact ? json("inf") : json(inv.decay.delta)},
            {"C", inv.decay.C},
            {"fit_residual", inv.decay.fit_residual},
            {"exact", inv.decay.exact},
            {"non_exponential", inv.decay.non_exponential}}}};
}

void write_slices(Context& ctx, const instanton::AsymptoticInvariants& inv) {
  io::Series s{{"s", "T", "Q", "slice_norm"}, {}};
  for (std::size_t k = 0; k < inv.s.size(); ++k)
    s.add({inv.s[k], inv.T[k], inv.Q[k], inv.slice_norm[k]});
  io::emit_plot_data(s, ctx.path("slices.csv"));
  if (!inv.decay.tau.empty()) {
    io::Series d{{"tau", "log_norm"}, {}};
    for (std::size_t k = 0; k < inv.decay.tau.size(); ++k)
      d.add({inv.decay.tau[k], inv.decay.log_norm[k]});
    io::emit_plot_data(d, ctx.path("decay.csv"));
  }
}

// --- scenarios -------------------------------------------------------------

void calculus_suite(Context& ctx) {
  const ScenarioConfig& c = ctx.cfg;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> U(-c.sample_box, c.sample_box);
  std::vector<PhasePoint> pts;
  for (int k = 0; k < c.samples; ++k) {
    PhasePoint x(c.n);
    for (int a = 0; a < 2 * c.n + 1; ++a) x.raw()[a] = U(rng);
    pts.push_back(x);
  }
  ham::IdentitySuiteOptions o;
  o.analytic_tolerance = c.analytic_tolerance;
  o.flow_tolerance = c.flow_tolerance;
  o.flow_step = c.flow_step;
  o.t_phi = o.t_psi = c.flow_time;
  o.flow_laws = c.flow_laws;
  o.flow_law_points = c.flow_law_points;
  const HamiltonianField G = ham::parse_hamiltonian(c.partner, c.n);

  io::Series s{{"index", "lambda", "dissipation", "bracket_one", "reeb_commutator",
                "antisymmetry", "cocycle", "inverse", "conjugation"},
               {}};
  json per = json::array();
  for (std::size_t k = 0; k < c.hamiltonians.size(); ++k) {
    const HamiltonianField H = ham::parse_hamiltonian(c.hamiltonians[k], c.n);
    const ham::IdentityReport r = ham::identity_suite(H, G, pts, o);
    for (const Check& ch : r.checks)
      ctx.add(Check{"H=" + c.hamiltonians[k] + ": " + ch.name, ch.value, ch.tolerance, ch.pass});
    s.add({static_cast<double>(k), r.lambda_defect, r.dissipation_defect, r.bracket_one_defect,
           r.reeb_commutator_defect, r.antisymmetry_defect, r.cocycle_defect, r.inverse_defect,
           r.conjugation_defect});
    per.push_back({{"index", k}, {"hamiltonian", c.hamiltonians[k]}});
  }
  ctx.rep.diagnostics["hamiltonians"] = per;
  io::emit_plot_data(s, ctx.path("identities.csv"));
}

void chord_search(Context& ctx) {
  const ScenarioConfig& c = ctx.cfg;
  const HamiltonianField H = ham::parse_hamiltonian(c.hamiltonian, c.n);
  const auto L0 = LegendrianJetGraph::quadratic(c.n, c.lower_c, c.lower_a);
  const auto L1 = LegendrianJetGraph::quadratic(c.n, c.upper_c, c.upper_a);
  action::ChordOptions o;
  o.tolerance = c.chord_tolerance;
  o.max_iterations = c.chord_max_iterations;
  o.steps = c.chord_steps;
  action::ChordThresholds th;
  th.defect = c.chord_tolerance;
  th.action = c.action_tolerance;
  th.margin = c.margin_min;
  th.condition = c.cond_max;
  th.reverify = c.reverify_tolerance;
  th.require_nondegenerate = c.require_nondegenerate;

  std::vector<action::ChordSeed> seeds;
  for (int k = 0; k < c.seed_count; ++k) {
    const double v = c.seed_count == 1 ? c.seed_q_min
                                       : c.seed_q_min + (c.seed_q_max - c.seed_q_min) * k /
                                                            (c.seed_count - 1);
    seeds.push_back({Eigen::VectorXd::Constant(c.n, v), c.seed_t1});
  }
  const auto recs = action::chord_sweep(H, L0, L1, seeds, o, th);
  int found = 0;
  json rows = json::array();
  for (std::size_t k = 0; k < recs.size(); ++k) {
    const auto& r = recs[k];
    if (!r.found) {
      rows.push_back({{"seed", k}, {"found", false}, {"error", r.error}});
      continue;
    }
    ++found;
    const std::string tag = "seed " + std::to_string(k) + ": ";
    for (const Check& ch : r.report.checks)
      ctx.add(Check{tag + ch.name, ch.value, ch.tolerance, ch.pass});
    if (c.expected_duration >= 0.0)
      ctx.add(Check::below(tag + "|t1 - expected|",
                           std::abs(r.report.duration - c.expected_duration),
                           c.duration_tolerance));
    rows.push_back({{"seed", k},
                    {"found", true},
                    {"duration", r.report.duration},
                    {"action", r.report.action},
                    {"margin", r.report.margin},
                    {"condition", std::isfinite(r.report.condition) ? json(r.report.condition)
                                                                    : json("inf")},
                    {"flags", r.report.flags()}});
  }
  ctx.add(Check{"chords found", static_cast<double>(found), 1.0, found >= 1});
  ctx.rep.diagnostics["chords"] = rows;
  io::write_chord_table(recs, ctx.path("chords.csv"));
}

void strip_common(Context& ctx, const instanton::StripMap& w,
                  const instanton::AsymptoticInvariants& inv) {
  write_slices(ctx, inv);
  if (ctx.cfg.write_solution) io::write_solution(w, ctx.path("solution.txt"));
}

void reeb_strip(Context& ctx) {
  const ScenarioConfig& c = ctx.cfg;
  const auto w = instanton::reeb_chord_strip(grid_of(c), q0_of(c), c.c);
  const auto r = instanton::residual(w);
  const double E = instanton::pi_energy(w);
  const auto inv = instanton::asymptotic_invariants(w, decay_of(c));
  const double tol = c.strip_tolerance;
  ctx.add(Check::below("zeta L2", r.zeta_l2(), tol));
  ctx.add(Check::below("zeta Linf", r.zeta_linf(), tol));
  ctx.add(Check::below("curl L2", r.curl_l2(), tol));
  ctx.add(Check::below("curl Linf", r.curl_linf(), tol));
  ctx.add(Check::below("E_pi", E, tol));
  ctx.add(Check::below("max |Q(s)|", inv.Q_max, tol));
  ctx.add(Check::below("|T - c|", std::abs(inv.T_mean - c.c), tol));
  ctx.add(Check::below("T spread", inv.T_spread, tol));
  ctx.add(Check::below("boundary defect", w.boundary_defect(), tol));
  ctx.add(Check{"decay exact", 0.0, 0.0, inv.decay.exact});
  ctx.rep.diagnostics["invariants"] = invariants_json(inv);
  ctx.rep.diagnostics["pi_energy"] = E;
  strip_common(ctx, w, inv);
}

struct SectorLevel {
  double h = 0.0;
  double error = 0.0;
  instanton::ResidualField residual;
  double energy = 0.0, energy_exact = 0.0;
  instanton::AsymptoticInvariants inv;
  instanton::IdentityChecks ids;
  instanton::StripMap w;
};

SectorLevel solve_sector(const ScenarioConfig& c, const instanton::StripGrid& g) {
  const instanton::Sector s{c.sector_a, c.sector_r};
  instanton::Jet1Options o;
  o.far_field = instanton::far_field_from_string(c.far_field);
  auto res = instanton::solve_jet1(s.lower(), s.upper(), g,
                                   [&](double tau, double t) { return s(tau, t); }, o);
  SectorLevel L;
  L.w = std::move(res.w);
  L.h = grid_h(g);
  for (int i = 0; i <= g.n_tau; ++i)
    for (int j = 0; j <= g.n_t; ++j)
      L.error = std::max(L.error, (L.w.node(i, j).raw() - s(g.tau(i), g.t(j)).raw()).norm());
  L.residual = instanton::residual(L.w);
  L.energy = instanton::pi_energy(L.w);
  L.energy_exact = s.pi_energy(g.tau_min, g.tau_max);
  L.inv = instanton::asymptotic_invariants(L.w, decay_of(c));
  L.ids = instanton::identity_checks(L.w, {c.identity_scale});
  return L;
}

void jet1_solve(Context& ctx) {
  const ScenarioConfig& c = ctx.cfg;
  const auto g = grid_of(c);
  const double h2 = grid_h(g) * grid_h(g);
  if (c.jet1_case == "reeb") {
    const Eigen::VectorXd q0 = q0_of(c);
    const int n = c.n;
    instanton::Jet1Options o;
    o.far_field = instanton::far_field_from_string(c.far_field);
    const auto res = instanton::solve_jet1(
        LegendrianJetGraph::zero_section(n), LegendrianJetGraph::quadratic(n, c.c, 0.0), g,
        [&](double, double t) { return PhasePoint(q0, Eigen::VectorXd::Zero(n), c.c * t); }, o);
    const auto r = instanton::residual(res.w);
    const auto inv = instanton::asymptotic_invariants(res.w, decay_of(c));
    ctx.add(Check::below("zeta L2", r.zeta_l2(), c.strip_tolerance));
    ctx.add(Check::below("curl L2", r.curl_l2(), c.strip_tolerance));
    ctx.add(Check::below("max |Q(s)|", inv.Q_max, c.strip_tolerance));
    ctx.add(Check::below("|T - c|", std::abs(inv.T_mean - c.c), c.strip_tolerance));
    ctx.add(Check::below("boundary defect", res.w.boundary_defect(), c.strip_tolerance));
    ctx.rep.diagnostics["invariants"] = invariants_json(inv);
    strip_common(ctx, res.w, inv);
    return;
  }
  if (c.jet1_case != "sector") throw Error("unknown jet1_case '" + c.jet1_case + "'");
  const instanton::Sector s{c.sector_a, c.sector_r};
  const SectorLevel L = solve_sector(c, g);
  const double tol = c.identity_scale * h2;
  ctx.add(Check::below("solution error", L.error, tol));
  ctx.add(Check::below("zeta L2", L.residual.zeta_l2(), tol));
  ctx.add(Check::below("curl L2", L.residual.curl_l2(), tol));
  ctx.add(Check::below("boundary defect", L.w.boundary_defect(), c.strip_tolerance));
  ctx.add(Check::below("|E_pi - exact|", std::abs(L.energy - L.energy_exact), tol));
  ctx.add(Check::below("max |Q(s)|", L.inv.Q_max, c.charge_scale * h2));
  ctx.add(Check::below("T spread", L.inv.T_spread, c.charge_scale * h2));
  for (const Check& ch : L.ids.checks) ctx.add(ch);
  if (s.beta() > 0.0) {
    const double rel = L.inv.decay.has_rate() ? std::abs(L.inv.decay.delta - s.beta()) / s.beta()
                                              : std::numeric_limits<double>::infinity();
    ctx.add(Check::below("|delta - beta| / beta", rel, c.decay_tolerance));
  }
  ctx.rep.diagnostics["invariants"] = invariants_json(L.inv);
  ctx.rep.diagnostics["beta"] = s.beta();
  ctx.rep.diagnostics["pi_energy"] = L.energy;
  ctx.rep.diagnostics["pi_energy_exact"] = L.energy_exact;
  ctx.rep.diagnostics["T_exact"] = s.action(g.tau_max);
  ctx.rep.diagnostics["identities"] = {{"energy", L.ids.energy},
                                       {"dbar_alpha", L.ids.alpha},
                                       {"neumann", L.ids.neumann},
                                       {"im_alpha_edges", L.ids.im_alpha_edge}};
  strip_common(ctx, L.w, L.inv);
}

void relax_scenario(Context& ctx) {
  const ScenarioConfig& c = ctx.cfg;
  const auto g = grid_of(c);
  const Eigen::VectorXd q0 = q0_of(c);
  const auto exact = instanton::reeb_chord_strip(g, q0, c.c);
  instanton::StripMap w0 = instanton::StripMap::from_function(
      g, c.n, exact.lower(), exact.upper(), instanton::far_field_from_string(c.far_field),
      [&](double, double t) { return PhasePoint(q0, Eigen::VectorXd::Zero(c.n), c.c * t); });

  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 1; i < g.n_tau; ++i)
    for (int j = 0; j <= g.n_t; ++j) {
      PhasePoint x = w0.node(i, j);
      for (int a = 0; a < x.raw().size(); ++a) x.raw()[a] += c.noise * U(rng);
      w0.set_node(i, j, x);
    }
  if (w0.far_field() == instanton::FarField::Dirichlet) {
    const auto chord = instanton::far_field_chord(w0.lower(), w0.upper(), q0, 1.0);
    instanton::apply_chord_far_field(w0, chord);
    ctx.rep.diagnostics["far_field_chord"] = {{"duration", chord.t1},
                                              {"margin", chord.margin}};
  }
  w0.sync_far_field();

  instanton::RelaxOptions o;
  o.method = instanton::relax_method_from_string(c.relax_method);
  o.tolerance = c.relax_tolerance;
  o.max_iterations = c.max_iterations;
  o.stagnation = c.stagnation;
  const auto res = instanton::relax(w0, o);
  const auto r = instanton::residual(res.w);
  double err = 0.0;
  for (int i = 0; i <= g.n_tau; ++i)
    for (int j = 0; j <= g.n_t; ++j)
      err = std::max(err, (res.w.node(i, j).raw() - exact.node(i, j).raw()).norm());
  const auto inv = instanton::asymptotic_invariants(res.w, decay_of(c));

  ctx.add(Check{"relax converged", res.gradient_norm, c.relax_tolerance, res.converged});
  ctx.add(Check::below("final residual L2", r.l2(), c.relax_residual_tolerance));
  ctx.add(Check::below("distance to exact strip", err, c.relax_error_tolerance));
  ctx.add(Check::below("boundary defect", res.w.boundary_defect(), c.strip_tolerance));
  ctx.rep.diagnostics["iterations"] = res.iterations;
  ctx.rep.diagnostics["stagnated"] = res.stagnated;
  ctx.rep.diagnostics["warning"] = res.warning;
  ctx.rep.diagnostics["invariants"] = invariants_json(inv);

  io::Series s{{"iteration", "objective"}, {}};
  for (std::size_t k = 0; k < res.objective.size(); ++k)
    s.add({static_cast<double>(k), res.objective[k]});
  io::emit_plot_data(s, ctx.path("objective.csv"));
  strip_common(ctx, res.w, inv);
}

void refinement_study(Context& ctx) {
  const ScenarioConfig& c = ctx.cfg;
  const instanton::Sector s{c.sector_a, c.sector_r};
  std::vector<double> h, q, tsp, en, al, ne, im, er;
  io::Series series{{"h", "Q_max", "T_spread", "energy_identity", "dbar_alpha", "neumann",
                     "im_alpha_edges", "solution_error", "delta"},
                    {}};
  SectorLevel last;
  for (int level = 0; level < c.refinement_levels; ++level) {
    SectorLevel L = solve_sector(c, grid_of(c, level));
    h.push_back(L.h);
    q.push_back(L.inv.Q_max);
    tsp.push_back(L.inv.T_spread);
    en.push_back(L.ids.energy);
    al.push_back(L.ids.alpha);
    ne.push_back(L.ids.neumann);
    im.push_back(L.ids.im_alpha_edge);
    er.push_back(L.error);
    series.add({L.h, L.inv.Q_max, L.inv.T_spread, L.ids.energy, L.ids.alpha, L.ids.neumann,
                L.ids.im_alpha_edge, L.error, L.inv.decay.delta});
    last = std::move(L);
  }
  const double tgt = c.order_target, win = c.order_window;
  json orders;
  auto order = [&](const std::string& name, const std::vector<double>& e) {
    const double p = instanton::fitted_order(h, e);
    orders[name] = p;
    ctx.add(order_check(name, p, tgt, win));
  };
  order("max |Q(s)|", q);
  ctx.add(Check::below("max |Q(s)| finest", q.back(), c.finest_bound));
  order("T spread", tsp);
  ctx.add(Check::below("T spread finest", tsp.back(), c.finest_bound));
  order("energy identity", en);
  order("dbar alpha", al);
  order("neumann", ne);
  order("im alpha edges", im);
  order("solution error", er);
  const double rel = last.inv.decay.has_rate()
                         ? std::abs(last.inv.decay.delta - s.beta()) / s.beta()
                         : std::numeric_limits<double>::infinity();
  ctx.add(Check::below("|delta - beta| / beta finest", rel, c.decay_tolerance));
  ctx.rep.diagnostics["orders"] = orders;
  ctx.rep.diagnostics["beta"] = s.beta();
  ctx.rep.diagnostics["delta_finest"] = last.inv.decay.delta;
  io::emit_plot_data(series, ctx.path("refinement.csv"));
  write_slices(ctx, last.inv);
  if (c.write_solution) io::write_solution(last.w, ctx.path("solution.txt"));
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  if (!j.is_object()) throw Error("config must be a JSON object");
  ScenarioConfig c;
  const json known = c.to_json();
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.contains(it.key())) throw Error("unknown config key '" + it.key() + "'");
  if (!j.contains("scenario")) throw Error("config needs a 'scenario' key");
#define CONTACTON_READ(k) read(j, #k, c.k)
  CONTACTON_READ(scenario);
  CONTACTON_READ(n);
  CONTACTON_READ(seed);
  CONTACTON_READ(out_dir);
  CONTACTON_READ(write_solution);
  CONTACTON_READ(hamiltonians);
  CONTACTON_READ(partner);
  CONTACTON_READ(samples);
  CONTACTON_READ(sample_box);
  CONTACTON_READ(flow_laws);
  CONTACTON_READ(flow_law_points);
  CONTACTON_READ(flow_step);
  CONTACTON_READ(flow_time);
  CONTACTON_READ(analytic_tolerance);
  CONTACTON_READ(flow_tolerance);
  CONTACTON_READ(hamiltonian);
  CONTACTON_READ(lower_c);
  CONTACTON_READ(lower_a);
  CONTACTON_READ(upper_c);
  CONTACTON_READ(upper_a);
  CONTACTON_READ(seed_q_min);
  CONTACTON_READ(seed_q_max);
  CONTACTON_READ(seed_count);
  CONTACTON_READ(seed_t1);
  CONTACTON_READ(expected_duration);
  CONTACTON_READ(duration_tolerance);
  CONTACTON_READ(chord_tolerance);
  CONTACTON_READ(chord_max_iterations);
  CONTACTON_READ(chord_steps);
  CONTACTON_READ(action_tolerance);
  CONTACTON_READ(margin_min);
  CONTACTON_READ(cond_max);
  CONTACTON_READ(reverify_tolerance);
  CONTACTON_READ(require_nondegenerate);
  CONTACTON_READ(tau_min);
  CONTACTON_READ(tau_max);
  CONTACTON_READ(n_tau);
  CONTACTON_READ(n_t);
  CONTACTON_READ(far_field);
  CONTACTON_READ(c);
  CONTACTON_READ(q0);
  CONTACTON_READ(strip_tolerance);
  CONTACTON_READ(jet1_case);
  CONTACTON_READ(sector_a);
  CONTACTON_READ(sector_r);
  CONTACTON_READ(noise);
  CONTACTON_READ(relax_method);
  CONTACTON_READ(relax_tolerance);
  CONTACTON_READ(max_iterations);
  CONTACTON_READ(stagnation);
  CONTACTON_READ(relax_residual_tolerance);
  CONTACTON_READ(relax_error_tolerance);
  CONTACTON_READ(charge_scale);
  CONTACTON_READ(identity_scale);
  CONTACTON_READ(decay_tolerance);
  CONTACTON_READ(decay_window);
  CONTACTON_READ(decay_min_slices);
  CONTACTON_READ(refinement_levels);
  CONTACTON_READ(order_target);
  CONTACTON_READ(order_window);
  CONTACTON_READ(finest_bound);
#undef CONTACTON_READ
  c.validate();
  return c;
}

json ScenarioConfig::to_json() const {
  return {{"scenario", scenario},
          {"n", n},
          {"seed", seed},
          {"out_dir", out_dir},
          {"write_solution", write_solution},
          {"hamiltonians", hamiltonians},
          {"partner", partner},
          {"samples", samples},
          {"sample_box", sample_box},
          {"flow_laws", flow_laws},
          {"flow_law_points", flow_law_points},
          {"flow_step", flow_step},
          {"flow_time", flow_time},
          {"analytic_tolerance", analytic_tolerance},
          {"flow_tolerance", flow_tolerance},
          {"hamiltonian", hamiltonian},
          {"lower_c", lower_c},
          {"lower_a", lower_a},
          {"upper_c", upper_c},
          {"upper_a", upper_a},
          {"seed_q_min", seed_q_min},
          {"seed_q_max", seed_q_max},
          {"seed_count", seed_count},
          {"seed_t1", seed_t1},
          {"expected_duration", expected_duration},
          {"duration_tolerance", duration_tolerance},
          {"chord_tolerance", chord_tolerance},
          {"chord_max_iterations", chord_max_iterations},
          {"chord_steps", chord_steps},
          {"action_tolerance", action_tolerance},
          {"margin_min", margin_min},
          {"cond_max", cond_max},
          {"reverify_tolerance", reverify_tolerance},
          {"require_nondegenerate", require_nondegenerate},
          {"tau_min", tau_min},
          {"tau_max", tau_max},
          {"n_tau", n_tau},
          {"n_t", n_t},
          {"far_field", far_field},
          {"c", c},
          {"q0", q0},
          {"strip_tolerance", strip_tolerance},
          {"jet1_case", jet1_case},
          {"sector_a", sector_a},
          {"sector_r", sector_r},
          {"noise", noise},
          {"relax_method", relax_method},
          {"relax_tolerance", relax_tolerance},
          {"max_iterations", max_iterations},
          {"stagnation", stagnation},
          {"relax_residual_tolerance", relax_residual_tolerance},
          {"relax_error_tolerance", relax_error_tolerance},
          {"charge_scale", charge_scale},
          {"identity_scale", identity_scale},
          {"decay_tolerance", decay_tolerance},
          {"decay_window", decay_window},
          {"decay_min_slices", decay_min_slices},
          {"refinement_levels", refinement_levels},
          {"order_target", order_target},
          {"order_window", order_window},
          {"finest_bound", finest_bound}};
}

void ScenarioConfig::validate() const {
  bool known = false;
  for (const auto& s : kScenarios) known = known || s.first == scenario;
  if (!known) throw Error("unknown scenario '" + scenario + "'");
  if (n < 1) throw Error("n must be >= 1");
  for (const auto& h : hamiltonians) ham::parse_hamiltonian(h, n);
  ham::parse_hamiltonian(partner, n);
  ham::parse_hamiltonian(hamiltonian, n);
  instanton::far_field_from_string(far_field);
  instanton::relax_method_from_string(relax_method);
  if (jet1_case != "sector" && jet1_case != "reeb") throw Error("jet1_case must be sector or reeb");
  if ((scenario == "refinement-study" || (scenario == "jet1-solve" && jet1_case == "sector")) &&
      n != 1)
    throw Error("the sector scenario is defined for n = 1");
  const std::pair<const char*, double> positive[] = {
      {"analytic_tolerance", analytic_tolerance}, {"flow_tolerance", flow_tolerance},
      {"flow_step", flow_step},                   {"duration_tolerance", duration_tolerance},
      {"chord_tolerance", chord_tolerance},       {"action_tolerance", action_tolerance},
      {"margin_min", margin_min},                 {"cond_max", cond_max},
      {"reverify_tolerance", reverify_tolerance}, {"strip_tolerance", strip_tolerance},
      {"relax_tolerance", relax_tolerance},       {"stagnation", stagnation},
      {"relax_residual_tolerance", relax_residual_tolerance},
      {"relax_error_tolerance", relax_error_tolerance},
      {"charge_scale", charge_scale},             {"identity_scale", identity_scale},
      {"decay_tolerance", decay_tolerance},       {"order_window", order_window},
      {"finest_bound", finest_bound}};
  for (const auto& [name, v] : positive)
    if (!(v > 0.0)) throw Error(std::string(name) + " must be > 0");
  if (samples < 1 || seed_count < 1 || refinement_levels < 2 || chord_steps < 1)
    throw Error("sample, seed, level and step counts must be positive (levels >= 2)");
  grid_of(*this);
}

json RunReport::to_json() const {
  json checks_json = json::array();
  for (const Check& c : checks) checks_json.push_back(check_json(c));
  return {{"scenario", scenario},     {"config", config},       {"checks", checks_json},
          {"pass", pass()},           {"diagnostics", diagnostics},
          {"artifacts", artifacts}};
}

std::vector<std::pair<std::string, std::string>> list_scenarios() { return kScenarios; }

RunReport run(const ScenarioConfig& config, const std::string& out_dir) {
  config.validate();
  RunReport rep;
  rep.scenario = config.scenario;
  rep.config = config.to_json();
  rep.config.erase("out_dir");
  fs::create_directories(out_dir);
  Context ctx{config, fs::path(out_dir), rep};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (config.scenario == "calculus-suite") calculus_suite(ctx);
    else if (config.scenario == "chord-search") chord_search(ctx);
    else if (config.scenario == "reeb-strip") reeb_strip(ctx);
    else if (config.scenario == "jet1-solve") jet1_solve(ctx);
    else if (config.scenario == "relax") relax_scenario(ctx);
    else if (config.scenario == "refinement-study") refinement_study(ctx);
  } catch (const std::exception& e) {
    rep.checks.push_back(Check{"error", 0.0, 0.0, false});
    rep.diagnostics["error"] = e.what();
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.artifacts.push_back("report.json");
  std::ofstream out(fs::path(out_dir) / "report.json");
  if (!out) throw Error("cannot write report.json in " + out_dir);
  out << rep.to_json().dump(2) << '\n';
  return rep;
}

}  // namespace contacton::harness
