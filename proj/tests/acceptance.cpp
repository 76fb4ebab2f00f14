#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "contacton/action.hpp"
#include "contacton/calculus.hpp"
#include "contacton/chord.hpp"
#include "contacton/diagnostics.hpp"
#include "contacton/harness.hpp"
#include "contacton/solver.hpp"

using namespace contacton;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<PhasePoint> unit_box(int count, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<PhasePoint> pts;
  for (int k = 0; k < count; ++k) {
    PhasePoint x(n);
    for (int a = 0; a < 2 * n + 1; ++a) x.raw()[a] = U(rng);
    pts.push_back(x);
  }
  return pts;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- 1 ----------------------------------------------------------------------
Verdict calculus_identities() {
  const auto t0 = std::chrono::steady_clock::now();
  const char* specs[] = {"reeb", "coord:z", "coord:p1", "coord:q1", "quadratic:1",
                         "quadratic:1 + coord:z"};
  double worst = 0.0;
  for (int n : {1, 2}) {
    const auto pts = unit_box(100, n, 100 + n);
    std::vector<HamiltonianField> Hs;
    for (const char* s : specs) Hs.push_back(ham::parse_hamiltonian(s, n));
    const HamiltonianField one = HamiltonianField::constant(n, 1.0);
    for (const auto& H : Hs)
      for (const auto& x : pts) {
        const double h = H(0.0, x);
        const Eigen::VectorXd dH = H.gradient(0.0, x);
        const double RH = dH[2 * n];
        const TangentVector X = ham::hamiltonian_vf(H, 0.0, x);
        worst = std::max(worst, std::abs(lambda_eval(x, X) + h));
        worst = std::max(worst, std::abs(dH.dot(X.raw()) + h * RH));
        worst = std::max(worst, std::abs(ham::jacobi_bracket(one, H, 0.0, x) + RH));
        for (const auto& G : Hs)
          worst = std::max(worst, std::abs(ham::jacobi_bracket(H, G, 0.0, x) +
                                           ham::jacobi_bracket(G, H, 0.0, x)));
      }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-8 && secs < 1.0,
          "max defect " + fmt("%.3g", worst) + " (< 1e-8), runtime " + fmt("%.3f", secs) +
              " s (< 1 s)"};
}

// --- 2 ----------------------------------------------------------------------
double exponent_law_defect(double step) {
  const auto pts = unit_box(10, 1, 200);
  const std::vector<ham::ContactIsotopy> flows = {
      ham::ContactIsotopy::generated(ham::parse_hamiltonian("coord:z", 1), step),
      ham::ContactIsotopy::generated(ham::parse_hamiltonian("quadratic:1 + coord:z", 1), step)};
  double worst = 0.0;
  for (const auto& x : pts)
    for (const auto& phi : flows) {
      worst = std::max(worst, ham::inverse_exponent_defect(phi, 1.0, x));
      for (const auto& psi : flows) worst = std::max(worst, ham::cocycle_defect(phi, 1.0, psi, 1.0, x));
    }
  return worst;
}

Verdict exponent_laws() {
  const double d1 = exponent_law_defect(1e-3), d2 = exponent_law_defect(5e-4);
  const double ratio = d1 / d2;
  double g_err = 0.0;
  for (const auto& x : unit_box(10, 1, 201)) {
    const auto path = ham::flow(ham::parse_hamiltonian("coord:z", 1), x, 2.0, 2000);
    for (std::size_t k = 0; k < path.size(); ++k)
      g_err = std::max(g_err, std::abs(path.g[k] + path.t[k]));
  }
  const double c1 = exponent_law_defect(1e-2), c2 = exponent_law_defect(5e-3);
  const bool pass = d1 < 1e-6 && ratio >= 8.0 && g_err <= 1e-10;
  return {pass, "defect " + fmt("%.3g", d1) + " at h=1e-3 (< 1e-6), halving ratio " +
                    fmt("%.3g", ratio) + " (>= 8), |g+t| " + fmt("%.2g", g_err) +
                    "; ratio at h=1e-2 is " + fmt("%.3g", c1 / c2) + " (" + fmt("%.2g", c1) +
                    " -> " + fmt("%.2g", c2) + ")"};
}

// --- 3 ----------------------------------------------------------------------
Verdict inverse_product() {
  const auto z = ham::parse_hamiltonian("coord:z", 1);
  const auto psi = ham::ContactIsotopy::generated(z, 1e-2);
  const auto zbar = ham::inverse_hamiltonian(z, psi);
  const auto pts = unit_box(100, 1, 300);
  std::vector<double> err(pts.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < static_cast<long>(pts.size()); ++k) {
    const PhasePoint y = psi.map(1.0, pts[k]);
    const auto back = ham::flow(zbar, y, 1.0, 100);
    err[k] = (back.x.back().raw() - pts[k].raw()).norm();
  }
  double worst = 0.0;
  for (double e : err) worst = std::max(worst, e);

  const auto reeb = ham::parse_hamiltonian("reeb", 1);
  const auto R = ham::ContactIsotopy::generated(reeb, 1e-2);
  const auto K = ham::product_hamiltonian(reeb, R, reeb, R);
  double prod = 0.0;
  for (const auto& x : unit_box(20, 1, 301))
    for (double t : {0.0, 0.5, 1.0}) prod = std::max(prod, std::abs(K(t, x) + 2.0));
  return {worst < 1e-6 && prod == 0.0,
          "round trip " + fmt("%.3g", worst) + " (< 1e-6), |K + 2| " + fmt("%.3g", prod) +
              " (exact)"};
}

// --- 4 ----------------------------------------------------------------------
Verdict reeb_rescaling() {
  const std::vector<ScalarField> fs = {
      ScalarField::constant(1, 1.0), ScalarField::constant(1, 2.0),
      ScalarField("exp(z)", 1, [](double, const PhasePoint& x) { return std::exp(x.z()); })};
  double norm = 0.0, contraction = 0.0;
  std::mt19937_64 rng(400);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (const auto& f : fs)
    for (const auto& x : unit_box(50, 1, 401)) {
      const TangentVector R = ham::reeb_of_rescaled(f, x);
      const double fx = f(0.0, x);
      const double lam_R = R.z() - x.p(0) * R.q(0);
      norm = std::max(norm, std::abs(fx * lam_R - 1.0));
      // df by central differences, independent of the field's own gradient
      Eigen::Vector3d df;
      for (int a = 0; a < 3; ++a) {
        PhasePoint xp = x, xm = x;
        xp.raw()[a] += 1e-6;
        xm.raw()[a] -= 1e-6;
        df[a] = (f(0.0, xp) - f(0.0, xm)) / 2e-6;
      }
      for (int k = 0; k < 4; ++k) {
        // v in xi: a D/dq + b d/dp
        const double a = k == 0 ? 1.0 : U(rng), b = k == 1 ? 1.0 : (k == 0 ? 0.0 : U(rng));
        const Eigen::Vector3d v(a, b, x.p(0) * a);
        const double lam_v = v[2] - x.p(0) * v[0];
        const double dlam = R.q(0) * v[1] - R.p(0) * v[0];
        const double val = df.dot(R.raw()) * lam_v - df.dot(v) * lam_R + fx * dlam;
        contraction = std::max(contraction, std::abs(val));
      }
    }
  return {norm < 1e-12 && contraction < 1e-6,
          "|(f lambda)(R) - 1| " + fmt("%.3g", norm) + ", max |d(f lambda)(R, v)| " +
              fmt("%.3g", contraction) + " (< 1e-6)"};
}

// --- 5 ----------------------------------------------------------------------
Verdict action_variation() {
  double traj = 0.0;
  const char* specs[] = {"coord:z", "quadratic:1 + coord:z", "quadratic:1 + coord:p1",
                         "reeb + coord:q1"};
  for (const char* s : specs)
    for (const auto& x : unit_box(3, 1, 500)) {
      const auto H = ham::parse_hamiltonian(s, 1);
      traj = std::max(traj, std::abs(action::action(H, ham::flow(H, x, 1.0, 1000))));
    }

  std::mt19937_64 rng(501);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto H = ham::parse_hamiltonian("quadratic:1 + coord:z + coord:p1", 1);
  double var = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    double c[10];
    for (double& v : c) v = U(rng);
    const auto path = sample_path(
        [&](double t) {
          PhasePoint x(1);
          x.q(0) = c[0] + c[1] * std::sin(3 * t);
          x.p(0) = c[2] + c[3] * t * t;
          x.z() = c[4] * std::cos(2 * t) + c[9] * t;
          return x;
        },
        0.0, 1.0, 200);
    action::VariationField eta;
    for (std::size_t k = 0; k < path.size(); ++k) {
      const double t = path.t[k];
      TangentVector e(1);
      e.q(0) = c[5] * std::cos(t);
      e.p(0) = c[6] * t;
      e.z() = c[7] + c[8] * t * t;
      eta.eta.push_back(e);
    }
    const double s = 1e-4;
    ContactPath plus = path, minus = path;
    for (std::size_t k = 0; k < path.size(); ++k) {
      plus.x[k] = path.x[k] + s * eta.eta[k];
      minus.x[k] = path.x[k] + (-s) * eta.eta[k];
    }
    const double fd = (action::action(H, plus) - action::action(H, minus)) / (2 * s);
    var = std::max(var, std::abs(action::first_variation(H, path, eta) - fd));
  }
  return {traj < 1e-6 && var < 1e-5, "trajectory action " + fmt("%.3g", traj) +
                                          " (< 1e-6), first variation vs FD " +
                                          fmt("%.3g", var) + " (< 1e-5)"};
}

// --- 6 ----------------------------------------------------------------------
Verdict lifting() {
  const char* specs[] = {"coord:z", "quadratic:1 + coord:z", "quadratic:1 + coord:p1",
                         "coord:q1 + coord:p1", "reeb + quadratic:0.5"};
  const std::function<double(double)> drifts[] = {
      [](double t) { return 0.8 * std::sin(5 * t); },
      [](double t) { return 0.5 * t * t + 0.3 * std::cos(3 * t); }};
  double before = 1e300, after = 0.0;
  for (const char* s : specs)
    for (const auto& b : drifts) {
      const auto H = ham::parse_hamiltonian(s, 1);
      PhasePoint x(1);
      x.q(0) = 0.6;
      x.p(0) = -0.3;
      x.z() = 0.2;
      ContactPath path = ham::flow(H, x, 1.0, 399);
      path.g.clear();
      for (std::size_t k = 0; k < path.size(); ++k) path.x[k].z() += b(path.t[k]);
      before = std::min(before, action::hamilton_residual(H, path).full());
      const auto lift = action::reeb_translate_lift(H, path);
      after = std::max(after,
                       action::hamilton_residual(lift.lifted_hamiltonian, lift.lifted_path).full());
    }
  return {before > 0.1 && after < 5e-4, "10 paths, residual before >= " + fmt("%.3g", before) +
                                            ", after <= " + fmt("%.3g", after) + " (< 5e-4)"};
}

// --- 7 ----------------------------------------------------------------------
Verdict chords() {
  const auto reeb = ham::parse_hamiltonian("reeb", 1);
  const auto L0 = LegendrianJetGraph::zero_section(1);
  const Eigen::VectorXd seed = Eigen::VectorXd::Constant(1, 0.3);
  double dur = 0.0, margin = 0.0, act = 0.0, cond = 0.0;
  bool nondeg = true;
  for (double c : {0.3, 0.7, 2.0}) {
    const auto ch = action::find_chord(reeb, L0, LegendrianJetGraph::quadratic(1, c, 0.0), seed, 1.0);
    dur = std::max(dur, std::abs(ch.t1 - c));
    margin = std::max(margin, std::abs(ch.margin - 1.0));
    const auto L1 = LegendrianJetGraph::quadratic(1, c, 0.2);
    const auto pc = action::find_chord(reeb, L0, L1, seed, 1.0);
    const auto rep = action::chord_report(pc, reeb, L0, L1);
    nondeg = nondeg && rep.nondegenerate && std::isfinite(rep.condition);
    act = std::max(act, std::abs(rep.action));
    cond = std::max(cond, rep.condition);
  }
  return {dur < 1e-9 && margin < 1e-12 && nondeg && act < 1e-6,
          "|t1 - c| " + fmt("%.3g", dur) + " (< 1e-9), |margin - 1| " + fmt("%.2g", margin) +
              ", perturbed cond " + fmt("%.3g", cond) + ", action " + fmt("%.3g", act) +
              " (< 1e-6)"};
}

// --- 8 ----------------------------------------------------------------------
Verdict exact_strip() {
  const double c = 0.7;
  const auto w = instanton::reeb_chord_strip(instanton::StripGrid::make(0.0, 2.0, 64, 32),
                                             Eigen::VectorXd::Zero(1), c);
  const auto r = instanton::residual(w);
  const auto inv = instanton::asymptotic_invariants(w);
  const double worst = std::max({r.zeta_l2(), r.curl_l2(), r.zeta_linf(), r.curl_linf(),
                                 instanton::pi_energy(w), inv.Q_max, std::abs(inv.T_mean - c),
                                 inv.T_spread});
  return {worst < 1e-10, "max of residuals, E_pi, |Q|, |T - c| = " + fmt("%.3g", worst) +
                             " (< 1e-10)"};
}

// --- 9-11 --------------------------------------------------------------------
struct Level {
  double h;
  instanton::AsymptoticInvariants inv;
  instanton::IdentityChecks ids;
};

std::vector<Level> sector_levels() {
  const instanton::Sector s{1.0, 1.0};
  std::vector<Level> out;
  for (int k = 0; k < 3; ++k) {
    const auto g = instanton::StripGrid::make(0.0, 2.0, 64 << k, 32 << k);
    const auto res = instanton::solve_jet1(s.lower(), s.upper(), g,
                                           [&](double tau, double t) { return s(tau, t); });
    out.push_back({std::max(g.h_tau(), g.h_t()), instanton::asymptotic_invariants(res.w),
                   instanton::identity_checks(res.w)});
  }
  return out;
}

double order_of(const std::vector<Level>& L, const std::function<double(const Level&)>& f) {
  std::vector<double> h, e;
  for (const auto& l : L) {
    h.push_back(l.h);
    e.push_back(f(l));
  }
  return instanton::fitted_order(h, e);
}

bool in_window(double p) { return std::abs(p - 2.0) <= 0.3; }

Verdict charge(const std::vector<Level>& L) {
  const double pq = order_of(L, [](const Level& l) { return l.inv.Q_max; });
  const double pt = order_of(L, [](const Level& l) { return l.inv.T_spread; });
  const double q = L.back().inv.Q_max, t = L.back().inv.T_spread;
  return {in_window(pq) && in_window(pt) && q < 1e-3 && t < 1e-3,
          "max|Q| order " + fmt("%.3f", pq) + ", finest " + fmt("%.3g", q) +
              "; T spread order " + fmt("%.3f", pt) + ", finest " + fmt("%.3g", t) +
              " (2 +- 0.3, < 1e-3)"};
}

Verdict identities(const std::vector<Level>& L) {
  const double pe = order_of(L, [](const Level& l) { return l.ids.energy; });
  const double pa = order_of(L, [](const Level& l) { return l.ids.alpha; });
  const double pn = order_of(L, [](const Level& l) { return l.ids.neumann; });
  const double pi = order_of(L, [](const Level& l) { return l.ids.im_alpha_edge; });
  return {in_window(pe) && in_window(pa) && in_window(pn) && in_window(pi),
          "slopes: energy " + fmt("%.3f", pe) + ", dbar alpha " + fmt("%.3f", pa) +
              ", neumann " + fmt("%.3f", pn) + ", Im alpha " + fmt("%.3f", pi) +
              " (2 +- 0.3)"};
}

Verdict decay(const std::vector<Level>& L) {
  const double beta = std::atan(1.0);
  const auto& d = L.back().inv.decay;
  const double rel = d.has_rate() ? std::abs(d.delta - beta) / beta : INFINITY;
  return {rel < 0.05, "delta " + fmt("%.5f", d.delta) + " vs beta " + fmt("%.5f", beta) +
                          ", rel " + fmt("%.3g", rel) + " (< 0.05)"};
}

// --- 12 ----------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  const fs::path root = fs::temp_directory_path() / "contacton_acceptance";
  fs::remove_all(root);
  std::string differing;
  for (const auto& [name, what] : harness::list_scenarios()) {
    (void)what;
    const auto cfg = harness::ScenarioConfig::from_json({{"scenario", name}, {"seed", 12}});
    harness::run(cfg, (root / (name + "_a")).string());
    harness::run(cfg, (root / (name + "_b")).string());
    if (slurp(root / (name + "_a") / "report.json") != slurp(root / (name + "_b") / "report.json"))
      differing += " " + name;
  }
  fs::remove_all(root);
  return {differing.empty(), differing.empty() ? "6 scenarios, reports bit-identical"
                                               : "differing:" + differing};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> expect_fail;
  app.add_option("--expect-fail", expect_fail, "criteria whose failure is documented")
      ->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  std::vector<Level> levels;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"calculus identity suite", calculus_identities},
      {"conformal-exponent laws", exponent_laws},
      {"inverse/product hamiltonians", inverse_product},
      {"reeb rescaling", reeb_rescaling},
      {"action and first variation", action_variation},
      {"reeb-translation lift", lifting},
      {"chord finder", chords},
      {"exact-strip regression", exact_strip},
      {"charge vanishing",
       [&] {
         levels = sector_levels();
         return charge(levels);
       }},
      {"identity slopes", [&] { return identities(levels); }},
      {"exponential decay", [&] { return decay(levels); }},
      {"determinism", determinism},
  };

  std::set<int> failed;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const int id = static_cast<int>(k) + 1;
    if (!v.pass) failed.insert(id);
    std::printf("criterion %2d %s  %s: %s\n", id, v.pass ? "PASS" : "FAIL",
                criteria[k].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %zu/%zu criteria pass\n", criteria.size() - failed.size(),
              criteria.size());
  if (app.count("--expect-fail")) {
    const std::set<int> expected(expect_fail.begin(), expect_fail.end());
    if (failed != expected) {
      std::printf("failing set differs from the expected set\n");
      return 1;
    }
    return 0;
  }
  return failed.empty() ? 0 : 1;
}
