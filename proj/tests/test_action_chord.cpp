#include <doctest.h>

#include <cmath>
#include <random>

#include "contacton/action.hpp"
#include "contacton/chord.hpp"
#include "contacton/flow.hpp"
#include "contacton/hamiltonian.hpp"

using namespace contacton;
using namespace contacton::action;

namespace {

ContactPath reeb_segment(double rate, int samples) {
  return sample_path(
      [rate](double t) {
        PhasePoint x(1);
        x.q(0) = 0.4;
        x.p(0) = -0.2;
        x.z() = rate * t;
        return x;
      },
      0.0, 1.0, samples);
}

ContactPath with_drift(ContactPath path, double amp, double freq) {
  for (std::size_t k = 0; k < path.size(); ++k)
    path.x[k].z() += amp * std::sin(freq * path.t[k]);
  path.g.clear();
  return path;
}

Eigen::VectorXd vec1(double v) { return Eigen::VectorXd::Constant(1, v); }

}  // namespace

TEST_CASE("action closed forms") {
  const auto reeb = ham::parse_hamiltonian("reeb", 1);
  CHECK(std::abs(action::action(reeb, reeb_segment(1.0, 50))) < 1e-14);
  const auto still = reeb_segment(0.0, 20);
  CHECK(action::action(HamiltonianField::constant(1, 2.5), still) == doctest::Approx(-2.5));
  const auto A = cumulative_action(reeb, reeb_segment(2.0, 11));
  CHECK(A.front() == 0.0);
  CHECK(A.back() == doctest::Approx(-1.0));
  CHECK(A[5] == doctest::Approx(-0.5));
}

TEST_CASE("action vanishes on trajectories") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (const char* spec : {"coord:z", "quadratic:1 + coord:z", "quadratic:1 + coord:p1"}) {
    PhasePoint x(1);
    for (int a = 0; a < 3; ++a) x.raw()[a] = U(rng);
    const auto path = ham::flow(ham::parse_hamiltonian(spec, 1), x, 1.0, 400);
    CHECK(std::abs(action::action(ham::parse_hamiltonian(spec, 1), path)) < 1e-6);
  }
}

TEST_CASE("action quadrature error is second order") {
  // rotation-like curve with H = q^2/2: closed-form integral by hand
  const auto H = ham::parse_hamiltonian("quadratic:1", 1);
  auto curve = [](double t) {
    PhasePoint x(1);
    x.q(0) = std::cos(t);
    x.p(0) = std::sin(t);
    x.z() = 0.0;
    return x;
  };
  // -int(-p dq) - int q^2/2 = -int sin^2 - int cos^2 / 2 over [0, 1]
  const double exact = -(0.5 - std::sin(2.0) / 4.0) - 0.5 * (0.5 + std::sin(2.0) / 4.0);
  const double e1 = std::abs(action::action(H, sample_path(curve, 0.0, 1.0, 21)) - exact);
  const double e2 = std::abs(action::action(H, sample_path(curve, 0.0, 1.0, 41)) - exact);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("variation decomposition reconstructs eta") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto path = reeb_segment(1.0, 30);
  VariationField v;
  for (std::size_t k = 0; k < path.size(); ++k) {
    TangentVector e(1);
    for (int a = 0; a < 3; ++a) e.raw()[a] = U(rng);
    v.eta.push_back(e);
  }
  const auto a = v.reeb_part(path);
  const auto xi = v.xi_part(path);
  for (std::size_t k = 0; k < path.size(); ++k)
    CHECK((xi[k] + a[k] * reeb(path.x[k]) - v.eta[k]).raw().norm() < 1e-15);
  VariationField short_field{{TangentVector(1)}};
  CHECK_THROWS_AS(short_field.reeb_part(path), DimensionError);
}

TEST_CASE("first variation is the derivative of the discrete action") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto H = ham::parse_hamiltonian("quadratic:1 + coord:z + coord:p1", 1);
  for (int trial = 0; trial < 10; ++trial) {
    double c[9];
    for (double& v : c) v = U(rng);
    const auto path = sample_path(
        [&](double t) {
          PhasePoint x(1);
          x.q(0) = c[0] + c[1] * std::sin(3 * t);
          x.p(0) = c[2] + c[3] * t * t;
          x.z() = c[4] * std::cos(2 * t);
          return x;
        },
        0.0, 1.0, 200);
    VariationField eta;
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
    CHECK(std::abs(first_variation(H, path, eta) - fd) < 1e-5);
  }
  VariationField zero{std::vector<TangentVector>(11, TangentVector(1))};
  CHECK(first_variation(H, reeb_segment(1.0, 11), zero) == 0.0);
}

TEST_CASE("first variation vanishes on trajectories with compensating ends") {
  const auto H = ham::parse_hamiltonian("quadratic:1 + coord:p1", 1);
  PhasePoint x(1);
  x.q(0) = 0.3;
  x.p(0) = -0.5;
  const auto path = ham::flow(H, x, 1.0, 400);
  VariationField eta;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const double t = path.t[k];
    TangentVector e(1);
    e.q(0) = std::sin(M_PI * t);
    e.p(0) = t * (1 - t);
    eta.eta.push_back(xi_project(path.x[k], e));
  }
  CHECK(std::abs(first_variation(H, path, eta)) < 1e-5);
}

TEST_CASE("hamilton residual") {
  const auto reeb = ham::parse_hamiltonian("reeb", 1);
  auto r = hamilton_residual(reeb, reeb_segment(1.7, 40));
  CHECK(r.pi_residual < 1e-13);
  CHECK(r.reeb_residual == doctest::Approx(0.7));
  r = hamilton_residual(reeb, reeb_segment(0.0, 40));
  CHECK(r.pi_residual < 1e-13);
  CHECK(r.reeb_residual == doctest::Approx(1.0));
  CHECK_THROWS_AS(hamilton_residual(reeb, reeb_segment(1.0, 2)), DomainError);

  const auto H = ham::parse_hamiltonian("quadratic:1 + coord:z", 1);
  PhasePoint x(1);
  x.q(0) = 0.5;
  x.p(0) = 0.5;
  auto err = [&](int steps) { return hamilton_residual(H, ham::flow(H, x, 1.0, steps)).full(); };
  CHECK(err(50) / err(100) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("reeb translation lift") {
  const auto reeb = ham::parse_hamiltonian("reeb", 1);
  const auto lift = reeb_translate_lift(reeb, reeb_segment(2.0, 101));
  for (std::size_t k = 0; k < lift.rho.size(); ++k) {
    CHECK(lift.rho[k] == doctest::Approx(lift.lifted_path.t[k]).epsilon(1e-12));
    CHECK(lift.lifted_path.x[k].z() == doctest::Approx(lift.lifted_path.t[k]).epsilon(1e-12));
  }
  CHECK(hamilton_residual(lift.lifted_hamiltonian, lift.lifted_path).full() < 1e-12);

  PhasePoint x(1);
  x.q(0) = 0.2;
  x.p(0) = 0.7;
  x.z() = -0.1;
  const auto H = ham::parse_hamiltonian("quadratic:1 + coord:p1", 1);
  const auto traj = ham::flow(H, x, 1.0, 200);
  const auto same = reeb_translate_lift(H, traj);
  for (double r : same.rho) CHECK(std::abs(r) < 1e-5);

  CHECK_THROWS_AS(reeb_translate_lift(H, reeb_segment(1.0, 50)), DomainError);
}

TEST_CASE("lift of drifting pi-critical paths") {
  for (const char* spec : {"coord:z", "quadratic:1 + coord:z", "quadratic:1 + coord:p1"}) {
    const auto H = ham::parse_hamiltonian(spec, 1);
    PhasePoint x(1);
    x.q(0) = 0.6;
    x.p(0) = -0.3;
    x.z() = 0.2;
    const auto path = with_drift(ham::flow(H, x, 1.0, 399), 0.8, 5.0);
    const auto before = hamilton_residual(H, path);
    CHECK(before.reeb_residual > 1.0);
    const auto lift = reeb_translate_lift(H, path);
    const auto after = hamilton_residual(lift.lifted_hamiltonian, lift.lifted_path);
    CAPTURE(spec);
    CHECK(after.pi_residual <= before.pi_residual + 1e-12);
    CHECK(after.full() < 5e-4);

    // compare with a direct integration of the lifted Hamiltonian
    const auto direct = ham::flow(lift.lifted_hamiltonian, lift.lifted_path.x.front(), 1.0, 399);
    CHECK((direct.x.back().raw() - lift.lifted_path.x.back().raw()).norm() < 1e-3);
  }
}

TEST_CASE("reeb chords between translated zero sections") {
  const auto reeb = ham::parse_hamiltonian("reeb", 1);
  const auto L0 = LegendrianJetGraph::zero_section(1);
  for (double c : {0.3, 0.7, 2.0}) {
    const auto L1 = LegendrianJetGraph::quadratic(1, c, 0.0);
    const Chord ch = find_chord(reeb, L0, L1, vec1(0.25), 1.0);
    CHECK(std::abs(ch.t1 - c) < 1e-9);
    CHECK(ch.q0[0] == doctest::Approx(0.25));
    CHECK(ch.margin == doctest::Approx(1.0));
    CHECK(ch.defect.norm() < 1e-9);
    CHECK((ch.x0.raw() - Eigen::Vector3d(0.25, 0.0, 0.0)).norm() == 0.0);
    const ChordReport rep = chord_report(ch, reeb, L0, L1);
    CHECK(rep.pass());
    CHECK(rep.transversal);
    CHECK(std::abs(rep.action) < 1e-9);
    // every q is a chord start here, so the shooting map is singular
    CHECK_FALSE(rep.nondegenerate);
    CHECK(rep.flags().find("degenerate") != std::string::npos);
  }
}

TEST_CASE("perturbed target gives a nondegenerate chord") {
  const auto reeb = ham::parse_hamiltonian("reeb", 1);
  const auto L0 = LegendrianJetGraph::zero_section(1);
  const auto L1 = LegendrianJetGraph::quadratic(1, 0.7, 0.2);
  const Chord ch = find_chord(reeb, L0, L1, vec1(0.3), 1.0);
  CHECK(std::abs(ch.q0[0]) < 1e-9);
  CHECK(ch.t1 == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(std::isfinite(ch.condition));
  const ChordReport rep = chord_report(ch, reeb, L0, L1);
  CHECK(rep.nondegenerate);
  CHECK(std::abs(rep.action) < 1e-6);
  CHECK(rep.reverify_defect < 1e-7);
  CHECK(rep.pass());
}

TEST_CASE("chords with a nonconstant hamiltonian") {
  const auto H = ham::parse_hamiltonian("reeb + quadratic:0.5", 1);
  const auto L0 = LegendrianJetGraph::zero_section(1);
  const auto L1 = LegendrianJetGraph::quadratic(1, 0.5, 0.3);
  const Chord ch = find_chord(H, L0, L1, vec1(0.1), 0.5);
  const ChordReport rep = chord_report(ch, H, L0, L1);
  CHECK(rep.pass());
  CHECK(std::abs(rep.action) < 1e-6);
  // samplewise trajectory identity along the accepted chord
  CHECK(hamilton_residual(H, ch.path).reeb_residual < 1e-4);
}

TEST_CASE("chord rejection and flags") {
  const auto reeb = ham::parse_hamiltonian("reeb", 1);
  const auto L0 = LegendrianJetGraph::zero_section(1);
  CHECK_THROWS_AS(find_chord(reeb, L0, L0, vec1(0.0), 0.5), SolverError);

  // H = z vanishes on z = 0, so the chord touches xi there
  const auto z = ham::parse_hamiltonian("coord:z + const:-0.5", 1);
  const auto L1 = LegendrianJetGraph::quadratic(1, 0.2, 0.0);
  const Chord ch = find_chord(z, L0, L1, vec1(0.0), 0.5);
  const ChordReport rep = chord_report(ch, z, L0, L1);
  CHECK(rep.transversal);
  ChordThresholds strict;
  strict.margin = 1.0;
  const ChordReport flagged = chord_report(ch, z, L0, L1, strict);
  CHECK_FALSE(flagged.transversal);
  CHECK_FALSE(flagged.pass());
  CHECK(flagged.flags().find("transversal") != std::string::npos);
}

TEST_CASE("chord sweep keeps seed order and matches single searches") {
  const auto reeb = ham::parse_hamiltonian("reeb", 1);
  const auto L0 = LegendrianJetGraph::zero_section(1);
  const auto L1 = LegendrianJetGraph::quadratic(1, 0.7, 0.2);
  std::vector<ChordSeed> seeds;
  for (int k = 0; k < 6; ++k) seeds.push_back({vec1(-0.5 + 0.2 * k), 1.0});
  seeds.push_back({vec1(5e3), 1.0});
  const auto recs = chord_sweep(reeb, L0, L1, seeds);
  REQUIRE(recs.size() == seeds.size());
  for (std::size_t k = 0; k + 1 < seeds.size(); ++k) {
    CHECK(recs[k].seed.q0[0] == seeds[k].q0[0]);
    REQUIRE(recs[k].found);
    const Chord ch = find_chord(reeb, L0, L1, seeds[k].q0, seeds[k].t1);
    CHECK(recs[k].report.duration == ch.t1);
  }
  CHECK_FALSE(recs.back().found);
  CHECK_FALSE(recs.back().error.empty());
}

TEST_CASE("shooting defect") {
  const auto reeb = ham::parse_hamiltonian("reeb", 1);
  const auto L0 = LegendrianJetGraph::zero_section(1);
  const auto L1 = LegendrianJetGraph::quadratic(1, 0.7, 0.0);
  const Eigen::VectorXd d = shooting_defect(reeb, L0, L1, vec1(0.1), 0.5, 100);
  CHECK(d.size() == 2);
  CHECK(d[0] == 0.0);
  CHECK(d[1] == doctest::Approx(-0.2));
}
