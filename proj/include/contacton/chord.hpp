#pragma once

#include <string>
#include <vector>

#include "contacton/action.hpp"
#include "contacton/legendrian.hpp"
#include "contacton/report.hpp"

namespace contacton::action {

struct ChordOptions {
  double tolerance = 1e-9;     // on the endpoint defect norm
  int max_iterations = 50;
  int max_halvings = 8;
  int steps = 400;             // RK4 steps on the rescaled interval s in [0, 1]
  double fd_step = 1e-6;       // central-difference step for the shooting Jacobian
  double t1_floor = 1e-8;      // durations at or below this are degenerate
  double t0 = 0.0;             // start time of the Hamiltonian clock
};

struct Chord {
  Eigen::VectorXd q0;
  PhasePoint x0;
  double t1 = 0.0;
  ContactPath path;            // sampled in physical time t0 + s t1
  Eigen::VectorXd defect;
  double margin = 0.0;         // min_t |H(t, gamma(t))|
  double condition = 0.0;      // sigma_max / sigma_min of the shooting Jacobian
  int iterations = 0;
};

// Shoots from legendrian_point(L0, q0) along X_H for duration t1 and drives
// legendrian_defect(L1, gamma(t1)) to zero over (q0, t1).  Throws SolverError
// on divergence or when t1 collapses to <= t1_floor.
Chord find_chord(const HamiltonianField& H, const LegendrianJetGraph& L0,
                 const LegendrianJetGraph& L1, const Eigen::VectorXd& q0_seed,
                 double t1_seed, const ChordOptions& opts = {});

// Endpoint defect of the shooting map at (q0, t1) with the given step count.
Eigen::VectorXd shooting_defect(const HamiltonianField& H, const LegendrianJetGraph& L0,
                                const LegendrianJetGraph& L1, const Eigen::VectorXd& q0,
                                double t1, int steps, double t0 = 0.0);

struct ChordThresholds {
  double defect = 1e-9;
  double action = 1e-6;
  double margin = 1e-6;        // transversal when margin exceeds this
  double condition = 1e8;      // nondegenerate when cond is finite and below this
  double reverify = 1e-7;      // half-step re-integration defect
  bool require_nondegenerate = false;
};

struct ChordReport {
  double duration = 0.0;
  double action = 0.0;
  double defect = 0.0;
  double reverify_defect = 0.0;
  double margin = 0.0;
  double condition = 0.0;
  bool transversal = false;
  bool nondegenerate = false;
  std::vector<Check> checks;
  bool pass() const { return all_pass(checks); }
  std::string flags() const;
};

ChordReport chord_report(const Chord& chord, const HamiltonianField& H,
                         const LegendrianJetGraph& L0, const LegendrianJetGraph& L1,
                         const ChordThresholds& th = {}, const ChordOptions& opts = {});

struct ChordSeed {
  Eigen::VectorXd q0;
  double t1 = 1.0;
};

struct ChordRecord {
  ChordSeed seed;
  bool found = false;
  std::string error;
  ChordReport report;
};

// Independent searches over the seeds, in parallel; results in seed order.
std::vector<ChordRecord> chord_sweep(const HamiltonianField& H, const LegendrianJetGraph& L0,
                                     const LegendrianJetGraph& L1,
                                     const std::vector<ChordSeed>& seeds,
                                     const ChordOptions& opts = {},
                                     const ChordThresholds& th = {});

}  // namespace contacton::action
