#pragma once

#include <string>
#include <vector>

#include "contacton/chord.hpp"
#include "contacton/strip.hpp"

namespace contacton::instanton {

enum class RelaxMethod { GaussNewton, Gradient };
RelaxMethod relax_method_from_string(const std::string& s);

struct RelaxOptions {
  RelaxMethod method = RelaxMethod::GaussNewton;
  double tolerance = 1e-10;   // on |grad F|
  int max_iterations = 200;
  double stagnation = 1e-14;  // minimum F decrease per accepted step
};

struct RelaxResult {
  StripMap w;
  std::vector<double> objective;  // F before the first step and after each step
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  bool stagnated = false;
  std::string warning;
};

// Minimises F over interior nodes and t-edge chart coordinates.  The tau_min
// column, and the tau_max column under the Dirichlet closure, are held fixed.
RelaxResult relax(const StripMap& w0, const RelaxOptions& opts = {});

struct Jet1Options {
  FarField far_field = FarField::Dirichlet;
  double tolerance = 1e-12;  // Gauss-Newton step size for the v stage
  int max_iterations = 20;
};

struct Jet1Result {
  StripMap w;
  int v_iterations = 0;
  double v_residual = 0.0;  // least-squares residual of the CR stage
};

// Stage one solves the box Cauchy-Riemann system for v = (q, p) in the least
// squares sense with t-edges on the graphs of grad S_i; stage two solves the
// five-point Poisson equation for z that annihilates the discrete curl, with
// z = S_i(q) on t-edges.  edge_data supplies the tau-edge columns (only the
// tau_min column under the zero-tau-derivative closure).  Throws SolverError
// when the Poisson system cannot be factored.
Jet1Result solve_jet1(const LegendrianJetGraph& L0, const LegendrianJetGraph& L1,
                      const StripGrid& grid, const StripMap::NodeFn& edge_data,
                      const Jet1Options& opts = {});

// Sets the tau_max column to the Reeb chord t -> x0 + t t1 R.
void apply_chord_far_field(StripMap& w, const action::Chord& chord);

// Reeb chord from L0 to L1 for the far-field closure (H = -1 shooting).
action::Chord far_field_chord(const LegendrianJetGraph& L0, const LegendrianJetGraph& L1,
                              const Eigen::VectorXd& q_seed, double t_seed);

}  // namespace contacton::instanton
