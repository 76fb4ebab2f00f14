#pragma once

#include <functional>
#include <string>
#include <vector>

#include "contacton/legendrian.hpp"

namespace contacton::instanton {

// Uniform grid on [tau_min, tau_max] x [0, 1]; nodes (i, j) with
// 0 <= i <= n_tau, 0 <= j <= n_t.
struct StripGrid {
  double tau_min = 0.0;
  double tau_max = 1.0;
  int n_tau = 8;
  int n_t = 4;

  static StripGrid make(double tau_min, double tau_max, int n_tau, int n_t);
  void validate() const;

  double h_tau() const { return (tau_max - tau_min) / n_tau; }
  double h_t() const { return 1.0 / n_t; }
  double tau(int i) const { return i == n_tau ? tau_max : tau_min + i * h_tau(); }
  double t(int j) const { return j == n_t ? 1.0 : j * h_t(); }
  int nodes() const { return (n_tau + 1) * (n_t + 1); }
  int cells() const { return n_tau * n_t; }
  int node(int i, int j) const { return i * (n_t + 1) + j; }
  int cell(int i, int j) const { return i * n_t + j; }
};

// Closure at tau_max.  The tau_min column is always held at its data.
enum class FarField { Dirichlet, ZeroTauDerivative };
std::string to_string(FarField f);
FarField far_field_from_string(const std::string& s);

// Map from the strip grid to R^{2n+1}.  Nodes on the t = 0 and t = 1 edges
// are stored through their chart coordinate q and always reconstruct as
// legendrian_point(L0 or L1, q).
class StripMap {
 public:
  using NodeFn = std::function<PhasePoint(double tau, double t)>;

  StripMap() = default;
  StripMap(StripGrid grid, int n, LegendrianJetGraph lower, LegendrianJetGraph upper,
           FarField far_field = FarField::Dirichlet);

  // Samples f at every node; t-edge nodes keep only the q part of f.
  static StripMap from_function(StripGrid grid, int n, LegendrianJetGraph lower,
                                LegendrianJetGraph upper, FarField far_field,
                                const NodeFn& f);

  const StripGrid& grid() const { return grid_; }
  int dim() const { return n_; }
  int width() const { return 2 * n_ + 1; }
  const LegendrianJetGraph& lower() const { return lower_; }
  const LegendrianJetGraph& upper() const { return upper_; }
  FarField far_field() const { return far_field_; }

  bool on_t_edge(int j) const { return j == 0 || j == grid_.n_t; }
  PhasePoint node(int i, int j) const;
  const double* raw(int i, int j) const { return data_.data() + grid_.node(i, j) * width(); }
  double* raw(int i, int j) { return data_.data() + grid_.node(i, j) * width(); }

  // t-edge nodes are projected onto their Legendrian through x.q().
  void set_node(int i, int j, const PhasePoint& x);
  void set_chart(int i, int j, const Eigen::VectorXd& q);
  // Copies column n_tau - 1 into n_tau under the zero-tau-derivative closure.
  void sync_far_field();
  // Overwrites column i with a sampled curve t -> x(t).
  void set_column(int i, const std::function<PhasePoint(double)>& f);

  // max over t-edge nodes of |legendrian_defect|; zero up to round-off.
  double boundary_defect() const;

  const std::vector<double>& data() const { return data_; }

 private:
  StripGrid grid_;
  int n_ = 0;
  LegendrianJetGraph lower_, upper_;
  FarField far_field_ = FarField::Dirichlet;
  std::vector<double> data_;
};

// E(A -> B) = int lambda over the straight segment = dz - pbar . dq.
double edge_lambda(const double* a, const double* b, int n);

// Per-cell xi residual zeta = 1/2 (pi d_tau w + J pi d_t w) in the
// (D/dq, d/dp) frame, with box differences on each cell; per-interior-node
// curl of (lambda(d_t w), -lambda(d_tau w)) from the four incident edge
// integrals.  Norms are recomputed on every call.
struct ResidualField {
  StripGrid grid;
  int n = 0;
  std::vector<double> zeta;  // cells x 2n, components (q..., p...)
  std::vector<double> curl;  // per node; zero on boundary nodes

  double zeta_l2() const;
  double zeta_linf() const;
  double curl_l2() const;
  double curl_linf() const;
  double l2() const;
};

ResidualField residual(const StripMap& w);
// Same arithmetic without OpenMP; kept as the reference for the parallel kernel.
ResidualField residual_serial(const StripMap& w);

// F(w) = sum_cells |zeta|^2 h_tau h_t + sum_nodes curl^2 h_tau h_t.
double objective(const ResidualField& r);

// Reeb-chord strip w(tau, t) = (q0, 0, c t) between j1(0) and j1(c).
StripMap reeb_chord_strip(const StripGrid& grid, const Eigen::VectorXd& q0, double c);

// n = 1 sector solution v = r exp(-beta (tau + i t)), beta = arctan(a),
// z = q p / 2, between j1(0) and j1(-a q^2 / 2).
struct Sector {
  double a = 1.0;
  double r = 1.0;
  double beta() const;
  LegendrianJetGraph lower() const;
  LegendrianJetGraph upper() const;
  PhasePoint operator()(double tau, double t) const;
  // Closed-form diagnostics on [tau_min, tau_max] x [0, 1].
  double pi_energy(double tau_min, double tau_max) const;
  double action(double tau_max) const;  // T(s), independent of s
};

StripMap sector_strip(const StripGrid& grid, const Sector& s);

}  // namespace contacton::instanton
