#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "contacton/hamiltonian.hpp"

namespace contacton {

// Uniformly sampled path with an optional conformal-exponent channel g.
struct ContactPath {
  std::vector<double> t;
  std::vector<PhasePoint> x;
  std::vector<double> g;  // empty when no exponent channel is carried

  std::size_t size() const { return x.size(); }
  int dim() const { return x.empty() ? 0 : x.front().dim(); }
  double step() const { return t.size() < 2 ? 0.0 : t[1] - t[0]; }
  bool has_exponent() const { return g.size() == x.size() && !g.empty(); }
  // Throws if the grid is not monotone-uniform or dimensions disagree.
  void validate() const;
};

// Builds a path by sampling a curve on a uniform grid of `samples` points.
ContactPath sample_path(const std::function<PhasePoint(double)>& curve, double t0,
                        double t1, int samples);

namespace ham {

// Classical RK4 on (x' = X_H(t,x), g' = -R_lambda[H](t,x)) from t0 to
// t0 + duration.  Throws BlowUpError on non-finite state.
ContactPath flow(const HamiltonianField& H, const PhasePoint& x0, double duration,
                 int steps, double t0 = 0.0);

// State, differential and conformal exponent (with its gradient) of a contact
// isotopy at (t, x).
struct IsotopyJet {
  PhasePoint image;
  Eigen::MatrixXd jacobian;
  double exponent = 0.0;
  Eigen::VectorXd exponent_gradient;
};

// A contact isotopy psi_t with psi_t^* lambda = e^{g_t} lambda.  Maps are
// black boxes; the differential is analytic when a jet function is registered
// (variational equations for generated isotopies) and central differences
// otherwise.
class ContactIsotopy {
 public:
  using MapFn = std::function<PhasePoint(double, const PhasePoint&)>;
  using ExpFn = std::function<double(double, const PhasePoint&)>;
  using JetFn = std::function<IsotopyJet(double, const PhasePoint&)>;

  ContactIsotopy(std::string label, int n, MapFn map, ExpFn exponent, JetFn jet = {});

  // Isotopy integrated from a Hamiltonian with fixed step h (steps = ceil(t/h)).
  static ContactIsotopy generated(const HamiltonianField& H, double step);
  static ContactIsotopy identity(int n);

  PhasePoint map(double t, const PhasePoint& x) const;
  double exponent(double t, const PhasePoint& x) const;
  IsotopyJet jet(double t, const PhasePoint& x) const;

  // psi_t^{-1}(x) by Newton on the flow map seeded at x.
  PhasePoint inverse_map(double t, const PhasePoint& x, double tol = 1e-13,
                         int max_iter = 40) const;

  const std::string& label() const { return label_; }
  int dim() const { return n_; }
  const std::optional<HamiltonianField>& generator() const { return generator_; }
  double step() const { return step_; }

 private:
  std::string label_;
  int n_;
  MapFn map_;
  ExpFn exponent_;
  JetFn jet_;
  std::optional<HamiltonianField> generator_;
  double step_ = 0.0;
};

// Conformal exponent of a map from its differential: log lambda(Dphi R).
double exponent_from_jacobian(const PhasePoint& image, const Eigen::MatrixXd& jacobian);

}  // namespace ham
}  // namespace contacton
