#pragma once

#include <functional>
#include <string>

#include "contacton/core.hpp"
#include "contacton/polynomial.hpp"

namespace contacton {

// Legendrian 1-jet graph {(q, dS(q), S(q))} of a C^2 generating function S on
// the chart box |q_i| <= box.  Derivatives fall back to 4th-order central
// differences with step 1e-5 when not supplied.
class LegendrianJetGraph {
 public:
  using ValueFn = std::function<double(const Eigen::VectorXd&)>;
  using GradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using HessFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  static constexpr double kStep = 1e-5;

  LegendrianJetGraph() = default;
  LegendrianJetGraph(std::string label, int n, ValueFn S, GradFn grad = {},
                     HessFn hess = {}, double box = 1e3);

  // Polynomial must depend on q only.
  static LegendrianJetGraph from_polynomial(const Polynomial& S, std::string label,
                                            double box = 1e3);
  // S = c + 0.5 a |q|^2.
  static LegendrianJetGraph quadratic(int n, double c, double a, double box = 1e3);
  static LegendrianJetGraph zero_section(int n) { return quadratic(n, 0.0, 0.0); }

  double S(const Eigen::VectorXd& q) const { return S_(q); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& q) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& q) const;

  const std::string& label() const { return label_; }
  int dim() const { return n_; }
  double box() const { return box_; }
  bool in_box(const Eigen::VectorXd& q) const;

 private:
  std::string label_;
  int n_ = 0;
  ValueFn S_;
  GradFn grad_;
  HessFn hess_;
  double box_ = 1e3;
};

// (q, dS(q), S(q)); throws DomainError outside the chart box.
PhasePoint legendrian_point(const LegendrianJetGraph& L, const Eigen::VectorXd& q);

// (p - dS(q), z - S(q)); zero iff x lies on L.
Eigen::VectorXd legendrian_defect(const LegendrianJetGraph& L, const PhasePoint& x);

// Tangent vector (dq, Hess S dq, dS.dq) at legendrian_point(L, q).
TangentVector legendrian_tangent(const LegendrianJetGraph& L, const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& dq);

}  // namespace contacton
