#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "contacton/core.hpp"
#include "contacton/polynomial.hpp"

namespace contacton {

// Time-dependent scalar field f(t, x) on R^{2n+1}.  Gradients and Hessians are
// with respect to the raw state coordinates (q, p, z).  When no analytic
// derivative is registered, 4th-order central differences are used: step 1e-5
// on values for gradients, step 1e-3 for Hessians built from values alone.
class ScalarField {
 public:
  using ValueFn = std::function<double(double, const PhasePoint&)>;
  using GradFn = std::function<Eigen::VectorXd(double, const PhasePoint&)>;
  using HessFn = std::function<Eigen::MatrixXd(double, const PhasePoint&)>;

  static constexpr double kGradientStep = 1e-5;
  static constexpr double kHessianStep = 1e-3;

  ScalarField() = default;
  ScalarField(std::string name, int n, ValueFn value, GradFn grad = {},
              HessFn hess = {}, bool time_dependent = true);

  static ScalarField from_polynomial(const Polynomial& poly, std::string name = {});
  static ScalarField constant(int n, double c);

  double operator()(double t, const PhasePoint& x) const;
  Eigen::VectorXd gradient(double t, const PhasePoint& x) const;
  Eigen::MatrixXd hessian(double t, const PhasePoint& x) const;
  // R_lambda[f] = df/dz.
  double reeb_derivative(double t, const PhasePoint& x) const;

  const std::string& name() const { return name_; }
  int dim() const { return n_; }
  bool time_dependent() const { return time_dependent_; }
  bool analytic_gradient() const { return static_cast<bool>(grad_); }
  bool analytic_hessian() const { return static_cast<bool>(hess_); }
  // Set when the field is an exact polynomial.
  const std::optional<Polynomial>& polynomial() const { return poly_; }

 private:
  std::string name_;
  int n_ = 0;
  ValueFn value_;
  GradFn grad_;
  HessFn hess_;
  bool time_dependent_ = true;
  std::optional<Polynomial> poly_;
};

using HamiltonianField = ScalarField;

// 4th-order central difference of a scalar function of the raw coordinates.
Eigen::VectorXd fd_gradient(const std::function<double(const PhasePoint&)>& f,
                            const PhasePoint& x, double step);

}  // namespace contacton
