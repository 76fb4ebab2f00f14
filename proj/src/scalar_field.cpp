#include "contacton/scalar_field.hpp"

#include <utility>

namespace contacton {

ScalarField::ScalarField(std::string name, int n, ValueFn value, GradFn grad,
                         HessFn hess, bool time_dependent)
    : name_(std::move(name)),
      n_(n),
      value_(std::move(value)),
      grad_(std::move(grad)),
      hess_(std::move(hess)),
      time_dependent_(time_dependent) {
  if (!value_) throw Error("scalar field needs a value function");
}

ScalarField ScalarField::from_polynomial(const Polynomial& poly, std::string name) {
  const int n = poly.dim();
  const int m = 2 * n + 1;
  auto grad_polys = std::make_shared<std::vector<Polynomial>>();
  auto hess_polys = std::make_shared<std::vector<Polynomial>>();
  for (int a = 0; a < m; ++a) grad_polys->push_back(poly.d_state(a));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) hess_polys->push_back((*grad_polys)[a].d_state(b));

  auto value = [poly](double t, const PhasePoint& x) { return poly(t, x); };
  auto grad = [grad_polys, m](double t, const PhasePoint& x) {
    Eigen::VectorXd g(m);
    for (int a = 0; a < m; ++a) g[a] = (*grad_polys)[a].eval_raw(t, x.raw().data());
    return g;
  };
  auto hess = [hess_polys, m](double t, const PhasePoint& x) {
    Eigen::MatrixXd h(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        h(a, b) = (*hess_polys)[a * m + b].eval_raw(t, x.raw().data());
    return h;
  };
  ScalarField f(name.empty() ? poly.to_string() : std::move(name), n, value, grad,
                hess, poly.time_dependent());
  f.poly_ = poly;
  return f;
}

ScalarField ScalarField::constant(int n, double c) {
  return from_polynomial(Polynomial::constant(n, c), "const:" + std::to_string(c));
}

double ScalarField::operator()(double t, const PhasePoint& x) const {
  require_same_dim(n_, x.dim());
  return value_(t, x);
}

Eigen::VectorXd fd_gradient(const std::function<double(const PhasePoint&)>& f,
                            const PhasePoint& x, double step) {
  const int m = static_cast<int>(x.raw().size());
  Eigen::VectorXd g(m);
  PhasePoint y = x;
  for (int a = 0; a < m; ++a) {
    const double x0 = x.raw()[a];
    auto at = [&](double s) {
      y.raw()[a] = x0 + s * step;
      return f(y);
    };
    g[a] = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * step);
    y.raw()[a] = x0;
  }
  return g;
}

Eigen::VectorXd ScalarField::gradient(double t, const PhasePoint& x) const {
  require_same_dim(n_, x.dim());
  if (grad_) return grad_(t, x);
  return fd_gradient([&](const PhasePoint& y) { return value_(t, y); }, x,
                     kGradientStep);
}

Eigen::MatrixXd ScalarField::hessian(double t, const PhasePoint& x) const {
  require_same_dim(n_, x.dim());
  if (hess_) return hess_(t, x);
  const int m = 2 * n_ + 1;
  Eigen::MatrixXd h(m, m);
  const double step = grad_ ? kGradientStep : kHessianStep;
  PhasePoint y = x;
  for (int a = 0; a < m; ++a) {
    const double x0 = x.raw()[a];
    auto at = [&](double s) {
      y.raw()[a] = x0 + s * step;
      if (grad_) return Eigen::VectorXd(grad_(t, y));
      return fd_gradient([&](const PhasePoint& w) { return value_(t, w); }, y,
                         kHessianStep);
    };
    h.col(a) = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * step);
    y.raw()[a] = x0;
  }
  return 0.5 * (h + h.transpose());
}

double ScalarField::reeb_derivative(double t, const PhasePoint& x) const {
  return gradient(t, x)[2 * n_];
}

}  // namespace contacton
