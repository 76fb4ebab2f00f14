#include "contacton/legendrian.hpp"

#include <memory>
#include <sstream>
#include <utility>

namespace contacton {

LegendrianJetGraph::LegendrianJetGraph(std::string label, int n, ValueFn S,
                                       GradFn grad, HessFn hess, double box)
    : label_(std::move(label)),
      n_(n),
      S_(std::move(S)),
      grad_(std::move(grad)),
      hess_(std::move(hess)),
      box_(box) {
  if (n_ < 1) throw DimensionError("Legendrian dimension must be >= 1");
  if (!S_) throw Error("Legendrian needs a generating function");
  if (!(box_ > 0.0)) throw DomainError("chart box must be positive");
}

LegendrianJetGraph LegendrianJetGraph::from_polynomial(const Polynomial& S,
                                                       std::string label, double box) {
  const int n = S.dim();
  for (const auto& [e, c] : S.terms()) {
    if (e[0] != 0) throw DomainError("generating function must not depend on t");
    for (int k = n + 1; k < 2 * n + 2; ++k)
      if (e[k] != 0) throw DomainError("generating function must depend on q only");
  }
  auto grads = std::make_shared<std::vector<Polynomial>>();
  auto hess = std::make_shared<std::vector<Polynomial>>();
  for (int i = 0; i < n; ++i) grads->push_back(S.d_state(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) hess->push_back((*grads)[i].d_state(j));
  // Raw buffer with p = 0, z = 0; the polynomial ignores them.
  auto raw_of = [n](const Eigen::VectorXd& q) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(2 * n + 1);
    r.head(n) = q;
    return r;
  };
  return LegendrianJetGraph(
      std::move(label), n,
      [S, raw_of](const Eigen::VectorXd& q) { return S.eval_raw(0.0, raw_of(q).data()); },
      [grads, raw_of, n](const Eigen::VectorXd& q) {
        const Eigen::VectorXd r = raw_of(q);
        Eigen::VectorXd g(n);
        for (int i = 0; i < n; ++i) g[i] = (*grads)[i].eval_raw(0.0, r.data());
        return g;
      },
      [hess, raw_of, n](const Eigen::VectorXd& q) {
        const Eigen::VectorXd r = raw_of(q);
        Eigen::MatrixXd h(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) h(i, j) = (*hess)[i * n + j].eval_raw(0.0, r.data());
        return h;
      },
      box);
}

LegendrianJetGraph LegendrianJetGraph::quadratic(int n, double c, double a, double box) {
  std::ostringstream label;
  label.precision(17);
  label << "jet(" << c << " + 0.5*" << a << "*|q|^2)";
  return LegendrianJetGraph(
      label.str(), n,
      [c, a](const Eigen::VectorXd& q) { return c + 0.5 * a * q.squaredNorm(); },
      [a](const Eigen::VectorXd& q) { return Eigen::VectorXd(a * q); },
      [a, n](const Eigen::VectorXd&) {
        return Eigen::MatrixXd(a * Eigen::MatrixXd::Identity(n, n));
      },
      box);
}

Eigen::VectorXd LegendrianJetGraph::gradient(const Eigen::VectorXd& q) const {
  require_same_dim(n_, static_cast<int>(q.size()));
  if (grad_) return grad_(q);
  Eigen::VectorXd g(n_);
  Eigen::VectorXd y = q;
  for (int i = 0; i < n_; ++i) {
    auto at = [&](double s) {
      y[i] = q[i] + s * kStep;
      return S_(y);
    };
    g[i] = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * kStep);
    y[i] = q[i];
  }
  return g;
}

Eigen::MatrixXd LegendrianJetGraph::hessian(const Eigen::VectorXd& q) const {
  require_same_dim(n_, static_cast<int>(q.size()));
  if (hess_) return hess_(q);
  Eigen::MatrixXd h(n_, n_);
  Eigen::VectorXd y = q;
  for (int i = 0; i < n_; ++i) {
    auto at = [&](double s) {
      y[i] = q[i] + s * kStep;
      return gradient(y);
    };
    h.col(i) = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * kStep);
    y[i] = q[i];
  }
  return 0.5 * (h + h.transpose());
}

bool LegendrianJetGraph::in_box(const Eigen::VectorXd& q) const {
  return q.size() == n_ && q.allFinite() && q.cwiseAbs().maxCoeff() <= box_;
}

PhasePoint legendrian_point(const LegendrianJetGraph& L, const Eigen::VectorXd& q) {
  require_same_dim(L.dim(), static_cast<int>(q.size()));
  if (!L.in_box(q)) throw DomainError("q outside the chart box of " + L.label());
  return PhasePoint(q, L.gradient(q), L.S(q));
}

Eigen::VectorXd legendrian_defect(const LegendrianJetGraph& L, const PhasePoint& x) {
  require_same_dim(L.dim(), x.dim());
  const int n = x.dim();
  const Eigen::VectorXd q = x.q();
  Eigen::VectorXd d(n + 1);
  d.head(n) = x.p() - L.gradient(q);
  d[n] = x.z() - L.S(q);
  return d;
}

TangentVector legendrian_tangent(const LegendrianJetGraph& L, const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& dq) {
  return TangentVector(dq, L.hessian(q) * dq, L.gradient(q).dot(dq));
}

}  // namespace contacton
