#include "contacton/flow.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace contacton {

void ContactPath::validate() const {
  if (x.size() != t.size()) throw DimensionError("path time and state lengths differ");
  if (x.size() < 2) return;
  const int n = x.front().dim();
  const double h = t[1] - t[0];
  if (!(h > 0.0)) throw DomainError("path time grid must increase");
  for (std::size_t k = 0; k < x.size(); ++k) {
    require_same_dim(n, x[k].dim());
    if (k > 0 && std::abs((t[k] - t[k - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw DomainError("path time grid is not uniform");
  }
  if (!g.empty() && g.size() != x.size())
    throw DimensionError("exponent channel length differs from path");
}

ContactPath sample_path(const std::function<PhasePoint(double)>& curve, double t0,
                        double t1, int samples) {
  if (samples < 2) throw DomainError("path needs at least 2 samples");
  ContactPath path;
  path.t.reserve(samples);
  path.x.reserve(samples);
  const double h = (t1 - t0) / (samples - 1);
  for (int k = 0; k < samples; ++k) {
    const double t = (k == samples - 1) ? t1 : t0 + k * h;
    path.t.push_back(t);
    path.x.push_back(curve(t));
  }
  return path;
}

namespace ham {

namespace {

// Augmented right-hand side (X_H, -H_z).
Eigen::VectorXd augmented_rhs(const HamiltonianField& H, double t,
                              const Eigen::VectorXd& state) {
  const int m = static_cast<int>(state.size()) - 1;
  const PhasePoint x = PhasePoint::from_raw(state.head(m));
  const Eigen::VectorXd grad = H.gradient(t, x);
  Eigen::VectorXd out(m + 1);
  out.head(m) = hamiltonian_vf(x, H(t, x), grad).raw();
  out[m] = -grad[m - 1];
  return out;
}

template <class Rhs>
Eigen::VectorXd rk4_step(const Rhs& f, double t, const Eigen::VectorXd& y, double h) {
  const Eigen::VectorXd k1 = f(t, y);
  const Eigen::VectorXd k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
  const Eigen::VectorXd k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
  const Eigen::VectorXd k4 = f(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

[[noreturn]] void blow_up(const std::string& label, double t_last) {
  std::ostringstream os;
  os << "non-finite state in flow of " << label << "; blow-up before t = " << t_last;
  throw BlowUpError(os.str(), t_last);
}

// State + exponent at time t from x, integrating with steps = ceil(|t|/step).
Eigen::VectorXd integrate_state(const HamiltonianField& H, double step, double t,
                                const PhasePoint& x) {
  Eigen::VectorXd y(x.raw().size() + 1);
  y.head(x.raw().size()) = x.raw();
  y[x.raw().size()] = 0.0;
  if (t == 0.0) return y;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / step - 1e-9)));
  const double h = t / steps;
  auto f = [&](double s, const Eigen::VectorXd& v) { return augmented_rhs(H, s, v); };
  for (int k = 0; k < steps; ++k) {
    y = rk4_step(f, k * h, y, h);
    if (!y.allFinite()) blow_up(H.name(), (k + 1) * h);
  }
  return y;
}

IsotopyJet integrate_jet(const HamiltonianField& H, double step, double t,
                         const PhasePoint& x) {
  const int m = static_cast<int>(x.raw().size());
  const int iz = m - 1;
  // Layout: [x (m), g (1), M (m*m, column-major), grad g (m)].
  const int len = m + 1 + m * m + m;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(len);
  y.head(m) = x.raw();
  Eigen::Map<Eigen::MatrixXd>(y.data() + m + 1, m, m).setIdentity();

  auto f = [&](double s, const Eigen::VectorXd& v) {
    const PhasePoint xs = PhasePoint::from_raw(v.head(m));
    const Eigen::VectorXd grad = H.gradient(s, xs);
    const Eigen::MatrixXd hess = H.hessian(s, xs);
    const Eigen::MatrixXd DX = hamiltonian_vf_jacobian(H, s, xs);
    Eigen::Map<const Eigen::MatrixXd> M(v.data() + m + 1, m, m);
    Eigen::VectorXd out(len);
    out.head(m) = hamiltonian_vf(xs, H(s, xs), grad).raw();
    out[m] = -grad[iz];
    Eigen::Map<Eigen::MatrixXd>(out.data() + m + 1, m, m) = DX * M;
    out.tail(m) = -(M.transpose() * hess.col(iz));
    return out;
  };
  if (t != 0.0) {
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / step - 1e-9)));
    const double h = t / steps;
    for (int k = 0; k < steps; ++k) {
      y = rk4_step(f, k * h, y, h);
      if (!y.allFinite()) blow_up(H.name(), (k + 1) * h);
    }
  }
  IsotopyJet jet;
  jet.image = PhasePoint::from_raw(y.head(m));
  jet.exponent = y[m];
  jet.jacobian = Eigen::Map<const Eigen::MatrixXd>(y.data() + m + 1, m, m);
  jet.exponent_gradient = y.tail(m);
  return jet;
}

}  // namespace

ContactPath flow(const HamiltonianField& H, const PhasePoint& x0, double duration,
                 int steps, double t0) {
  if (steps < 1) throw DomainError("flow needs steps >= 1");
  require_same_dim(H.dim(), x0.dim());
  const int m = static_cast<int>(x0.raw().size());
  const double h = duration / steps;
  ContactPath path;
  path.t.reserve(steps + 1);
  path.x.reserve(steps + 1);
  path.g.reserve(steps + 1);
  Eigen::VectorXd y(m + 1);
  y.head(m) = x0.raw();
  y[m] = 0.0;
  path.t.push_back(t0);
  path.x.push_back(x0);
  path.g.push_back(0.0);
  auto f = [&](double s, const Eigen::VectorXd& v) { return augmented_rhs(H, s, v); };
  for (int k = 0; k < steps; ++k) {
    y = rk4_step(f, t0 + k * h, y, h);
    if (!y.allFinite()) blow_up(H.name(), t0 + (k + 1) * h);
    path.t.push_back(k + 1 == steps ? t0 + duration : t0 + (k + 1) * h);
    path.x.push_back(PhasePoint::from_raw(y.head(m)));
    path.g.push_back(y[m]);
  }
  return path;
}

ContactIsotopy::ContactIsotopy(std::string label, int n, MapFn map, ExpFn exponent,
                               JetFn jet)
    : label_(std::move(label)),
      n_(n),
      map_(std::move(map)),
      exponent_(std::move(exponent)),
      jet_(std::move(jet)) {
  if (!map_ || !exponent_) throw Error("isotopy needs map and exponent functions");
}

ContactIsotopy ContactIsotopy::generated(const HamiltonianField& H, double step) {
  if (!(step > 0.0)) throw DomainError("isotopy step must be positive");
  ContactIsotopy iso(
      "flow(" + H.name() + ")", H.dim(),
      [H, step](double t, const PhasePoint& x) {
        const Eigen::VectorXd y = integrate_state(H, step, t, x);
        return PhasePoint::from_raw(y.head(y.size() - 1));
      },
      [H, step](double t, const PhasePoint& x) {
        const Eigen::VectorXd y = integrate_state(H, step, t, x);
        return y[y.size() - 1];
      },
      [H, step](double t, const PhasePoint& x) { return integrate_jet(H, step, t, x); });
  iso.generator_ = H;
  iso.step_ = step;
  return iso;
}

ContactIsotopy ContactIsotopy::identity(int n) {
  return ContactIsotopy(
      "identity", n, [](double, const PhasePoint& x) { return x; },
      [](double, const PhasePoint&) { return 0.0; },
      [n](double, const PhasePoint& x) {
        IsotopyJet jet;
        jet.image = x;
        jet.jacobian = Eigen::MatrixXd::Identity(2 * n + 1, 2 * n + 1);
        jet.exponent_gradient = Eigen::VectorXd::Zero(2 * n + 1);
        return jet;
      });
}

PhasePoint ContactIsotopy::map(double t, const PhasePoint& x) const {
  require_same_dim(n_, x.dim());
  return map_(t, x);
}

double ContactIsotopy::exponent(double t, const PhasePoint& x) const {
  require_same_dim(n_, x.dim());
  return exponent_(t, x);
}

IsotopyJet ContactIsotopy::jet(double t, const PhasePoint& x) const {
  require_same_dim(n_, x.dim());
  if (jet_) return jet_(t, x);
  const int m = 2 * n_ + 1;
  constexpr double eps = 1e-6;
  IsotopyJet out;
  out.image = map_(t, x);
  out.exponent = exponent_(t, x);
  out.jacobian.resize(m, m);
  out.exponent_gradient.resize(m);
  PhasePoint y = x;
  for (int a = 0; a < m; ++a) {
    y.raw()[a] = x.raw()[a] + eps;
    const Eigen::VectorXd fp = map_(t, y).raw();
    const double gp = exponent_(t, y);
    y.raw()[a] = x.raw()[a] - eps;
    const Eigen::VectorXd fm = map_(t, y).raw();
    const double gm = exponent_(t, y);
    y.raw()[a] = x.raw()[a];
    out.jacobian.col(a) = (fp - fm) / (2.0 * eps);
    out.exponent_gradient[a] = (gp - gm) / (2.0 * eps);
  }
  return out;
}

PhasePoint ContactIsotopy::inverse_map(double t, const PhasePoint& x, double tol,
                                       int max_iter) const {
  require_same_dim(n_, x.dim());
  PhasePoint y = x;
  const double scale = std::max(1.0, x.raw().norm());
  for (int it = 0; it < max_iter; ++it) {
    const IsotopyJet j = jet(t, y);
    const Eigen::VectorXd r = j.image.raw() - x.raw();
    if (r.norm() <= tol * scale) return y;
    const Eigen::VectorXd dy = j.jacobian.partialPivLu().solve(r);
    y.raw() -= dy;
    if (!y.all_finite()) break;
  }
  const Eigen::VectorXd r = map(t, y).raw() - x.raw();
  if (r.norm() <= 1e3 * tol * scale) return y;
  throw SolverError("inverse flow resolution failed for " + label_);
}

double exponent_from_jacobian(const PhasePoint& image, const Eigen::MatrixXd& jacobian) {
  const int m = static_cast<int>(jacobian.rows());
  const TangentVector pushed = TangentVector::from_raw(jacobian.col(m - 1));
  const double l = lambda_eval(image, pushed);
  if (!(l > 0.0)) throw DomainError("map does not preserve coorientation");
  return std::log(l);
}

}  // namespace ham
}  // namespace contacton
