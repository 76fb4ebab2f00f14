#include "contacton/action.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace contacton::action {

namespace {

void require_variation(const ContactPath& path, const VariationField& eta) {
  if (eta.eta.size() != path.size())
    throw DimensionError("variation field length differs from path");
  for (const auto& v : eta.eta) require_same_dim(path.dim(), v.dim());
}

// Exact integral of lambda over the straight segment x_a -> x_b.
double segment_lambda(const PhasePoint& a, const PhasePoint& b) {
  const Eigen::VectorXd pbar = 0.5 * (a.p() + b.p());
  return (b.z() - a.z()) - pbar.dot(b.q() - a.q());
}

std::vector<TangentVector> path_velocity(const ContactPath& path) {
  const std::size_t N = path.size();
  const double h = path.step();
  std::vector<TangentVector> v(N);
  const auto& x = path.x;
  for (std::size_t k = 1; k + 1 < N; ++k)
    v[k] = TangentVector::from_raw((x[k + 1].raw() - x[k - 1].raw()) / (2.0 * h));
  v[0] = TangentVector::from_raw(
      (-3.0 * x[0].raw() + 4.0 * x[1].raw() - x[2].raw()) / (2.0 * h));
  v[N - 1] = TangentVector::from_raw(
      (3.0 * x[N - 1].raw() - 4.0 * x[N - 2].raw() + x[N - 3].raw()) / (2.0 * h));
  return v;
}

}  // namespace

std::vector<double> VariationField::reeb_part(const ContactPath& path) const {
  require_variation(path, *this);
  std::vector<double> a(eta.size());
  for (std::size_t k = 0; k < eta.size(); ++k) a[k] = lambda_eval(path.x[k], eta[k]);
  return a;
}

std::vector<TangentVector> VariationField::xi_part(const ContactPath& path) const {
  require_variation(path, *this);
  std::vector<TangentVector> out(eta.size());
  for (std::size_t k = 0; k < eta.size(); ++k) out[k] = xi_project(path.x[k], eta[k]);
  return out;
}

std::vector<double> cumulative_action(const HamiltonianField& H, const ContactPath& path) {
  path.validate();
  if (path.size() < 2) throw DomainError("action needs at least 2 samples");
  require_same_dim(H.dim(), path.dim());
  const std::size_t N = path.size();
  std::vector<double> Hv(N);
  for (std::size_t k = 0; k < N; ++k) Hv[k] = H(path.t[k], path.x[k]);
  std::vector<double> A(N, 0.0);
  for (std::size_t k = 1; k < N; ++k) {
    const double dt = path.t[k] - path.t[k - 1];
    A[k] = A[k - 1] - segment_lambda(path.x[k - 1], path.x[k]) -
           0.5 * dt * (Hv[k - 1] + Hv[k]);
  }
  return A;
}

double action(const HamiltonianField& H, const ContactPath& path) {
  return cumulative_action(H, path).back();
}

double first_variation(const HamiltonianField& H, const ContactPath& path,
                       const VariationField& eta) {
  path.validate();
  if (path.size() < 2) throw DomainError("first variation needs at least 2 samples");
  require_same_dim(H.dim(), path.dim());
  require_variation(path, eta);
  const std::size_t N = path.size();
  const int n = path.dim();

  std::vector<double> a(N), bulk(N);
  for (std::size_t k = 0; k < N; ++k) {
    const PhasePoint& x = path.x[k];
    const double t = path.t[k];
    const Eigen::VectorXd grad = H.gradient(t, x);
    const TangentVector XH = ham::hamiltonian_vf(x, H(t, x), grad);
    a[k] = lambda_eval(x, eta.eta[k]);
    bulk[k] = dlambda(XH, eta.eta[k]) + grad[2 * n] * a[k];
  }

  double sum = 0.0;
  for (std::size_t k = 1; k < N; ++k) {
    const PhasePoint& x0 = path.x[k - 1];
    const PhasePoint& x1 = path.x[k];
    const TangentVector& e0 = eta.eta[k - 1];
    const TangentVector& e1 = eta.eta[k];
    const double dt = path.t[k] - path.t[k - 1];
    const double seg = (x1.q() - x0.q()).dot(0.5 * (e0.p() + e1.p())) -
                       (x1.p() - x0.p()).dot(0.5 * (e0.q() + e1.q()));
    sum += seg - 0.5 * dt * (bulk[k - 1] + bulk[k]);
  }
  return sum - a[N - 1] + a[0];
}

HamiltonResidual hamilton_residual(const HamiltonianField& H, const ContactPath& path) {
  path.validate();
  if (path.size() < 3) throw DomainError("hamilton_residual needs at least 3 samples");
  require_same_dim(H.dim(), path.dim());
  const int n = path.dim();
  const auto vel = path_velocity(path);
  HamiltonResidual r;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const PhasePoint& x = path.x[k];
    const double t = path.t[k];
    const double Hv = H(t, x);
    const TangentVector XH = ham::hamiltonian_vf(x, Hv, H.gradient(t, x));
    const TangentVector d = vel[k] - XH;
    // xi-part in the (D/dq, d/dp) frame has components (dq, dp).
    const double pi = d.raw().head(2 * n).norm();
    r.pi_residual = std::max(r.pi_residual, pi);
    r.reeb_residual = std::max(r.reeb_residual, std::abs(lambda_eval(x, vel[k]) + Hv));
  }
  return r;
}

LiftResult reeb_translate_lift(const HamiltonianField& H, const ContactPath& path,
                               double pi_tolerance) {
  const HamiltonResidual before = hamilton_residual(H, path);
  if (!(before.pi_residual <= pi_tolerance))
    throw DomainError("path is not pi-critical; pi residual " +
                      std::to_string(before.pi_residual));
  const std::vector<double> A = cumulative_action(H, path);
  const int iz = 2 * path.dim();

  auto times = std::make_shared<std::vector<double>>(path.t);
  auto rho = std::make_shared<std::vector<double>>(A.size());
  for (std::size_t k = 0; k < A.size(); ++k) (*rho)[k] = -A[k];

  // rho(t) by linear interpolation, held constant outside the sampled range.
  auto rho_at = [times, rho](double t) {
    const auto& T = *times;
    if (t <= T.front()) return rho->front();
    if (t >= T.back()) return rho->back();
    const double h = T[1] - T[0];
    std::size_t k = std::min(T.size() - 2, static_cast<std::size_t>((t - T.front()) / h));
    const double s = (t - T[k]) / h;
    return (1.0 - s) * (*rho)[k] + s * (*rho)[k + 1];
  };
  auto shifted = [rho_at, iz](double t, const PhasePoint& x) {
    PhasePoint y = x;
    y.raw()[iz] += rho_at(t);
    return y;
  };

  LiftResult out;
  out.rho = *rho;
  out.lifted_hamiltonian = HamiltonianField(
      "lift(" + H.name() + ")", H.dim(),
      [H, shifted](double t, const PhasePoint& x) { return H(t, shifted(t, x)); },
      [H, shifted](double t, const PhasePoint& x) { return H.gradient(t, shifted(t, x)); },
      [H, shifted](double t, const PhasePoint& x) { return H.hessian(t, shifted(t, x)); },
      true);
  out.lifted_path = path;
  out.lifted_path.g.clear();
  for (std::size_t k = 0; k < path.size(); ++k) out.lifted_path.x[k].raw()[iz] -= out.rho[k];
  return out;
}

}  // namespace contacton::action
