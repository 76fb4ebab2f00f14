#include "contacton/calculus.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace contacton::ham {

DevSample dev_sample(const ContactIsotopy& iso, double t, const PhasePoint& x, double delta,
                     double t_max) {
  if (!(delta > 0.0)) throw DomainError("dev spacing must be positive");
  const PhasePoint y = iso.inverse_map(t, x);
  DevSample out;
  Eigen::VectorXd velocity;
  if (t - delta >= 0.0 && t + delta <= t_max) {
    velocity = (iso.map(t + delta, y).raw() - iso.map(t - delta, y).raw()) / (2.0 * delta);
  } else if (t - delta < 0.0) {
    out.one_sided = true;
    velocity = (-3.0 * iso.map(t, y).raw() + 4.0 * iso.map(t + delta, y).raw() -
                iso.map(t + 2.0 * delta, y).raw()) /
               (2.0 * delta);
  } else {
    out.one_sided = true;
    velocity = (3.0 * iso.map(t, y).raw() - 4.0 * iso.map(t - delta, y).raw() +
                iso.map(t - 2.0 * delta, y).raw()) /
               (2.0 * delta);
  }
  out.value = -lambda_eval(x, TangentVector::from_raw(velocity));
  return out;
}

HamiltonianField dev(const ContactIsotopy& iso, double delta, double t_max) {
  return HamiltonianField(
      "dev(" + iso.label() + ")", iso.dim(),
      [iso, delta, t_max](double t, const PhasePoint& x) {
        return dev_sample(iso, t, x, delta, t_max).value;
      });
}

HamiltonianField inverse_hamiltonian(const HamiltonianField& H, const ContactIsotopy& iso) {
  require_same_dim(H.dim(), iso.dim());
  auto checked = [](double g) {
    if (std::abs(g) > 50.0) throw DomainError("conformal exponent overflow (|g| > 50)");
    return g;
  };
  auto value = [H, iso, checked](double t, const PhasePoint& x) {
    const IsotopyJet j = iso.jet(t, x);
    return -std::exp(-checked(j.exponent)) * H(t, j.image);
  };
  auto grad = [H, iso, checked](double t, const PhasePoint& x) {
    const IsotopyJet j = iso.jet(t, x);
    const double w = std::exp(-checked(j.exponent));
    const double h = H(t, j.image);
    const Eigen::VectorXd dH = H.gradient(t, j.image);
    return Eigen::VectorXd(-w * (j.jacobian.transpose() * dH - h * j.exponent_gradient));
  };
  return HamiltonianField("inverse(" + H.name() + ")", H.dim(), value, grad);
}

HamiltonianField product_hamiltonian(const HamiltonianField& H1, const ContactIsotopy& iso1,
                                     const HamiltonianField& H2, const ContactIsotopy& iso2) {
  require_same_dim(H1.dim(), H2.dim());
  require_same_dim(iso1.dim(), iso2.dim());
  require_same_dim(H1.dim(), iso1.dim());
  auto value = [H1, H2, iso1](double t, const PhasePoint& x) {
    const PhasePoint y = iso1.inverse_map(t, x);
    const double g1 = iso1.exponent(t, y);
    return H1(t, x) + std::exp(g1) * H2(t, y);
  };
  auto grad = [H1, H2, iso1](double t, const PhasePoint& x) {
    const PhasePoint y = iso1.inverse_map(t, x);
    const IsotopyJet j = iso1.jet(t, y);
    const double w = std::exp(j.exponent);
    const Eigen::VectorXd inner =
        w * (j.exponent_gradient * H2(t, y) + H2.gradient(t, y));
    // d y / d x = (D psi1(y))^{-1}
    const Eigen::VectorXd pulled = j.jacobian.transpose().partialPivLu().solve(inner);
    return Eigen::VectorXd(H1.gradient(t, x) + pulled);
  };
  return HamiltonianField("product(" + H1.name() + "," + H2.name() + ")", H1.dim(), value,
                          grad);
}

double generator_defect(const HamiltonianField& H, const ContactIsotopy& iso, double t,
                        const std::vector<PhasePoint>& samples, double t_max) {
  const double delta = iso.step() > 0.0 ? iso.step() : 1e-3;
  double worst = 0.0;
  for (const auto& x : samples)
    worst = std::max(worst, std::abs(dev_sample(iso, t, x, delta, t_max).value - H(t, x)));
  return worst;
}

TangentVector lie_bracket(const HamiltonianField& H, const HamiltonianField& G, double t,
                          const PhasePoint& x) {
  const TangentVector XH = hamiltonian_vf(H, t, x);
  const TangentVector XG = hamiltonian_vf(G, t, x);
  const Eigen::MatrixXd DH = hamiltonian_vf_jacobian(H, t, x);
  const Eigen::MatrixXd DG = hamiltonian_vf_jacobian(G, t, x);
  return TangentVector::from_raw(DG * XH.raw() - DH * XG.raw());
}

double jacobi_bracket(const HamiltonianField& H, const HamiltonianField& G, double t,
                      const PhasePoint& x) {
  return -lambda_eval(x, lie_bracket(H, G, t, x));
}

Polynomial bracket_polynomial(const Polynomial& H, const Polynomial& G) {
  require_same_dim(H.dim(), G.dim());
  const int n = H.dim();
  const Polynomial Hz = H.d_state(2 * n);
  const Polynomial Gz = G.d_state(2 * n);
  Polynomial out = G * Hz;
  Polynomial Xz = -1.0 * H;
  for (int i = 0; i < n; ++i) {
    const Polynomial Hp = H.d_state(n + i);
    const Polynomial Hq = H.d_state(i);
    const Polynomial p = Polynomial::p(n, i);
    out += G.d_state(i) * Hp;
    out += -1.0 * (G.d_state(n + i) * (Hq + p * Hz));
    Xz += p * Hp;
  }
  out += Gz * Xz;
  return out;
}

TangentVector reeb_of_rescaled(const ScalarField& f, const PhasePoint& x) {
  const double fx = f(0.0, x);
  if (!(fx > 0.0)) throw DomainError("rescaling factor must be positive");
  const Eigen::VectorXd df = f.gradient(0.0, x);
  // G = -1/f, dG = df / f^2.
  return hamiltonian_vf(x, -1.0 / fx, df / (fx * fx));
}

TangentVector reeb_of_rescaled_direct(const ScalarField& f, const PhasePoint& x) {
  const int n = x.dim();
  const int m = 2 * n + 1;
  const double fx = f(0.0, x);
  if (!(fx > 0.0)) throw DomainError("rescaling factor must be positive");
  const Eigen::VectorXd df = f.gradient(0.0, x);
  // lambda as a covector in raw coordinates.
  Eigen::VectorXd lam = Eigen::VectorXd::Zero(m);
  lam.head(n) = -x.p();
  lam[2 * n] = 1.0;
  // dlambda as an antisymmetric matrix: dlambda(v, w) = v^T W w.
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < n; ++i) {
    W(i, n + i) = 1.0;
    W(n + i, i) = -1.0;
  }
  // d(f lambda)(R, v) = (df.R)(lam.v) - (df.v)(lam.R) + f R^T W v, linear in R.
  Eigen::MatrixXd A(m + 1, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
  A.row(0) = fx * lam.transpose();
  b[0] = 1.0;
  for (int a = 0; a < m; ++a) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e[a] = 1.0;
    A.row(a + 1) = lam.dot(e) * df.transpose() - df.dot(e) * lam.transpose() +
                   fx * (W * e).transpose();
  }
  return TangentVector::from_raw(A.colPivHouseholderQr().solve(b));
}

double cocycle_defect(const ContactIsotopy& phi, double t_phi, const ContactIsotopy& psi,
                      double t_psi, const PhasePoint& x) {
  const IsotopyJet jpsi = psi.jet(t_psi, x);
  const IsotopyJet jphi = phi.jet(t_phi, jpsi.image);
  const double lhs = exponent_from_jacobian(jphi.image, jphi.jacobian * jpsi.jacobian);
  const double rhs = jphi.exponent + jpsi.exponent;
  return std::abs(lhs - rhs);
}

double inverse_exponent_defect(const ContactIsotopy& psi, double t_psi, const PhasePoint& x) {
  const PhasePoint y = psi.inverse_map(t_psi, x);
  const IsotopyJet j = psi.jet(t_psi, y);
  const double lhs = exponent_from_jacobian(y, j.jacobian.inverse());
  const double rhs = -j.exponent;
  return std::abs(lhs - rhs);
}

double conjugation_defect(const ContactIsotopy& phi, double t_phi, const ContactIsotopy& psi,
                          double t_psi, const PhasePoint& x) {
  const PhasePoint y = phi.inverse_map(t_phi, x);
  const IsotopyJet jphi_y = phi.jet(t_phi, y);
  const IsotopyJet jpsi = psi.jet(t_psi, y);
  const IsotopyJet jphi_u = phi.jet(t_phi, jpsi.image);
  const Eigen::MatrixXd D = jphi_u.jacobian * jpsi.jacobian * jphi_y.jacobian.inverse();
  const double lhs = exponent_from_jacobian(jphi_u.image, D);
  const double rhs = jphi_u.exponent - jphi_y.exponent + jpsi.exponent;
  return std::abs(lhs - rhs);
}

IdentityReport identity_suite(const HamiltonianField& H, const HamiltonianField& G,
                              const std::vector<PhasePoint>& samples,
                              const IdentitySuiteOptions& opts) {
  require_same_dim(H.dim(), G.dim());
  const int n = H.dim();
  const double t = opts.time;
  const HamiltonianField one = HamiltonianField::constant(n, 1.0);
  const auto N = static_cast<long>(samples.size());

  // Per-sample defects; reduced serially for a schedule-independent result.
  std::vector<std::array<double, 6>> pointwise(N);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < N; ++k) {
    const PhasePoint& x = samples[k];
    const double h = H(t, x);
    const Eigen::VectorXd dH = H.gradient(t, x);
    const double RH = dH[2 * n];
    const TangentVector XH = hamiltonian_vf(x, h, dH);
    auto& d = pointwise[k];
    d[0] = std::abs(lambda_eval(x, XH) + h);
    d[1] = std::abs(dH.dot(XH.raw()) + h * RH);
    d[2] = std::abs(jacobi_bracket(one, H, t, x) + RH);
    // X_{R[H]} from the gradient of H_z, the z-column of the Hessian.
    const Eigen::MatrixXd hess = H.hessian(t, x);
    const TangentVector X_RH = hamiltonian_vf(x, RH, hess.col(2 * n));
    const HamiltonianField reeb_field = HamiltonianField::constant(n, -1.0);
    d[3] = (lie_bracket(reeb_field, H, t, x) - X_RH).raw().norm();
    d[4] = std::abs(jacobi_bracket(H, G, t, x) + jacobi_bracket(G, H, t, x));
    d[5] = 0.0;
    if (H.polynomial() && G.polynomial()) {
      const Polynomial b = bracket_polynomial(*H.polynomial(), *G.polynomial());
      d[5] = std::abs(b(t, x) - jacobi_bracket(H, G, t, x));
    }
  }

  IdentityReport rep;
  rep.hamiltonian = H.name();
  for (const auto& d : pointwise) {
    rep.lambda_defect = std::max(rep.lambda_defect, d[0]);
    rep.dissipation_defect = std::max(rep.dissipation_defect, d[1]);
    rep.bracket_one_defect = std::max(rep.bracket_one_defect, d[2]);
    rep.reeb_commutator_defect = std::max(rep.reeb_commutator_defect, d[3]);
    rep.antisymmetry_defect = std::max(rep.antisymmetry_defect, d[4]);
    rep.bracket_routes_defect = std::max(rep.bracket_routes_defect, d[5]);
  }
  const double atol = opts.analytic_tolerance;
  rep.checks.push_back(Check::below("lambda(X_H)+H", rep.lambda_defect, atol));
  rep.checks.push_back(Check::below("dH(X_H)+H*R[H]", rep.dissipation_defect, atol));
  rep.checks.push_back(Check::below("{1,H}+R[H]", rep.bracket_one_defect, atol));
  rep.checks.push_back(Check::below("[R,X_H]-X_{R[H]}", rep.reeb_commutator_defect, atol));
  rep.checks.push_back(Check::below("{H,G}+{G,H}", rep.antisymmetry_defect, atol));
  if (H.polynomial() && G.polynomial())
    rep.checks.push_back(Check::below("bracket routes agree", rep.bracket_routes_defect, atol));

  if (opts.flow_laws) {
    const ContactIsotopy phi = ContactIsotopy::generated(H, opts.flow_step);
    const ContactIsotopy psi = ContactIsotopy::generated(G, opts.flow_step);
    const long M = opts.flow_law_points > 0 ? std::min<long>(N, opts.flow_law_points) : N;
    std::vector<std::array<double, 3>> laws(M);
#pragma omp parallel for schedule(static)
    for (long k = 0; k < M; ++k) {
      const PhasePoint& x = samples[k];
      laws[k][0] = cocycle_defect(phi, opts.t_phi, psi, opts.t_psi, x);
      laws[k][1] = inverse_exponent_defect(psi, opts.t_psi, x);
      laws[k][2] = conjugation_defect(phi, opts.t_phi, psi, opts.t_psi, x);
    }
    for (const auto& d : laws) {
      rep.cocycle_defect = std::max(rep.cocycle_defect, d[0]);
      rep.inverse_defect = std::max(rep.inverse_defect, d[1]);
      rep.conjugation_defect = std::max(rep.conjugation_defect, d[2]);
    }
    const double ftol = opts.flow_tolerance;
    rep.checks.push_back(Check::below("cocycle g_{phi psi}", rep.cocycle_defect, ftol));
    rep.checks.push_back(Check::below("inverse g_{psi^-1}", rep.inverse_defect, ftol));
    rep.checks.push_back(Check::below("conjugation g_{phi psi phi^-1}", rep.conjugation_defect,
                                      ftol));
  }
  return rep;
}

}  // namespace contacton::ham
