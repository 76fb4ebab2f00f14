#pragma once

#include <vector>

#include "contacton/flow.hpp"

namespace contacton::action {

// Variation field along a path, with its decomposition eta = eta^pi + a R.
struct VariationField {
  std::vector<TangentVector> eta;

  std::vector<double> reeb_part(const ContactPath& path) const;        // a = lambda(eta)
  std::vector<TangentVector> xi_part(const ContactPath& path) const;   // eta^pi
};

// A_H(gamma) = -int gamma^* lambda - int H(t, gamma(t)) dt.  The lambda term
// is the exact line integral over the piecewise-linear interpolant
// (segment value dz - pbar.dq); the H term is composite trapezoid.
double action(const HamiltonianField& H, const ContactPath& path);

// Running action A_H(gamma|[t_0, t_k]) for every sample k.
std::vector<double> cumulative_action(const HamiltonianField& H, const ContactPath& path);

// First variation
//   int dlambda(gamma' - X_H, eta) dt - int R[H] a dt - a(end) + a(start),
// discretised consistently with action(): the gamma' part per segment with
// midpoint eta, the X_H and R[H] parts by trapezoid.
double first_variation(const HamiltonianField& H, const ContactPath& path,
                       const VariationField& eta);

struct HamiltonResidual {
  double pi_residual = 0.0;    // max |(gamma' - X_H)^pi| in the (D/dq, d/dp) frame
  double reeb_residual = 0.0;  // max |lambda(gamma') + H|
  double full() const { return std::max(pi_residual, reeb_residual); }
};

// gamma' by central differences, one-sided 2nd order at the ends.
HamiltonResidual hamilton_residual(const HamiltonianField& H, const ContactPath& path);

struct LiftResult {
  HamiltonianField lifted_hamiltonian;  // H(t, x + rho(t) R)
  ContactPath lifted_path;              // gamma(t) - rho(t) R
  std::vector<double> rho;              // rho(t_k) = -A_H(gamma|[0,t_k])
};

// Reeb-translation lift of a pi-critical path.  Throws DomainError when the
// path's pi residual exceeds pi_tolerance.
LiftResult reeb_translate_lift(const HamiltonianField& H, const ContactPath& path,
                               double pi_tolerance = 1e-2);

}  // namespace contacton::action
