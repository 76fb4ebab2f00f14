#pragma once

#include <vector>

#include "contacton/flow.hpp"
#include "contacton/report.hpp"

namespace contacton::ham {

// --- developing map -------------------------------------------------------

struct DevSample {
  double value = 0.0;
  bool one_sided = false;  // t within delta of the domain boundary
};

// -lambda(X_t(x)) with X_t(x) = d/dt psi_t(psi_t^{-1}(x)) by central time
// differencing with spacing delta; one-sided 2nd-order near t = 0 or t_max.
DevSample dev_sample(const ContactIsotopy& iso, double t, const PhasePoint& x, double delta,
                     double t_max);
HamiltonianField dev(const ContactIsotopy& iso, double delta, double t_max);

// --- composition formulas -------------------------------------------------

// Generator of the timewise inverse {psi_t^{-1}}:
//   Hbar(t, x) = -exp(-g_t(x)) H(t, psi_t(x)).
// Throws DomainError when |g| > 50.
HamiltonianField inverse_hamiltonian(const HamiltonianField& H, const ContactIsotopy& iso);

// Generator of the timewise product {psi1_t o psi2_t}:
//   K(t, x) = H1(t, x) + exp(g1_t(y)) H2(t, y),  y = psi1_t^{-1}(x).
HamiltonianField product_hamiltonian(const HamiltonianField& H1, const ContactIsotopy& iso1,
                                     const HamiltonianField& H2, const ContactIsotopy& iso2);

// max |dev(iso) - H| over samples at time t; used to confirm iso is generated by H.
double generator_defect(const HamiltonianField& H, const ContactIsotopy& iso, double t,
                        const std::vector<PhasePoint>& samples, double t_max);

// --- brackets -------------------------------------------------------------

// [X, Y] = DY X - DX Y at x.
TangentVector lie_bracket(const HamiltonianField& H, const HamiltonianField& G, double t,
                          const PhasePoint& x);
// {H, G} = -lambda([X_H, X_G]) from vector-field Jacobians.
double jacobi_bracket(const HamiltonianField& H, const HamiltonianField& G, double t,
                      const PhasePoint& x);
// Closed form {H, G} = X_H[G] + G R_lambda[H] as an exact polynomial.
Polynomial bracket_polynomial(const Polynomial& H, const Polynomial& G);

// --- Reeb field of a rescaled form ----------------------------------------

// R_{f lambda} = X_G with G = -1/f.  f is read at t = 0; f(x) <= 0 throws.
TangentVector reeb_of_rescaled(const ScalarField& f, const PhasePoint& x);

// Direct solve of (f lambda)(R) = 1, R -| d(f lambda) = 0 (least squares).
TangentVector reeb_of_rescaled_direct(const ScalarField& f, const PhasePoint& x);

// --- conformal exponent laws ---------------------------------------------

// Each returns |lhs - rhs| where lhs comes from the composed differential and
// rhs from the integrated exponent channels.
double cocycle_defect(const ContactIsotopy& phi, double t_phi, const ContactIsotopy& psi,
                      double t_psi, const PhasePoint& x);
double inverse_exponent_defect(const ContactIsotopy& psi, double t_psi, const PhasePoint& x);
double conjugation_defect(const ContactIsotopy& phi, double t_phi, const ContactIsotopy& psi,
                          double t_psi, const PhasePoint& x);

// --- identity suite -------------------------------------------------------

struct IdentitySuiteOptions {
  double analytic_tolerance = 1e-8;
  double flow_tolerance = 1e-6;
  double flow_step = 1e-3;
  double t_phi = 1.0;
  double t_psi = 1.0;
  double time = 0.0;          // t at which pointwise identities are evaluated
  bool flow_laws = true;      // skip the (slower) flow-based laws when false
  int flow_law_points = 0;    // 0 = use every sample point
};

struct IdentityReport {
  std::string hamiltonian;
  double lambda_defect = 0.0;         // |lambda(X_H) + H|
  double dissipation_defect = 0.0;    // |dH(X_H) + H R[H]|
  double bracket_one_defect = 0.0;    // |{1,H} + R[H]|
  double reeb_commutator_defect = 0.0;  // |[R, X_H] - X_{R[H]}|
  double antisymmetry_defect = 0.0;   // |{H,G} + {G,H}|
  double bracket_routes_defect = 0.0; // Lie-bracket route vs closed form (polynomials)
  double cocycle_defect = 0.0;
  double inverse_defect = 0.0;
  double conjugation_defect = 0.0;
  std::vector<Check> checks;
  bool pass() const { return all_pass(checks); }
};

// G is the partner for two-field laws (antisymmetry, cocycle, conjugation).
IdentityReport identity_suite(const HamiltonianField& H, const HamiltonianField& G,
                              const std::vector<PhasePoint>& samples,
                              const IdentitySuiteOptions& opts = {});

}  // namespace contacton::ham
