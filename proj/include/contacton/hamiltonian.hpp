#pragma once

#include <string>
#include <vector>

#include "contacton/scalar_field.hpp"

namespace contacton::ham {

// X_H = sum_i H_{p_i} d/dq_i - (H_{q_i} + p_i H_z) d/dp_i + (<p, H_p> - H) d/dz,
// so that lambda(X_H) = -H.
TangentVector hamiltonian_vf(const HamiltonianField& H, double t, const PhasePoint& x);

// Same formula from a precomputed value and gradient.
TangentVector hamiltonian_vf(const PhasePoint& x, double value, const Eigen::VectorXd& grad);

// d(X_H)/dx in raw coordinates, from the Hessian of H.
Eigen::MatrixXd hamiltonian_vf_jacobian(const HamiltonianField& H, double t,
                                        const PhasePoint& x);

// Built-in registry.  Atoms: "reeb" (-1), "const:c", "coord:z", "coord:qI",
// "coord:pI", "coord:t", "quadratic:a" (0.5 a |q|^2).  Atoms may be summed
// with '+', e.g. "quadratic:1 + coord:z".
Polynomial parse_polynomial(const std::string& spec, int n);
HamiltonianField parse_hamiltonian(const std::string& spec, int n);

// Polynomial from explicit terms: each entry has coef and exponent lists.
struct PolynomialTerm {
  double coef = 0.0;
  std::vector<int> q, p;
  int z = 0;
  int t = 0;
};
Polynomial polynomial_from_terms(const std::vector<PolynomialTerm>& terms, int n);

std::vector<std::string> registry_names();

}  // namespace contacton::ham
