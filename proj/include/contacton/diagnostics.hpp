#pragma once

#include <limits>
#include <vector>

#include "contacton/report.hpp"
#include "contacton/strip.hpp"

namespace contacton::instanton {

// Midpoint quadrature of 1/2 |d^pi w|^2 with box derivatives per cell.
double pi_energy(const StripMap& w);

struct DecayOptions {
  double window_fraction = 0.5;     // window starts this far along [tau_min, tau_max]
  int min_slices = 8;
  double floor = 1e-11;             // slice norms at or below this count as round-off
  double nonexp_threshold = 0.05;   // rms of the log-linear fit
};

struct DecayFit {
  double delta = std::numeric_limits<double>::quiet_NaN();
  double C = std::numeric_limits<double>::quiet_NaN();
  double fit_residual = 0.0;
  bool exact = false;            // every slice norm at round-off; delta = +inf
  bool non_exponential = false;  // too few usable slices or poor log-linear fit
  std::vector<double> tau;       // fitted slices
  std::vector<double> log_norm;
  bool has_rate() const { return exact || !non_exponential; }
};

// Per slice s_i (interior columns):
//   T(s) = int_0^1 lambda(d_t w) dt + 1/2 int_{[s, tau_max]} |d^pi w|^2,
//   Q(s) = -int_0^1 lambda(d_tau w) dt   (orientation j d_tau = d_t),
// and the slice norm of (|d^pi w|, lambda(d_tau w), lambda(d_t w) - T).
struct AsymptoticInvariants {
  std::vector<double> s, T, Q, slice_norm;
  double T_mean = 0.0, T_spread = 0.0;
  double Q_mean = 0.0, Q_spread = 0.0, Q_max = 0.0;
  DecayFit decay;
};

AsymptoticInvariants asymptotic_invariants(const StripMap& w, const DecayOptions& opts = {});
DecayFit decay_fit(const StripMap& w, const DecayOptions& opts = {});

struct IdentityOptions {
  double scale = 10.0;  // each check passes below scale * h^2
};

struct IdentityChecks {
  double energy = 0.0;         // max_cells |d(w*lambda) - 1/2 |d^pi w|^2 dA| / dA
  double alpha = 0.0;          // max_interior |dbar alpha - 1/2 |zeta|^2|
  double neumann = 0.0;        // max_edges |g(d_t w, T Lambda_i)|
  double im_alpha_edge = 0.0;  // max_edges |Im alpha| = |lambda(d_tau w)|
  double zeta_l2 = 0.0;
  double curl_l2 = 0.0;
  double T_ref = 0.0;
  std::vector<Check> checks;
  bool pass() const { return all_pass(checks); }
};

IdentityChecks identity_checks(const StripMap& w, const IdentityOptions& opts = {});

// Slope of log(err) against log(h) by least squares.
double fitted_order(const std::vector<double>& h, const std::vector<double>& err);

}  // namespace contacton::instanton
