#include "contacton/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace contacton::instanton {

namespace {

using Vec = Eigen::VectorXd;

Vec node_vec(const StripMap& w, int i, int j) {
  return Eigen::Map<const Vec>(w.raw(i, j), w.width());
}

// Central differences inside, one-sided second order on the edges.
Vec d_tau(const StripMap& w, int i, int j) {
  const int N = w.grid().n_tau;
  const double h = w.grid().h_tau();
  if (i == 0)
    return (-3.0 * node_vec(w, 0, j) + 4.0 * node_vec(w, 1, j) - node_vec(w, 2, j)) / (2.0 * h);
  if (i == N)
    return (3.0 * node_vec(w, N, j) - 4.0 * node_vec(w, N - 1, j) + node_vec(w, N - 2, j)) /
           (2.0 * h);
  return (node_vec(w, i + 1, j) - node_vec(w, i - 1, j)) / (2.0 * h);
}

Vec d_t(const StripMap& w, int i, int j) {
  const int M = w.grid().n_t;
  const double h = w.grid().h_t();
  if (j == 0)
    return (-3.0 * node_vec(w, i, 0) + 4.0 * node_vec(w, i, 1) - node_vec(w, i, 2)) / (2.0 * h);
  if (j == M)
    return (3.0 * node_vec(w, i, M) - 4.0 * node_vec(w, i, M - 1) + node_vec(w, i, M - 2)) /
           (2.0 * h);
  return (node_vec(w, i, j + 1) - node_vec(w, i, j - 1)) / (2.0 * h);
}

double lambda_of(const Vec& x, const Vec& v, int n) {
  return v[2 * n] - x.segment(n, n).dot(v.head(n));
}

double pi_norm2(const Vec& v, int n) { return v.head(2 * n).squaredNorm(); }

// 1/2 |d^pi w|^2 on a cell from box differences.
double cell_energy_density(const StripMap& w, int i, int j) {
  const int n2 = 2 * w.dim();
  const double ht = w.grid().h_tau(), hs = w.grid().h_t();
  const double* a = w.raw(i, j);
  const double* b = w.raw(i + 1, j);
  const double* c = w.raw(i, j + 1);
  const double* d = w.raw(i + 1, j + 1);
  double s = 0.0;
  for (int k = 0; k < n2; ++k) {
    const double dtau = ((b[k] - a[k]) + (d[k] - c[k])) / (2.0 * ht);
    const double dt = ((c[k] - a[k]) + (d[k] - b[k])) / (2.0 * hs);
    s += dtau * dtau + dt * dt;
  }
  return 0.5 * s;
}

double trapezoid_weight(int j, int M, double h) { return (j == 0 || j == M) ? 0.5 * h : h; }

}  // namespace

double pi_energy(const StripMap& w) {
  const StripGrid& g = w.grid();
  std::vector<double> e(g.cells());
#pragma omp parallel for
  for (int c = 0; c < g.cells(); ++c) e[c] = cell_energy_density(w, c / g.n_t, c % g.n_t);
  double s = 0.0;
  for (double v : e) s += v;
  return s * g.h_tau() * g.h_t();
}

namespace {

std::vector<double> slice_norms(const StripMap& w, double T) {
  const StripGrid& g = w.grid();
  const int n = w.dim();
  std::vector<double> out(g.n_tau + 1);
#pragma omp parallel for
  for (int i = 0; i <= g.n_tau; ++i) {
    double s = 0.0;
    for (int j = 0; j <= g.n_t; ++j) {
      const Vec x = node_vec(w, i, j);
      const Vec a = d_tau(w, i, j), b = d_t(w, i, j);
      const double lt = lambda_of(x, b, n) - T, la = lambda_of(x, a, n);
      s += trapezoid_weight(j, g.n_t, g.h_t()) * (pi_norm2(a, n) + pi_norm2(b, n) + la * la +
                                                   lt * lt);
    }
    out[i] = std::sqrt(s);
  }
  return out;
}

DecayFit fit_slices(const StripGrid& g, const std::vector<double>& norms,
                    const DecayOptions& o) {
  DecayFit f;
  const double start = g.tau_min + o.window_fraction * (g.tau_max - g.tau_min);
  double peak = 0.0;
  for (int i = 0; i <= g.n_tau; ++i) {
    if (g.tau(i) < start - 1e-12) continue;
    peak = std::max(peak, norms[i]);
    if (norms[i] > o.floor) {
      f.tau.push_back(g.tau(i));
      f.log_norm.push_back(std::log(norms[i]));
    }
  }
  if (peak <= o.floor) {
    f.exact = true;
    f.delta = std::numeric_limits<double>::infinity();
    f.C = 0.0;
    return f;
  }
  if (static_cast<int>(f.tau.size()) < o.min_slices) {
    f.non_exponential = true;
    return f;
  }
  const int m = static_cast<int>(f.tau.size());
  Eigen::MatrixXd A(m, 2);
  Vec y(m);
  for (int k = 0; k < m; ++k) {
    A(k, 0) = 1.0;
    A(k, 1) = f.tau[k];
    y[k] = f.log_norm[k];
  }
  const Vec c = A.colPivHouseholderQr().solve(y);
  f.C = std::exp(c[0]);
  f.delta = -c[1];
  f.fit_residual = std::sqrt((A * c - y).squaredNorm() / m);
  f.non_exponential = f.fit_residual > o.nonexp_threshold || !(f.delta > 0.0);
  return f;
}

}  // namespace

AsymptoticInvariants asymptotic_invariants(const StripMap& w, const DecayOptions& opts) {
  const StripGrid& g = w.grid();
  const int n = w.dim();
  const int N = g.n_tau, M = g.n_t;
  const double area = g.h_tau() * g.h_t();

  // 1/2 int |d^pi w|^2 to the right of each column.
  std::vector<double> col_energy(N, 0.0);
#pragma omp parallel for
  for (int i = 0; i < N; ++i) {
    double s = 0.0;
    for (int j = 0; j < M; ++j) s += cell_energy_density(w, i, j);
    col_energy[i] = s * area;
  }
  std::vector<double> tail(N + 1, 0.0);
  for (int i = N - 1; i >= 0; --i) tail[i] = tail[i + 1] + col_energy[i];

  AsymptoticInvariants inv;
  const int S = N - 1;
  inv.s.resize(S);
  inv.T.resize(S);
  inv.Q.resize(S);
#pragma omp parallel for
  for (int i = 1; i < N; ++i) {
    double line = 0.0, q = 0.0;
    for (int j = 0; j <= M; ++j) {
      const Vec x = node_vec(w, i, j);
      const double wt = trapezoid_weight(j, M, g.h_t());
      line += wt * lambda_of(x, d_t(w, i, j), n);
      q += wt * lambda_of(x, d_tau(w, i, j), n);
    }
    inv.s[i - 1] = g.tau(i);
    inv.T[i - 1] = line + tail[i];
    inv.Q[i - 1] = -q;
  }

  auto stats = [](const std::vector<double>& v, double& mean, double& spread) {
    double s = 0.0, lo = v.front(), hi = v.front();
    for (double x : v) {
      s += x;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    mean = s / v.size();
    spread = hi - lo;
  };
  stats(inv.T, inv.T_mean, inv.T_spread);
  stats(inv.Q, inv.Q_mean, inv.Q_spread);
  for (double x : inv.Q) inv.Q_max = std::max(inv.Q_max, std::abs(x));

  const std::vector<double> norms = slice_norms(w, inv.T_mean);
  inv.slice_norm.assign(norms.begin() + 1, norms.end() - 1);
  inv.decay = fit_slices(g, norms, opts);
  return inv;
}

DecayFit decay_fit(const StripMap& w, const DecayOptions& opts) {
  return asymptotic_invariants(w, opts).decay;
}

IdentityChecks identity_checks(const StripMap& w, const IdentityOptions& opts) {
  const StripGrid& g = w.grid();
  const int n = w.dim();
  const int N = g.n_tau, M = g.n_t;
  const double ht = g.h_tau(), hs = g.h_t();

  // Nodal 1/2 |d^pi w|^2.
  std::vector<double> dens(g.nodes());
#pragma omp parallel for
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= M; ++j)
      dens[g.node(i, j)] = 0.5 * (pi_norm2(d_tau(w, i, j), n) + pi_norm2(d_t(w, i, j), n));

  std::vector<double> energy(g.cells());
#pragma omp parallel for
  for (int c = 0; c < g.cells(); ++c) {
    const int i = c / M, j = c % M;
    const double circ = edge_lambda(w.raw(i, j), w.raw(i + 1, j), n) +
                        edge_lambda(w.raw(i + 1, j), w.raw(i + 1, j + 1), n) -
                        edge_lambda(w.raw(i, j + 1), w.raw(i + 1, j + 1), n) -
                        edge_lambda(w.raw(i, j), w.raw(i, j + 1), n);
    const double avg = 0.25 * (dens[g.node(i, j)] + dens[g.node(i + 1, j)] +
                               dens[g.node(i, j + 1)] + dens[g.node(i + 1, j + 1)]);
    energy[c] = std::abs(circ / (ht * hs) - avg);
  }

  // dbar alpha - 1/2 |zeta|^2 at interior nodes, with alpha = (lambda(d_t w) - T)
  // + i lambda(d_tau w).  T is constant and drops out of the derivatives.
  std::vector<double> alpha(g.nodes(), 0.0);
#pragma omp parallel for
  for (int i = 1; i < N; ++i)
    for (int j = 1; j < M; ++j) {
      const Vec x = node_vec(w, i, j);
      const Vec a = d_tau(w, i, j), b = d_t(w, i, j);
      const Vec lap = (node_vec(w, i + 1, j) - 2.0 * x + node_vec(w, i - 1, j)) / (ht * ht) +
                      (node_vec(w, i, j + 1) - 2.0 * x + node_vec(w, i, j - 1)) / (hs * hs);
      const auto q = [n](const Vec& v) { return v.head(n); };
      const auto p = [n](const Vec& v) { return v.segment(n, n); };
      // d_tau a - d_t b = dlambda(w_tau, w_t); d_t a + d_tau b = -curl.
      const double re = p(b).dot(q(a)) - p(a).dot(q(b));
      const double im = lap[2 * n] - p(x).dot(q(lap)) - p(a).dot(q(a)) - p(b).dot(q(b));
      const double zeta2 = pi_norm2(a, n);
      alpha[g.node(i, j)] = std::hypot(0.5 * re - 0.5 * zeta2, 0.5 * im);
    }

  // Edge checks.
  std::vector<double> neumann(2 * (N + 1), 0.0), imag(2 * (N + 1), 0.0);
#pragma omp parallel for
  for (int i = 0; i <= N; ++i)
    for (int side = 0; side < 2; ++side) {
      const int j = side == 0 ? 0 : M;
      const LegendrianJetGraph& L = side == 0 ? w.lower() : w.upper();
      const PhasePoint x = w.node(i, j);
      const TangentVector wt = TangentVector::from_raw(d_t(w, i, j));
      double nm = 0.0;
      for (int k = 0; k < n; ++k) {
        const TangentVector e =
            legendrian_tangent(L, x.q(), Eigen::VectorXd::Unit(n, k));
        nm = std::max(nm, std::abs(triad_metric(x, wt, e)));
      }
      neumann[2 * i + side] = nm;
      if (i > 0 && i < N) imag[2 * i + side] = std::abs(lambda_of(x.raw(), d_tau(w, i, j), n));
    }

  IdentityChecks out;
  for (double v : energy) out.energy = std::max(out.energy, v);
  for (double v : alpha) out.alpha = std::max(out.alpha, v);
  for (double v : neumann) out.neumann = std::max(out.neumann, v);
  for (double v : imag) out.im_alpha_edge = std::max(out.im_alpha_edge, v);
  const ResidualField r = residual(w);
  out.zeta_l2 = r.zeta_l2();
  out.curl_l2 = r.curl_l2();
  out.T_ref = asymptotic_invariants(w).T_mean;

  const double h = std::max(ht, hs);
  const double tol = opts.scale * h * h;
  out.checks.push_back(Check::below("energy_identity", out.energy, tol));
  out.checks.push_back(Check::below("dbar_alpha", out.alpha, tol));
  out.checks.push_back(Check::below("neumann", out.neumann, tol));
  out.checks.push_back(Check::below("im_alpha_edges", out.im_alpha_edge, tol));
  return out;
}

double fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2) throw DomainError("order fit needs >= 2 points");
  const int m = static_cast<int>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < m; ++k) {
    const double x = std::log(h[k]), y = std::log(err[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace contacton::instanton
