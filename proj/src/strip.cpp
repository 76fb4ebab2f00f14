#include "contacton/strip.hpp"

#include <algorithm>
#include <cmath>

namespace contacton::instanton {

StripGrid StripGrid::make(double tau_min, double tau_max, int n_tau, int n_t) {
  StripGrid g{tau_min, tau_max, n_tau, n_t};
  g.validate();
  return g;
}

void StripGrid::validate() const {
  if (n_tau < 4 || n_t < 4) throw DomainError("strip grid needs n_tau, n_t >= 4");
  if (!(tau_max > tau_min)) throw DomainError("strip grid needs tau_max > tau_min");
}

std::string to_string(FarField f) {
  return f == FarField::Dirichlet ? "dirichlet" : "zero-tau-derivative";
}

FarField far_field_from_string(const std::string& s) {
  if (s == "dirichlet" || s == "dirichlet-to-chord") return FarField::Dirichlet;
  if (s == "zero-tau-derivative" || s == "neumann") return FarField::ZeroTauDerivative;
  throw Error("unknown far-field mode '" + s + "'");
}

StripMap::StripMap(StripGrid grid, int n, LegendrianJetGraph lower, LegendrianJetGraph upper,
                   FarField far_field)
    : grid_(grid),
      n_(n),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      far_field_(far_field) {
  grid_.validate();
  if (n < 1) throw DimensionError("dimension n must be >= 1");
  require_same_dim(n, lower_.dim());
  require_same_dim(n, upper_.dim());
  data_.assign(static_cast<std::size_t>(grid_.nodes()) * width(), 0.0);
  const Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
  for (int i = 0; i <= grid_.n_tau; ++i) {
    set_chart(i, 0, q);
    set_chart(i, grid_.n_t, q);
  }
}

StripMap StripMap::from_function(StripGrid grid, int n, LegendrianJetGraph lower,
                                 LegendrianJetGraph upper, FarField far_field,
                                 const NodeFn& f) {
  StripMap w(grid, n, std::move(lower), std::move(upper), far_field);
  for (int i = 0; i <= grid.n_tau; ++i)
    for (int j = 0; j <= grid.n_t; ++j) w.set_node(i, j, f(grid.tau(i), grid.t(j)));
  w.sync_far_field();
  return w;
}

PhasePoint StripMap::node(int i, int j) const {
  const double* r = raw(i, j);
  return PhasePoint::from_raw(Eigen::Map<const Eigen::VectorXd>(r, width()));
}

void StripMap::set_node(int i, int j, const PhasePoint& x) {
  require_same_dim(n_, x.dim());
  if (on_t_edge(j)) {
    set_chart(i, j, x.q());
    return;
  }
  Eigen::Map<Eigen::VectorXd>(raw(i, j), width()) = x.raw();
}

void StripMap::set_chart(int i, int j, const Eigen::VectorXd& q) {
  if (!on_t_edge(j)) throw DomainError("chart coordinates exist only on t-edges");
  const LegendrianJetGraph& L = j == 0 ? lower_ : upper_;
  Eigen::Map<Eigen::VectorXd>(raw(i, j), width()) = legendrian_point(L, q).raw();
}

void StripMap::sync_far_field() {
  if (far_field_ != FarField::ZeroTauDerivative) return;
  const int N = grid_.n_tau;
  std::copy(raw(N - 1, 0), raw(N - 1, 0) + (grid_.n_t + 1) * width(), raw(N, 0));
}

void StripMap::set_column(int i, const std::function<PhasePoint(double)>& f) {
  for (int j = 0; j <= grid_.n_t; ++j) set_node(i, j, f(grid_.t(j)));
}

double StripMap::boundary_defect() const {
  double m = 0.0;
  for (int i = 0; i <= grid_.n_tau; ++i) {
    m = std::max(m, legendrian_defect(lower_, node(i, 0)).norm());
    m = std::max(m, legendrian_defect(upper_, node(i, grid_.n_t)).norm());
  }
  return m;
}

double edge_lambda(const double* a, const double* b, int n) {
  double s = b[2 * n] - a[2 * n];
  for (int k = 0; k < n; ++k) s -= 0.5 * (a[n + k] + b[n + k]) * (b[k] - a[k]);
  return s;
}

namespace {

void cell_zeta(const StripMap& w, int i, int j, double* out) {
  const int n = w.dim();
  const double ht = w.grid().h_tau(), hs = w.grid().h_t();
  const double* a = w.raw(i, j);
  const double* b = w.raw(i + 1, j);
  const double* c = w.raw(i, j + 1);
  const double* d = w.raw(i + 1, j + 1);
  for (int k = 0; k < 2 * n; ++k) {
    const double dtau = ((b[k] - a[k]) + (d[k] - c[k])) / (2.0 * ht);
    const double dt = ((c[k] - a[k]) + (d[k] - b[k])) / (2.0 * hs);
    // Components: k < n is a q-slot, k >= n the matching p-slot.
    if (k < n) {
      out[k] += 0.5 * dtau;
      out[n + k] += 0.5 * dt;
    } else {
      out[k] += 0.5 * dtau;
      out[k - n] -= 0.5 * dt;
    }
  }
}

double node_curl(const StripMap& w, int i, int j) {
  const int n = w.dim();
  const double ht = w.grid().h_tau(), hs = w.grid().h_t();
  const double er = edge_lambda(w.raw(i, j), w.raw(i + 1, j), n);
  const double el = edge_lambda(w.raw(i - 1, j), w.raw(i, j), n);
  const double eu = edge_lambda(w.raw(i, j), w.raw(i, j + 1), n);
  const double ed = edge_lambda(w.raw(i, j - 1), w.raw(i, j), n);
  return -((er - el) / (ht * ht) + (eu - ed) / (hs * hs));
}

ResidualField make_field(const StripMap& w) {
  ResidualField r;
  r.grid = w.grid();
  r.n = w.dim();
  r.zeta.assign(static_cast<std::size_t>(w.grid().cells()) * 2 * w.dim(), 0.0);
  r.curl.assign(w.grid().nodes(), 0.0);
  return r;
}

}  // namespace

ResidualField residual(const StripMap& w) {
  ResidualField r = make_field(w);
  const StripGrid& g = w.grid();
  const int n2 = 2 * w.dim();
#pragma omp parallel for
  for (int c = 0; c < g.cells(); ++c) cell_zeta(w, c / g.n_t, c % g.n_t, &r.zeta[c * n2]);
#pragma omp parallel for
  for (int i = 1; i < g.n_tau; ++i)
    for (int j = 1; j < g.n_t; ++j) r.curl[g.node(i, j)] = node_curl(w, i, j);
  return r;
}

ResidualField residual_serial(const StripMap& w) {
  ResidualField r = make_field(w);
  const StripGrid& g = w.grid();
  const int n2 = 2 * w.dim();
  for (int c = 0; c < g.cells(); ++c) cell_zeta(w, c / g.n_t, c % g.n_t, &r.zeta[c * n2]);
  for (int i = 1; i < g.n_tau; ++i)
    for (int j = 1; j < g.n_t; ++j) r.curl[g.node(i, j)] = node_curl(w, i, j);
  return r;
}

double ResidualField::zeta_l2() const {
  double s = 0.0;
  for (double v : zeta) s += v * v;
  return std::sqrt(s * grid.h_tau() * grid.h_t());
}

double ResidualField::zeta_linf() const {
  const int n2 = 2 * n;
  double m = 0.0;
  for (std::size_t c = 0; c < zeta.size(); c += n2) {
    double s = 0.0;
    for (int k = 0; k < n2; ++k) s += zeta[c + k] * zeta[c + k];
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

double ResidualField::curl_l2() const {
  double s = 0.0;
  for (double v : curl) s += v * v;
  return std::sqrt(s * grid.h_tau() * grid.h_t());
}

double ResidualField::curl_linf() const {
  double m = 0.0;
  for (double v : curl) m = std::max(m, std::abs(v));
  return m;
}

double ResidualField::l2() const { return std::hypot(zeta_l2(), curl_l2()); }

double objective(const ResidualField& r) {
  const double a = r.zeta_l2(), b = r.curl_l2();
  return a * a + b * b;
}

StripMap reeb_chord_strip(const StripGrid& grid, const Eigen::VectorXd& q0, double c) {
  const int n = static_cast<int>(q0.size());
  return StripMap::from_function(
      grid, n, LegendrianJetGraph::zero_section(n), LegendrianJetGraph::quadratic(n, c, 0.0),
      FarField::Dirichlet, [&](double, double t) {
        return PhasePoint(q0, Eigen::VectorXd::Zero(n), c * t);
      });
}

double Sector::beta() const { return std::atan(a); }

LegendrianJetGraph Sector::lower() const { return LegendrianJetGraph::zero_section(1); }

LegendrianJetGraph Sector::upper() const { return LegendrianJetGraph::quadratic(1, 0.0, -a); }

PhasePoint Sector::operator()(double tau, double t) const {
  const double b = beta();
  const double m = r * std::exp(-b * tau);
  const double q = m * std::cos(b * t);
  const double p = -m * std::sin(b * t);
  PhasePoint x(1);
  x.q(0) = q;
  x.p(0) = p;
  x.z() = 0.5 * q * p;
  return x;
}

double Sector::pi_energy(double tau_min, double tau_max) const {
  const double b = beta();
  return 0.5 * b * r * r * (std::exp(-2.0 * b * tau_min) - std::exp(-2.0 * b * tau_max));
}

double Sector::action(double tau_max) const {
  const double b = beta();
  return -0.5 * b * r * r * std::exp(-2.0 * b * tau_max);
}

StripMap sector_strip(const StripGrid& grid, const Sector& s) {
  return StripMap::from_function(grid, 1, s.lower(), s.upper(), FarField::Dirichlet,
                                 [&](double tau, double t) { return s(tau, t); });
}

}  // namespace contacton::instanton
