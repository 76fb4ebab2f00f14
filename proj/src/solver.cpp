#include "contacton/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace contacton::instanton {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

enum class Slot { Fixed, Interior, Chart };

// Unknown layout for a least-squares problem on a strip map.  Interior nodes
// carry (q, p) or (q, p, z); t-edge nodes carry their chart q; the tau_max
// column aliases its neighbour under the zero-tau-derivative closure.
class StripProblem {
 public:
  StripProblem(const StripMap& w, bool use_curl, bool free_z)
      : grid_(w.grid()), n_(w.dim()), m_(w.width()), use_curl_(use_curl), free_z_(free_z) {
    const int N = grid_.n_tau;
    kind_.assign(grid_.nodes(), Slot::Fixed);
    offset_.assign(grid_.nodes(), -1);
    owner_.resize(grid_.nodes());
    int next = 0;
    for (int i = 0; i <= N; ++i)
      for (int j = 0; j <= grid_.n_t; ++j) {
        const int id = grid_.node(i, j);
        owner_[id] = id;
        if (i == 0) continue;
        if (i == N) {
          if (w.far_field() == FarField::ZeroTauDerivative) owner_[id] = grid_.node(N - 1, j);
          continue;
        }
        if (w.on_t_edge(j)) {
          kind_[id] = Slot::Chart;
          offset_[id] = next;
          next += n_;
        } else {
          kind_[id] = Slot::Interior;
          offset_[id] = next;
          next += free_z_ ? m_ : 2 * n_;
        }
      }
    unknowns_ = next;
    if (w.far_field() == FarField::ZeroTauDerivative)
      for (int j = 0; j <= grid_.n_t; ++j) {
        const int id = grid_.node(N, j);
        kind_[id] = kind_[owner_[id]];
        offset_[id] = offset_[owner_[id]];
      }
  }

  int unknowns() const { return unknowns_; }
  int rows() const {
    return grid_.cells() * 2 * n_ + (use_curl_ ? (grid_.n_tau - 1) * (grid_.n_t - 1) : 0);
  }

  Eigen::VectorXd pack(const StripMap& w) const {
    Eigen::VectorXd u(unknowns_);
    for (int i = 0; i <= grid_.n_tau; ++i)
      for (int j = 0; j <= grid_.n_t; ++j) {
        const int id = grid_.node(i, j);
        if (owner_[id] != id || kind_[id] == Slot::Fixed) continue;
        const double* x = w.raw(i, j);
        const int k = kind_[id] == Slot::Chart ? n_ : (free_z_ ? m_ : 2 * n_);
        for (int a = 0; a < k; ++a) u[offset_[id] + a] = x[a];
      }
    return u;
  }

  void unpack(const Eigen::VectorXd& u, StripMap& w) const {
    for (int i = 0; i <= grid_.n_tau; ++i)
      for (int j = 0; j <= grid_.n_t; ++j) {
        const int id = grid_.node(i, j);
        if (owner_[id] != id || kind_[id] == Slot::Fixed) continue;
        if (kind_[id] == Slot::Chart) {
          w.set_chart(i, j, u.segment(offset_[id], n_));
        } else {
          double* x = w.raw(i, j);
          const int k = free_z_ ? m_ : 2 * n_;
          for (int a = 0; a < k; ++a) x[a] = u[offset_[id] + a];
        }
      }
    w.sync_far_field();
  }

  Eigen::VectorXd residual(const StripMap& w) const {
    const ResidualField r = instanton::residual(w);
    const double s = std::sqrt(grid_.h_tau() * grid_.h_t());
    Eigen::VectorXd out(rows());
    int row = 0;
    for (double v : r.zeta) out[row++] = s * v;
    if (use_curl_)
      for (int i = 1; i < grid_.n_tau; ++i)
        for (int j = 1; j < grid_.n_t; ++j) out[row++] = s * r.curl[grid_.node(i, j)];
    return out;
  }

  SpMat jacobian(const StripMap& w) const {
    const double s = std::sqrt(grid_.h_tau() * grid_.h_t());
    const double ht = grid_.h_tau(), hs = grid_.h_t();
    std::vector<Eigen::MatrixXd> blocks(grid_.nodes());
    for (int i = 0; i <= grid_.n_tau; ++i)
      for (int j = 0; j <= grid_.n_t; ++j) blocks[grid_.node(i, j)] = node_block(w, i, j);

    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(rows()) * 16);
    auto push = [&](int row, int i, int j, const Eigen::VectorXd& grad) {
      const int id = grid_.node(i, j);
      if (kind_[id] == Slot::Fixed) return;
      const Eigen::RowVectorXd c = grad.transpose() * blocks[id];
      for (int a = 0; a < c.size(); ++a)
        if (c[a] != 0.0) trip.emplace_back(row, offset_[id] + a, c[a]);
    };

    const int ci[4] = {0, 1, 0, 1}, cj[4] = {0, 0, 1, 1};
    const double dtau[4] = {-1.0, 1.0, -1.0, 1.0}, dt[4] = {-1.0, -1.0, 1.0, 1.0};
    int row = 0;
    for (int i = 0; i < grid_.n_tau; ++i)
      for (int j = 0; j < grid_.n_t; ++j) {
        for (int k = 0; k < n_; ++k) {
          for (int c = 0; c < 4; ++c) {
            const double a = 0.5 * s * dtau[c] / (2.0 * ht);
            const double b = 0.5 * s * dt[c] / (2.0 * hs);
            Eigen::VectorXd gq = Eigen::VectorXd::Zero(m_), gp = Eigen::VectorXd::Zero(m_);
            gq[k] = a;
            gq[n_ + k] = -b;
            gp[n_ + k] = a;
            gp[k] = b;
            push(row + k, i + ci[c], j + cj[c], gq);
            push(row + n_ + k, i + ci[c], j + cj[c], gp);
          }
        }
        row += 2 * n_;
      }
    if (use_curl_) {
      for (int i = 1; i < grid_.n_tau; ++i)
        for (int j = 1; j < grid_.n_t; ++j) {
          struct Edge { int ai, aj, bi, bj; double k; };
          const Edge edges[4] = {{i, j, i + 1, j, -s / (ht * ht)},
                                 {i - 1, j, i, j, s / (ht * ht)},
                                 {i, j, i, j + 1, -s / (hs * hs)},
                                 {i, j - 1, i, j, s / (hs * hs)}};
          for (const Edge& e : edges) {
            Eigen::VectorXd ga, gb;
            edge_gradient(w.raw(e.ai, e.aj), w.raw(e.bi, e.bj), ga, gb);
            push(row, e.ai, e.aj, e.k * ga);
            push(row, e.bi, e.bj, e.k * gb);
          }
          ++row;
        }
    }
    SpMat J(rows(), unknowns_);
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
  }

 private:
  // d(node raw coordinates) / d(node unknowns).
  Eigen::MatrixXd node_block(const StripMap& w, int i, int j) const {
    const int id = grid_.node(i, j);
    if (kind_[id] == Slot::Fixed) return {};
    if (kind_[id] == Slot::Interior) {
      const int k = free_z_ ? m_ : 2 * n_;
      return Eigen::MatrixXd::Identity(m_, k);
    }
    const LegendrianJetGraph& L = j == 0 ? w.lower() : w.upper();
    const Eigen::VectorXd q = Eigen::Map<const Eigen::VectorXd>(w.raw(i, j), n_);
    Eigen::MatrixXd B(m_, n_);
    B.topRows(n_).setIdentity();
    B.middleRows(n_, n_) = L.hessian(q);
    B.row(2 * n_) = L.gradient(q).transpose();
    return B;
  }

  void edge_gradient(const double* a, const double* b, Eigen::VectorXd& ga,
                     Eigen::VectorXd& gb) const {
    ga = Eigen::VectorXd::Zero(m_);
    gb = Eigen::VectorXd::Zero(m_);
    for (int k = 0; k < n_; ++k) {
      const double pbar = 0.5 * (a[n_ + k] + b[n_ + k]);
      const double dq = b[k] - a[k];
      ga[k] = pbar;
      gb[k] = -pbar;
      ga[n_ + k] = -0.5 * dq;
      gb[n_ + k] = -0.5 * dq;
    }
    ga[2 * n_] = -1.0;
    gb[2 * n_] = 1.0;
  }

  StripGrid grid_;
  int n_, m_;
  bool use_curl_, free_z_;
  std::vector<Slot> kind_;
  std::vector<int> offset_;
  std::vector<int> owner_;
  int unknowns_ = 0;
};

// Solves (J^T J + mu diag(J^T J)) d = -J^T r.
bool normal_step(const SpMat& J, const Eigen::VectorXd& r, double mu, Eigen::VectorXd& d) {
  SpMat A = SpMat(J.transpose()) * J;
  if (mu > 0.0)
    for (int k = 0; k < A.outerSize(); ++k) A.coeffRef(k, k) *= (1.0 + mu);
  Eigen::SimplicialLDLT<SpMat> ldlt(A);
  if (ldlt.info() != Eigen::Success) return false;
  d = ldlt.solve(-(J.transpose() * r));
  return ldlt.info() == Eigen::Success && d.allFinite();
}

RelaxResult relax_gauss_newton(const StripMap& w0, const RelaxOptions& o) {
  const StripProblem P(w0, true, true);
  RelaxResult res{w0, {}, 0, 0.0, false, false, {}};
  Eigen::VectorXd u = P.pack(res.w);
  Eigen::VectorXd r = P.residual(res.w);
  double F = r.squaredNorm();
  res.objective.push_back(F);
  double mu = 1e-6;
  for (int it = 0; it < o.max_iterations; ++it) {
    const SpMat J = P.jacobian(res.w);
    res.gradient_norm = 2.0 * (J.transpose() * r).norm();
    if (res.gradient_norm < o.tolerance) {
      res.converged = true;
      return res;
    }
    bool accepted = false;
    for (int attempt = 0; attempt < 12 && !accepted; ++attempt, mu *= 10.0) {
      Eigen::VectorXd d;
      if (!normal_step(J, r, mu, d)) continue;
      StripMap trial = res.w;
      P.unpack(u + d, trial);
      const Eigen::VectorXd rt = P.residual(trial);
      const double Ft = rt.squaredNorm();
      if (std::isfinite(Ft) && Ft < F) {
        accepted = true;
        const double drop = F - Ft;
        res.w = std::move(trial);
        u += d;
        r = rt;
        F = Ft;
        res.objective.push_back(F);
        res.iterations = it + 1;
        mu = std::max(mu / 30.0, 1e-12);
        if (drop < o.stagnation) {
          const double g = 2.0 * (P.jacobian(res.w).transpose() * r).norm();
          res.gradient_norm = g;
          if (g < o.tolerance) {
            res.converged = true;
          } else {
            res.stagnated = true;
            res.warning = "objective decrease below stagnation threshold";
          }
          return res;
        }
      }
    }
    if (!accepted) {
      res.stagnated = true;
      res.warning = "no decreasing step found";
      return res;
    }
  }
  res.gradient_norm = 2.0 * (P.jacobian(res.w).transpose() * r).norm();
  res.converged = res.gradient_norm < o.tolerance;
  if (!res.converged) res.warning = "iteration limit reached";
  return res;
}

RelaxResult relax_gradient(const StripMap& w0, const RelaxOptions& o) {
  const StripProblem P(w0, true, true);
  RelaxResult res{w0, {}, 0, 0.0, false, false, {}};
  Eigen::VectorXd u = P.pack(res.w);
  Eigen::VectorXd r = P.residual(res.w);
  double F = r.squaredNorm();
  res.objective.push_back(F);
  Eigen::VectorXd g = 2.0 * (P.jacobian(res.w).transpose() * r);
  Eigen::VectorXd d = -g;
  double alpha = 1.0;
  for (int it = 0; it < o.max_iterations; ++it) {
    res.gradient_norm = g.norm();
    if (res.gradient_norm < o.tolerance) {
      res.converged = true;
      return res;
    }
    double slope = g.dot(d);
    if (slope >= 0.0) {
      d = -g;
      slope = -g.squaredNorm();
    }
    bool accepted = false;
    StripMap trial = res.w;
    Eigen::VectorXd rt;
    double Ft = F;
    for (int k = 0; k < 60; ++k, alpha *= 0.5) {
      P.unpack(u + alpha * d, trial);
      rt = P.residual(trial);
      Ft = rt.squaredNorm();
      if (std::isfinite(Ft) && Ft <= F + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.stagnated = true;
      res.warning = "line search failed";
      return res;
    }
    const double drop = F - Ft;
    u += alpha * d;
    res.w = std::move(trial);
    r = rt;
    F = Ft;
    res.objective.push_back(F);
    res.iterations = it + 1;
    const Eigen::VectorXd gn = 2.0 * (P.jacobian(res.w).transpose() * r);
    const double beta = std::max(0.0, gn.dot(gn - g) / g.squaredNorm());
    d = -gn + beta * d;
    g = gn;
    alpha = std::min(1.0, 4.0 * alpha);
    if (drop < o.stagnation && g.norm() >= o.tolerance) {
      res.gradient_norm = g.norm();
      res.stagnated = true;
      res.warning = "objective decrease below stagnation threshold";
      return res;
    }
  }
  res.gradient_norm = g.norm();
  res.converged = res.gradient_norm < o.tolerance;
  if (!res.converged) res.warning = "iteration limit reached";
  return res;
}

}  // namespace

RelaxMethod relax_method_from_string(const std::string& s) {
  if (s == "gauss-newton" || s == "lm") return RelaxMethod::GaussNewton;
  if (s == "gradient" || s == "descent") return RelaxMethod::Gradient;
  throw Error("unknown relax method '" + s + "'");
}

RelaxResult relax(const StripMap& w0, const RelaxOptions& opts) {
  if (!(opts.tolerance > 0.0)) throw DomainError("relax tolerance must be positive");
  return opts.method == RelaxMethod::GaussNewton ? relax_gauss_newton(w0, opts)
                                                 : relax_gradient(w0, opts);
}

Jet1Result solve_jet1(const LegendrianJetGraph& L0, const LegendrianJetGraph& L1,
                      const StripGrid& grid, const StripMap::NodeFn& edge_data,
                      const Jet1Options& opts) {
  grid.validate();
  const int n = L0.dim();
  require_same_dim(n, L1.dim());
  const bool dirichlet = opts.far_field == FarField::Dirichlet;

  // Initial guess: linear in tau between the tau-edge columns.
  std::vector<PhasePoint> left(grid.n_t + 1), right(grid.n_t + 1);
  for (int j = 0; j <= grid.n_t; ++j) {
    left[j] = edge_data(grid.tau_min, grid.t(j));
    right[j] = dirichlet ? edge_data(grid.tau_max, grid.t(j)) : left[j];
  }
  StripMap w(grid, n, L0, L1, opts.far_field);
  for (int i = 0; i <= grid.n_tau; ++i) {
    const double th = static_cast<double>(i) / grid.n_tau;
    for (int j = 0; j <= grid.n_t; ++j) {
      const PhasePoint x = i == 0 ? left[j]
                           : (i == grid.n_tau && dirichlet)
                               ? right[j]
                               : PhasePoint::from_raw((1.0 - th) * left[j].raw() +
                                                      th * right[j].raw());
      w.set_node(i, j, x);
    }
  }
  w.sync_far_field();

  // Stage one: v by Gauss-Newton on the box CR equations.
  Jet1Result res;
  {
    const StripProblem P(w, false, false);
    Eigen::VectorXd u = P.pack(w);
    for (int it = 0; it < opts.max_iterations; ++it) {
      const Eigen::VectorXd r = P.residual(w);
      const SpMat J = P.jacobian(w);
      Eigen::VectorXd d;
      if (!normal_step(J, r, 0.0, d) && !normal_step(J, r, 1e-12, d))
        throw SolverError("Cauchy-Riemann least-squares system is singular");
      u += d;
      P.unpack(u, w);
      res.v_iterations = it + 1;
      if (d.lpNorm<Eigen::Infinity>() < opts.tolerance) break;
    }
    res.v_residual = P.residual(w).norm();
  }

  // Stage two: z from the five-point equation curl = 0 at interior nodes.
  {
    const int N = grid.n_tau, M = grid.n_t;
    std::vector<int> zid(grid.nodes(), -1);
    int next = 0;
    for (int i = 1; i < N; ++i)
      for (int j = 1; j < M; ++j) zid[grid.node(i, j)] = next++;
    if (!dirichlet)
      for (int j = 1; j < M; ++j) zid[grid.node(N, j)] = zid[grid.node(N - 1, j)];

    const double ht = grid.h_tau(), hs = grid.h_t();
    std::vector<Triplet> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(next);
    for (int i = 1; i < N; ++i)
      for (int j = 1; j < M; ++j) {
        const int row = zid[grid.node(i, j)];
        struct Edge { int ai, aj, bi, bj; double k; };
        // Row is -sum k E with E = z_B - z_A - pbar.dq, i.e. +curl.
        const Edge edges[4] = {{i, j, i + 1, j, 1.0 / (ht * ht)},
                               {i - 1, j, i, j, -1.0 / (ht * ht)},
                               {i, j, i, j + 1, 1.0 / (hs * hs)},
                               {i, j - 1, i, j, -1.0 / (hs * hs)}};
        for (const Edge& e : edges) {
          const double* a = w.raw(e.ai, e.aj);
          const double* b = w.raw(e.bi, e.bj);
          double known = 0.0;
          for (int k = 0; k < n; ++k) known += 0.5 * (a[n + k] + b[n + k]) * (b[k] - a[k]);
          rhs[row] -= e.k * known;
          const int ia = zid[grid.node(e.ai, e.aj)], ib = zid[grid.node(e.bi, e.bj)];
          if (ib >= 0) trip.emplace_back(row, ib, -e.k);
          else rhs[row] += e.k * b[2 * n];
          if (ia >= 0) trip.emplace_back(row, ia, e.k);
          else rhs[row] -= e.k * a[2 * n];
        }
      }
    SpMat A(next, next);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<SpMat> ldlt(A);
    if (ldlt.info() != Eigen::Success)
      throw SolverError("Poisson system for z could not be factored");
    const Eigen::VectorXd z = ldlt.solve(rhs);
    if (ldlt.info() != Eigen::Success || !z.allFinite())
      throw SolverError("Poisson solve for z failed");
    for (int i = 1; i < N; ++i)
      for (int j = 1; j < M; ++j) w.raw(i, j)[2 * n] = z[zid[grid.node(i, j)]];
    w.sync_far_field();
  }
  res.w = std::move(w);
  return res;
}

void apply_chord_far_field(StripMap& w, const action::Chord& chord) {
  require_same_dim(w.dim(), chord.x0.dim());
  const PhasePoint x0 = chord.x0;
  const double t1 = chord.t1;
  w.set_column(w.grid().n_tau, [&](double t) {
    PhasePoint x = x0;
    x.z() += t * t1;
    return x;
  });
}

action::Chord far_field_chord(const LegendrianJetGraph& L0, const LegendrianJetGraph& L1,
                              const Eigen::VectorXd& q_seed, double t_seed) {
  const HamiltonianField reeb = ScalarField::constant(L0.dim(), -1.0);
  return action::find_chord(reeb, L0, L1, q_seed, t_seed);
}

}  // namespace contacton::instanton
