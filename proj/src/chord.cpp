#include "contacton/chord.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

namespace contacton::action {

namespace {

// t1 H(t0 + s t1, x): its flow on s in [0, 1] is the flow of H on [t0, t0 + t1].
HamiltonianField rescaled(const HamiltonianField& H, double t0, double t1) {
  return HamiltonianField(
      H.name(), H.dim(),
      [H, t0, t1](double s, const PhasePoint& x) { return t1 * H(t0 + s * t1, x); },
      [H, t0, t1](double s, const PhasePoint& x) {
        return Eigen::VectorXd(t1 * H.gradient(t0 + s * t1, x));
      },
      [H, t0, t1](double s, const PhasePoint& x) {
        return Eigen::MatrixXd(t1 * H.hessian(t0 + s * t1, x));
      },
      true);
}

ContactPath shoot(const HamiltonianField& H, const LegendrianJetGraph& L0,
                  const Eigen::VectorXd& q0, double t1, int steps, double t0) {
  const PhasePoint x0 = legendrian_point(L0, q0);
  return ham::flow(rescaled(H, t0, t1), x0, 1.0, steps);
}

Eigen::MatrixXd shooting_jacobian(const HamiltonianField& H, const LegendrianJetGraph& L0,
                                  const LegendrianJetGraph& L1, const Eigen::VectorXd& u,
                                  const ChordOptions& o) {
  const int n = static_cast<int>(u.size()) - 1;
  Eigen::MatrixXd J(n + 1, n + 1);
  for (int a = 0; a <= n; ++a) {
    Eigen::VectorXd up = u, um = u;
    const double e = o.fd_step * std::max(1.0, std::abs(u[a]));
    up[a] += e;
    um[a] -= e;
    J.col(a) = (shooting_defect(H, L0, L1, up.head(n), up[n], o.steps, o.t0) -
                shooting_defect(H, L0, L1, um.head(n), um[n], o.steps, o.t0)) /
               (2.0 * e);
  }
  return J;
}

double condition_number(const Eigen::JacobiSVD<Eigen::MatrixXd>& svd) {
  const auto& s = svd.singularValues();
  const double smin = s[s.size() - 1];
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return s[0] / smin;
}

}  // namespace

Eigen::VectorXd shooting_defect(const HamiltonianField& H, const LegendrianJetGraph& L0,
                                const LegendrianJetGraph& L1, const Eigen::VectorXd& q0,
                                double t1, int steps, double t0) {
  const ContactPath path = shoot(H, L0, q0, t1, steps, t0);
  return legendrian_defect(L1, path.x.back());
}

Chord find_chord(const HamiltonianField& H, const LegendrianJetGraph& L0,
                 const LegendrianJetGraph& L1, const Eigen::VectorXd& q0_seed,
                 double t1_seed, const ChordOptions& opts) {
  const int n = H.dim();
  require_same_dim(n, L0.dim());
  require_same_dim(n, L1.dim());
  require_same_dim(n, static_cast<int>(q0_seed.size()));
  if (!L0.in_box(q0_seed)) throw DomainError("chord seed outside the chart box of " + L0.label());

  Eigen::VectorXd u(n + 1);
  u.head(n) = q0_seed;
  u[n] = t1_seed;
  auto F = [&](const Eigen::VectorXd& v) {
    return shooting_defect(H, L0, L1, v.head(n), v[n], opts.steps, opts.t0);
  };

  Eigen::VectorXd f = F(u);
  double fn = f.norm();
  int it = 0;
  for (; it < opts.max_iterations && !(fn < opts.tolerance); ++it) {
    const Eigen::MatrixXd J = shooting_jacobian(H, L0, L1, u, opts);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    Eigen::VectorXd sinv = Eigen::VectorXd::Zero(s.size());
    for (int k = 0; k < s.size(); ++k)
      if (s[k] > 1e-12 * s[0]) sinv[k] = 1.0 / s[k];
    const Eigen::VectorXd step =
        -(svd.matrixV() * sinv.asDiagonal() * svd.matrixU().transpose() * f);

    double mu = 1.0;
    Eigen::VectorXd trial, ft;
    double ftn = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= opts.max_halvings; ++k, mu *= 0.5) {
      trial = u + mu * step;
      if (!L0.in_box(trial.head(n))) continue;
      try {
        ft = F(trial);
        ftn = ft.norm();
      } catch (const BlowUpError&) {
        ftn = std::numeric_limits<double>::infinity();
      }
      if (ftn < fn) break;
    }
    if (!std::isfinite(ftn)) throw SolverError("chord Newton step left the domain");
    u = trial;
    f = ft;
    fn = ftn;
    if (u[n] <= opts.t1_floor)
      throw SolverError("chord duration collapsed to " + std::to_string(u[n]) +
                        " (degenerate)");
  }
  if (!(fn < opts.tolerance))
    throw SolverError("chord Newton did not converge; defect " + std::to_string(fn));
  if (u[n] <= opts.t1_floor)
    throw SolverError("chord duration " + std::to_string(u[n]) + " is degenerate");

  Chord c;
  c.q0 = u.head(n);
  c.x0 = legendrian_point(L0, c.q0);
  c.t1 = u[n];
  c.iterations = it;
  c.defect = f;
  ContactPath path = shoot(H, L0, c.q0, c.t1, opts.steps, opts.t0);
  for (auto& t : path.t) t = opts.t0 + t * c.t1;
  path.t.back() = opts.t0 + c.t1;
  c.path = std::move(path);
  c.margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < c.path.size(); ++k)
    c.margin = std::min(c.margin, std::abs(H(c.path.t[k], c.path.x[k])));
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(shooting_jacobian(H, L0, L1, u, opts));
  c.condition = condition_number(svd);
  return c;
}

std::string ChordReport::flags() const {
  std::string s;
  for (const auto& c : checks)
    if (!c.pass) s += (s.empty() ? "" : "|") + c.name;
  if (!nondegenerate && s.find("nondegenerate") == std::string::npos)
    s += (s.empty() ? "" : "|") + std::string("degenerate");
  return s.empty() ? "ok" : s;
}

ChordReport chord_report(const Chord& chord, const HamiltonianField& H,
                         const LegendrianJetGraph& L0, const LegendrianJetGraph& L1,
                         const ChordThresholds& th, const ChordOptions& opts) {
  ChordReport r;
  r.duration = chord.t1;
  r.action = action(H, chord.path);
  r.defect = chord.defect.norm();
  r.reverify_defect =
      shooting_defect(H, L0, L1, chord.q0, chord.t1, 2 * opts.steps, opts.t0).norm();
  r.margin = chord.margin;
  r.condition = chord.condition;
  r.transversal = r.margin > th.margin;
  r.nondegenerate = std::isfinite(r.condition) && r.condition < th.condition;

  r.checks.push_back(Check::below("defect", r.defect, th.defect));
  r.checks.push_back(Check::below("reverify", r.reverify_defect, th.reverify));
  r.checks.push_back(Check::below("action", std::abs(r.action), th.action));
  r.checks.push_back(Check{"transversal", r.margin, th.margin, r.transversal});
  Check nd{"nondegenerate", r.condition, th.condition, r.nondegenerate};
  if (th.require_nondegenerate || r.nondegenerate) r.checks.push_back(nd);
  return r;
}

std::vector<ChordRecord> chord_sweep(const HamiltonianField& H, const LegendrianJetGraph& L0,
                                     const LegendrianJetGraph& L1,
                                     const std::vector<ChordSeed>& seeds,
                                     const ChordOptions& opts, const ChordThresholds& th) {
  std::vector<ChordRecord> out(seeds.size());
  const long m = static_cast<long>(seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < m; ++k) {
    ChordRecord& rec = out[k];
    rec.seed = seeds[k];
    try {
      const Chord c = find_chord(H, L0, L1, seeds[k].q0, seeds[k].t1, opts);
      rec.report = chord_report(c, H, L0, L1, th, opts);
      rec.found = true;
    } catch (const Error& e) {
      rec.error = e.what();
    }
  }
  return out;
}

}  // namespace contacton::action
