#include "contacton/core.hpp"

#include <string>

namespace contacton {

void require_same_dim(int a, int b) {
  if (a != b)
    throw DimensionError("dimension mismatch: " + std::to_string(a) + " vs " +
                         std::to_string(b));
}

double lambda_eval(const PhasePoint& x, const TangentVector& v) {
  require_same_dim(x.dim(), v.dim());
  return v.z() - x.p().dot(v.q());
}

double dlambda(const TangentVector& v, const TangentVector& w) {
  require_same_dim(v.dim(), w.dim());
  return v.q().dot(w.p()) - v.p().dot(w.q());
}

TangentVector reeb(const PhasePoint& x) {
  TangentVector r(x.dim());
  r.z() = 1.0;
  return r;
}

TangentVector xi_project(const PhasePoint& x, const TangentVector& v) {
  TangentVector out = v;
  out.z() -= lambda_eval(x, v);
  return out;
}

TangentVector frame_dq(const PhasePoint& x, int i) {
  TangentVector e(x.dim());
  e.q(i) = 1.0;
  e.z() = x.p(i);
  return e;
}

TangentVector frame_dp(const PhasePoint& x, int i) {
  TangentVector e(x.dim());
  e.p(i) = 1.0;
  return e;
}

TangentVector lifted_J(const PhasePoint& x, const TangentVector& v) {
  require_same_dim(x.dim(), v.dim());
  // In the frame {D/dq, d/dp} a xi-vector has components (v.dq, v.dp).
  TangentVector out(x.dim());
  out.q() = -v.p();
  out.p() = v.q();
  out.z() = -x.p().dot(v.p());
  return out;
}

double triad_metric(const PhasePoint& x, const TangentVector& v,
                    const TangentVector& w) {
  const TangentVector vpi = xi_project(x, v);
  const TangentVector wpi = xi_project(x, w);
  return dlambda(vpi, lifted_J(x, wpi)) + lambda_eval(x, v) * lambda_eval(x, w);
}

Eigen::MatrixXd triad_metric_matrix(const PhasePoint& x) {
  const int n = x.dim();
  const int m = 2 * n + 1;
  Eigen::MatrixXd g(m, m);
  for (int a = 0; a < m; ++a) {
    TangentVector ea(n);
    ea.raw()[a] = 1.0;
    for (int b = 0; b < m; ++b) {
      TangentVector eb(n);
      eb.raw()[b] = 1.0;
      g(a, b) = triad_metric(x, ea, eb);
    }
  }
  return g;
}

}  // namespace contacton
