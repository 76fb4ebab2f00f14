#pragma once

// Model contact manifold R^{2n+1} with coordinates (q, p, z) and contact form
// lambda = dz - p.dq.  dlambda = sum_i dq_i ^ dp_i.

#include <Eigen/Dense>

#include "contacton/errors.hpp"

namespace contacton {

// Coordinates stored contiguously as [q_1..q_n, p_1..p_n, z].
template <class Tag>
class Coords {
 public:
  Coords() = default;
  explicit Coords(int n) : n_(n), v_(Eigen::VectorXd::Zero(2 * n + 1)) {
    if (n < 1) throw DimensionError("dimension n must be >= 1");
  }
  Coords(const Eigen::VectorXd& q, const Eigen::VectorXd& p, double z)
      : Coords(static_cast<int>(q.size())) {
    if (p.size() != q.size()) throw DimensionError("q and p lengths differ");
    v_.head(n_) = q;
    v_.segment(n_, n_) = p;
    v_[2 * n_] = z;
  }
  static Coords from_raw(const Eigen::VectorXd& raw) {
    if (raw.size() < 3 || raw.size() % 2 == 0)
      throw DimensionError("raw coordinate vector must have odd length >= 3");
    Coords c(static_cast<int>(raw.size() - 1) / 2);
    c.v_ = raw;
    return c;
  }

  int dim() const { return n_; }

  auto q() { return v_.head(n_); }
  auto q() const { return v_.head(n_); }
  auto p() { return v_.segment(n_, n_); }
  auto p() const { return v_.segment(n_, n_); }
  double& z() { return v_[2 * n_]; }
  double z() const { return v_[2 * n_]; }

  double& q(int i) { return v_[i]; }
  double q(int i) const { return v_[i]; }
  double& p(int i) { return v_[n_ + i]; }
  double p(int i) const { return v_[n_ + i]; }

  Eigen::VectorXd& raw() { return v_; }
  const Eigen::VectorXd& raw() const { return v_; }

  bool all_finite() const { return v_.allFinite(); }

 private:
  int n_ = 0;
  Eigen::VectorXd v_;
};

struct PhaseTag;
struct TangentTag;
using PhasePoint = Coords<PhaseTag>;
// Components (dq, dp, dz) in the coordinate frame at some base point.
using TangentVector = Coords<TangentTag>;

inline TangentVector operator+(const TangentVector& a, const TangentVector& b) {
  return TangentVector::from_raw(a.raw() + b.raw());
}
inline TangentVector operator-(const TangentVector& a, const TangentVector& b) {
  return TangentVector::from_raw(a.raw() - b.raw());
}
inline TangentVector operator*(double s, const TangentVector& a) {
  return TangentVector::from_raw(s * a.raw());
}
inline PhasePoint operator+(const PhasePoint& x, const TangentVector& v) {
  return PhasePoint::from_raw(x.raw() + v.raw());
}

void require_same_dim(int a, int b);

// lambda_x(v) = dz - p.dq.
double lambda_eval(const PhasePoint& x, const TangentVector& v);
// dlambda(v, w) = sum_i (v.dq_i w.dp_i - v.dp_i w.dq_i); independent of x.
double dlambda(const TangentVector& v, const TangentVector& w);
TangentVector reeb(const PhasePoint& x);
// v - lambda(v) R.
TangentVector xi_project(const PhasePoint& x, const TangentVector& v);

// Frame of xi: D/dq_i = d/dq_i + p_i d/dz and d/dp_i.
TangentVector frame_dq(const PhasePoint& x, int i);
TangentVector frame_dp(const PhasePoint& x, int i);

// T*B-lift of the standard structure: D/dq_i -> d/dp_i, d/dp_i -> -D/dq_i,
// R -> 0.  The Reeb component of v is discarded first.
TangentVector lifted_J(const PhasePoint& x, const TangentVector& v);

// g = dlambda(v^pi, J w^pi) + lambda(v) lambda(w).
double triad_metric(const PhasePoint& x, const TangentVector& v,
                    const TangentVector& w);

// Triad metric as a (2n+1)x(2n+1) Gram matrix in the coordinate frame.
Eigen::MatrixXd triad_metric_matrix(const PhasePoint& x);

}  // namespace contacton
