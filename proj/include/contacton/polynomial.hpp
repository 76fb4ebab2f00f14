#pragma once

#include <map>
#include <string>
#include <vector>

#include "contacton/core.hpp"

namespace contacton {

// Polynomial in (t, q_1..q_n, p_1..p_n, z).  Variable 0 is time; variable
// k >= 1 is raw state coordinate k-1.  Closed under +, *, d/dvar, so Jacobi
// brackets of polynomials can be formed exactly.
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  Polynomial() = default;
  explicit Polynomial(int n) : n_(n) {}

  static Polynomial constant(int n, double c);
  static Polynomial time(int n);
  // State coordinate by raw index (0..2n).
  static Polynomial coordinate(int n, int raw_index);
  static Polynomial q(int n, int i) { return coordinate(n, i); }
  static Polynomial p(int n, int i) { return coordinate(n, n + i); }
  static Polynomial z(int n) { return coordinate(n, 2 * n); }

  int dim() const { return n_; }
  int num_vars() const { return 2 * n_ + 2; }

  void add_term(const Exponents& e, double coef);
  const std::map<Exponents, double>& terms() const { return terms_; }

  double operator()(double t, const PhasePoint& x) const;
  double eval_raw(double t, const double* raw) const;

  // Derivative with respect to variable index (0 = t, k = raw coord k-1).
  Polynomial derivative(int var) const;
  Polynomial d_state(int raw_index) const { return derivative(raw_index + 1); }
  Polynomial d_time() const { return derivative(0); }

  bool time_dependent() const;
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  std::string to_string() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    Polynomial nb = b;
    nb *= -1.0;
    return a += nb;
  }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  void prune();

  int n_ = 0;
  std::map<Exponents, double> terms_;
};

}  // namespace contacton
