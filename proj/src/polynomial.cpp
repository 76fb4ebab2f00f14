#include "contacton/polynomial.hpp"

#include <cmath>
#include <sstream>

namespace contacton {

Polynomial Polynomial::constant(int n, double c) {
  Polynomial out(n);
  out.add_term(Exponents(2 * n + 2, 0), c);
  return out;
}

Polynomial Polynomial::time(int n) {
  Polynomial out(n);
  Exponents e(2 * n + 2, 0);
  e[0] = 1;
  out.add_term(e, 1.0);
  return out;
}

Polynomial Polynomial::coordinate(int n, int raw_index) {
  if (raw_index < 0 || raw_index > 2 * n)
    throw DimensionError("coordinate index out of range");
  Polynomial out(n);
  Exponents e(2 * n + 2, 0);
  e[raw_index + 1] = 1;
  out.add_term(e, 1.0);
  return out;
}

void Polynomial::add_term(const Exponents& e, double coef) {
  if (static_cast<int>(e.size()) != num_vars())
    throw DimensionError("exponent vector has wrong length");
  if (coef == 0.0) return;
  double& c = terms_[e];
  c += coef;
  if (c == 0.0) terms_.erase(e);
}

double Polynomial::eval_raw(double t, const double* raw) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = c;
    if (e[0] != 0) term *= std::pow(t, e[0]);
    for (int k = 1; k < num_vars(); ++k) {
      switch (e[k]) {
        case 0: break;
        case 1: term *= raw[k - 1]; break;
        case 2: term *= raw[k - 1] * raw[k - 1]; break;
        default: term *= std::pow(raw[k - 1], e[k]);
      }
    }
    sum += term;
  }
  return sum;
}

double Polynomial::operator()(double t, const PhasePoint& x) const {
  require_same_dim(n_, x.dim());
  return eval_raw(t, x.raw().data());
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial out(n_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    out.add_term(d, c * e[var]);
  }
  return out;
}

bool Polynomial::time_dependent() const {
  for (const auto& [e, c] : terms_)
    if (e[0] != 0) return true;
  return false;
}

int Polynomial::degree() const {
  int deg = 0;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int k : e) d += k;
    deg = std::max(deg, d);
  }
  return deg;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (n_ == 0) n_ = o.n_;
  if (o.n_ != 0) require_same_dim(n_, o.n_);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  for (auto& [e, c] : terms_) c *= s;
  prune();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  require_same_dim(a.n_, b.n_);
  Polynomial out(a.n_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Polynomial::Exponents e(ea.size());
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

void Polynomial::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0.0)
      it = terms_.erase(it);
    else
      ++it;
  }
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (int k = 0; k < num_vars(); ++k) {
      if (e[k] == 0) continue;
      os << "*";
      if (k == 0)
        os << "t";
      else if (k <= n_)
        os << "q" << k;
      else if (k <= 2 * n_)
        os << "p" << (k - n_);
      else
        os << "z";
      if (e[k] > 1) os << "^" << e[k];
    }
  }
  return os.str();
}

}  // namespace contacton
