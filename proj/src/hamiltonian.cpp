#include "contacton/hamiltonian.hpp"

#include <algorithm>
#include <cctype>

namespace contacton::ham {

TangentVector hamiltonian_vf(const PhasePoint& x, double value, const Eigen::VectorXd& grad) {
  const int n = x.dim();
  if (grad.size() != 2 * n + 1) throw DimensionError("gradient has wrong length");
  const auto Hq = grad.head(n);
  const auto Hp = grad.segment(n, n);
  const double Hz = grad[2 * n];
  TangentVector X(n);
  X.q() = Hp;
  X.p() = -(Hq + x.p() * Hz);
  X.z() = x.p().dot(Hp) - value;
  return X;
}

TangentVector hamiltonian_vf(const HamiltonianField& H, double t, const PhasePoint& x) {
  const Eigen::VectorXd g = H.gradient(t, x);
  if (!g.allFinite()) throw SolverError("gradient evaluation failed for " + H.name());
  return hamiltonian_vf(x, H(t, x), g);
}

Eigen::MatrixXd hamiltonian_vf_jacobian(const HamiltonianField& H, double t,
                                        const PhasePoint& x) {
  const int n = x.dim();
  const int m = 2 * n + 1;
  const Eigen::VectorXd g = H.gradient(t, x);
  const Eigen::MatrixXd h = H.hessian(t, x);
  const int iz = 2 * n;
  Eigen::MatrixXd J(m, m);
  for (int i = 0; i < n; ++i) {
    J.row(i) = h.row(n + i);
    J.row(n + i) = -(h.row(i) + x.p(i) * h.row(iz));
    J(n + i, n + i) -= g[iz];
  }
  Eigen::RowVectorXd rz = -g.transpose();
  for (int j = 0; j < n; ++j) {
    rz += x.p(j) * h.row(n + j);
    rz[n + j] += g[n + j];
  }
  J.row(iz) = rz;
  return J;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// Split on '+' that starts a new atom (not an exponent sign like 1e+3).
std::vector<std::string> split_atoms(const std::string& spec) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const char c = spec[i];
    const bool exponent_sign =
        i > 0 && (spec[i - 1] == 'e' || spec[i - 1] == 'E') && i >= 2 &&
        std::isdigit(static_cast<unsigned char>(spec[i - 2]));
    if (c == '+' && !exponent_sign) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_number(const std::string& s, const std::string& atom) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw DomainError("bad number in Hamiltonian atom '" + atom + "'");
  }
}

int parse_index(const std::string& s, int n, const std::string& atom) {
  try {
    const int i = std::stoi(s);
    if (i < 1 || i > n) throw std::out_of_range("index");
    return i - 1;
  } catch (const std::exception&) {
    throw DomainError("bad coordinate index in '" + atom + "'");
  }
}

Polynomial parse_atom(const std::string& atom, int n) {
  if (atom == "reeb") return Polynomial::constant(n, -1.0);
  const auto colon = atom.find(':');
  if (colon == std::string::npos) throw DomainError("unknown Hamiltonian '" + atom + "'");
  const std::string kind = atom.substr(0, colon);
  const std::string arg = trim(atom.substr(colon + 1));
  if (kind == "const") return Polynomial::constant(n, parse_number(arg, atom));
  if (kind == "coord") {
    if (arg == "z") return Polynomial::z(n);
    if (arg == "t") return Polynomial::time(n);
    if (arg.size() >= 2 && arg[0] == 'q') return Polynomial::q(n, parse_index(arg.substr(1), n, atom));
    if (arg.size() >= 2 && arg[0] == 'p') return Polynomial::p(n, parse_index(arg.substr(1), n, atom));
    throw DomainError("unknown coordinate in '" + atom + "'");
  }
  if (kind == "quadratic") {
    const double a = parse_number(arg, atom);
    Polynomial out(n);
    for (int i = 0; i < n; ++i) out += 0.5 * a * (Polynomial::q(n, i) * Polynomial::q(n, i));
    return out;
  }
  throw DomainError("unknown Hamiltonian kind '" + kind + "'");
}

}  // namespace

Polynomial parse_polynomial(const std::string& spec, int n) {
  if (n < 1) throw DimensionError("dimension n must be >= 1");
  Polynomial out(n);
  for (const auto& atom : split_atoms(spec)) {
    if (atom.empty()) throw DomainError("empty term in Hamiltonian spec '" + spec + "'");
    out += parse_atom(atom, n);
  }
  return out;
}

HamiltonianField parse_hamiltonian(const std::string& spec, int n) {
  return HamiltonianField::from_polynomial(parse_polynomial(spec, n), spec);
}

Polynomial polynomial_from_terms(const std::vector<PolynomialTerm>& terms, int n) {
  Polynomial out(n);
  for (const auto& term : terms) {
    Polynomial::Exponents e(2 * n + 2, 0);
    e[0] = term.t;
    if (!term.q.empty() && static_cast<int>(term.q.size()) != n)
      throw DimensionError("polynomial term q exponents must have length n");
    if (!term.p.empty() && static_cast<int>(term.p.size()) != n)
      throw DimensionError("polynomial term p exponents must have length n");
    for (int i = 0; i < static_cast<int>(term.q.size()); ++i) e[1 + i] = term.q[i];
    for (int i = 0; i < static_cast<int>(term.p.size()); ++i) e[1 + n + i] = term.p[i];
    e[2 * n + 1] = term.z;
    if (std::any_of(e.begin(), e.end(), [](int k) { return k < 0; }))
      throw DomainError("negative exponent in polynomial term");
    out.add_term(e, term.coef);
  }
  return out;
}

std::vector<std::string> registry_names() {
  return {"reeb", "const:<c>", "coord:z", "coord:t", "coord:q<i>", "coord:p<i>",
          "quadratic:<a>"};
}

}  // namespace contacton::ham
