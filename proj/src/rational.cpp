#include "harmsync/rational.hpp"

#include <bit>
#include <sstream>

#include "harmsync/error.hpp"

namespace harmsync {

RealFactorization factor_real(const Polynomial<double>& p, double conj_tol) {
  if (p.is_zero()) throw std::domain_error("cannot factor the zero polynomial");
  RealFactorization out;
  out.leading = p.leading();
  const Eigen::VectorXcd r = p.roots();
  for (Index k = 0; k < r.size(); ++k) {
    const double re = r(k).real(), im = r(k).imag();
    if (std::abs(im) <= conj_tol * (1.0 + std::abs(r(k)))) {
      out.factors.push_back(Polynomial<double>({-re, 1.0}));
    } else if (im > 0.0) {
      out.factors.push_back(Polynomial<double>({std::norm(r(k)), -2.0 * re, 1.0}));
    }
  }
  return out;
}

namespace {

bool same_factor(const Polynomial<double>& a, const Polynomial<double>& b) {
  if (a.degree() != b.degree()) return false;
  const auto& ca = a.coefficients();
  const auto& cb = b.coefficients();
  return (ca - cb).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + ca.cwiseAbs().maxCoeff());
}

Eigen::VectorXcd factor_roots(const Polynomial<double>& f) {
  if (f.degree() == 1) return Eigen::VectorXcd::Constant(1, Complex(-f[0], 0.0));
  const double b = f[1], c = f[0];
  const Complex disc = std::sqrt(Complex(b * b - 4.0 * c, 0.0));
  Eigen::VectorXcd r(2);
  r << 0.5 * (-b + disc), 0.5 * (-b - disc);
  return r;
}

// Coefficients of a / (s - r), each taken from the forward (top-down) or backward
// (bottom-up) recursion, whichever carries the smaller rounding bound.
Eigen::VectorXcd deflate(const Eigen::VectorXcd& a, Complex r) {
  const Index n = a.size() - 1;
  Eigen::VectorXcd fwd(n), bwd(n);
  Eigen::VectorXd bound_f(n), bound_b(n);
  fwd(n - 1) = a(n);
  bound_f(n - 1) = std::abs(a(n));
  for (Index k = n - 1; k >= 1; --k) {
    fwd(k - 1) = a(k) + r * fwd(k);
    bound_f(k - 1) = std::abs(a(k)) + std::abs(r) * bound_f(k);
  }
  if (r == Complex(0.0, 0.0)) return fwd;
  const double inv = 1.0 / std::abs(r);
  bwd(0) = -a(0) / r;
  bound_b(0) = std::abs(a(0)) * inv;
  for (Index k = 1; k < n; ++k) {
    bwd(k) = (bwd(k - 1) - a(k)) / r;
    bound_b(k) = (bound_b(k - 1) + std::abs(a(k))) * inv;
  }
  Eigen::VectorXcd q(n);
  for (Index k = 0; k < n; ++k) q(k) = bound_f(k) <= bound_b(k) ? fwd(k) : bwd(k);
  return q;
}

Polynomial<double> exact_quotient(const Polynomial<double>& a, const Polynomial<double>& f) {
  Eigen::VectorXcd c = a.coefficients().cast<Complex>();
  const Eigen::VectorXcd roots = factor_roots(f);
  for (Index k = 0; k < roots.size(); ++k) c = deflate(c, roots(k));
  return Polynomial<double>(Eigen::VectorXd((c / f.leading()).real()));
}

}  // namespace

Polynomial<double> product(const std::vector<Polynomial<double>>& factors) {
  Polynomial<double> p = Polynomial<double>::constant(1.0);
  for (const auto& f : factors) p *= f;
  return p;
}

std::vector<Polynomial<double>> factor_lcm(const std::vector<Polynomial<double>>& a,
                                           const std::vector<Polynomial<double>>& b) {
  std::vector<Polynomial<double>> out = a;
  std::vector<bool> used(a.size(), false);
  for (const auto& f : b) {
    bool matched = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (!used[k] && same_factor(a[k], f)) {
        used[k] = matched = true;
        break;
      }
    }
    if (!matched) out.push_back(f);
  }
  return out;
}

std::vector<Polynomial<double>> factor_complement(const std::vector<Polynomial<double>>& whole,
                                                  const std::vector<Polynomial<double>>& part) {
  std::vector<bool> used(whole.size(), false);
  for (const auto& f : part) {
    bool matched = false;
    for (std::size_t k = 0; k < whole.size(); ++k) {
      if (!used[k] && same_factor(whole[k], f)) {
        used[k] = matched = true;
        break;
      }
    }
    if (!matched) throw std::logic_error("factor_complement: factor not contained");
  }
  std::vector<Polynomial<double>> out;
  for (std::size_t k = 0; k < whole.size(); ++k) {
    if (!used[k]) out.push_back(whole[k]);
  }
  return out;
}

RationalFunction::RationalFunction(const Poly& num, const Poly& den) {
  if (den.is_zero()) throw std::domain_error("rational function with zero denominator");
  auto f = factor_real(den);
  num_ = (1.0 / f.leading) * num;
  den_ = std::move(f.factors);
  cancel();
}

RationalFunction RationalFunction::from_factors(Poly num, std::vector<Poly> factors, double gcd_tol) {
  RationalFunction r;
  r.num_ = std::move(num);
  r.den_ = std::move(factors);
  r.cancel(gcd_tol);
  return r;
}

Polynomial<double> RationalFunction::denominator() const { return product(den_); }

Index RationalFunction::denominator_degree() const {
  Index d = 0;
  for (const auto& f : den_) d += f.degree();
  return d;
}

Complex RationalFunction::operator()(Complex s) const {
  Complex den(1.0, 0.0);
  for (const auto& f : den_) den *= f(s);
  const Complex num = num_(s);
  if (den == Complex(0.0, 0.0)) {
    return num == Complex(0.0, 0.0) ? Complex(0.0, 0.0)
                                    : Complex(std::numeric_limits<double>::infinity(), 0.0);
  }
  return num / den;
}

std::vector<double> RationalFunction::axis_poles(double tol) const {
  std::vector<double> out;
  if (is_zero()) return out;
  for (const auto& f : den_) {
    if (f.degree() == 1) {
      if (std::abs(f[0]) <= tol) out.push_back(0.0);
    } else {
      const double b = f[1], c = f[0];
      if (c >= -tol && std::abs(b) <= tol * (1.0 + std::sqrt(std::abs(c)))) {
        out.push_back(std::sqrt(std::max(c, 0.0)));
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool RationalFunction::has_pole_at(double omega, double tol) const {
  for (double p : axis_poles(tol)) {
    if (std::abs(p - std::abs(omega)) <= tol * (1.0 + std::abs(omega))) return true;
  }
  return false;
}

RationalFunction& RationalFunction::cancel(double tol) {
  if (num_.is_zero()) {
    den_.clear();
    return *this;
  }
  bool changed = true;
  while (changed && !den_.empty() && num_.degree() >= 1) {
    changed = false;
    const Eigen::VectorXcd zeros = num_.roots();
    for (std::size_t k = 0; k < den_.size() && !changed; ++k) {
      if (num_.degree() < den_[k].degree()) continue;
      const Eigen::VectorXcd r = factor_roots(den_[k]);
      bool common = true;
      for (Index m = 0; m < r.size() && common; ++m) {
        const double scale = 1.0 + std::abs(r(m));
        const double nearest = (zeros.array() - r(m)).abs().minCoeff();
        common = nearest <= kRootMatchTolerance * scale &&
                 std::abs(num_(r(m))) <= tol * num_.magnitude_at(std::abs(r(m)));
      }
      if (common) {
        num_ = exact_quotient(num_, den_[k]);
        den_.erase(den_.begin() + static_cast<std::ptrdiff_t>(k));
        changed = true;
      }
    }
  }
  return *this;
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  auto lcm = factor_lcm(a.den_, b.den_);
  auto num = a.num_ * product(factor_complement(lcm, a.den_)) +
             b.num_ * product(factor_complement(lcm, b.den_));
  return RationalFunction::from_factors(std::move(num), std::move(lcm));
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero() || b.is_zero()) return {};
  auto den = a.den_;
  den.insert(den.end(), b.den_.begin(), b.den_.end());
  return RationalFunction::from_factors(a.num_ * b.num_, std::move(den));
}

RationalFunction operator*(double c, const RationalFunction& a) {
  if (c == 0.0 || a.is_zero()) return {};
  RationalFunction r = a;
  r.num_ = c * r.num_;
  return r;
}

namespace {

std::string poly_string(const Polynomial<double>& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (Index k = p.degree(); k >= 0; --k) {
    const double c = p[k];
    if (c == 0.0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    const double a = std::abs(c);
    if (a != 1.0 || k == 0) os << a;
    if (k >= 1) os << "s";
    if (k >= 2) os << "^" << k;
    first = false;
  }
  return os.str();
}

}  // namespace

std::string RationalFunction::to_string() const {
  if (den_.empty()) return poly_string(num_);
  std::string out = "(" + poly_string(num_) + ") / (";
  for (std::size_t k = 0; k < den_.size(); ++k) {
    if (k) out += ")(";
    out += poly_string(den_[k]);
  }
  return out + ")";
}

Eigen::MatrixXcd RationalMatrix::evaluate(Complex s) const {
  Eigen::MatrixXcd out(n_, n_);
  for (Index i = 0; i < n_; ++i)
    for (Index j = 0; j < n_; ++j) out(i, j) = (*this)(i, j)(s);
  return out;
}

template <typename Scalar>
Polynomial<Scalar> polynomial_det(const std::vector<Polynomial<Scalar>>& m, Index n) {
  using Poly = Polynomial<Scalar>;
  if (n == 0) return Poly::constant(Scalar(1));
  if (n > kMaxExpansionRows) {
    throw Error(ErrorKind::DegreeOverflow, "determinant expansion limited to " +
                                               std::to_string(kMaxExpansionRows) + " rows");
  }
  auto at = [&](Index i, Index j) -> const Poly& { return m[static_cast<std::size_t>(i * n + j)]; };

  // minors[S] = det(rows 0..|S|-1, columns S), expanded along the last row.
  std::vector<Poly> minors(std::size_t{1} << n);
  minors[0] = Poly::constant(Scalar(1));
  for (unsigned mask = 1; mask < minors.size(); ++mask) {
    const Index row = std::popcount(mask) - 1;
    Poly acc;
    Index pos = 0;
    for (Index c = 0; c < n; ++c) {
      if (!(mask & (1u << c))) continue;
      const Poly& sub = minors[mask & ~(1u << c)];
      if (!sub.is_zero() && !at(row, c).is_zero()) {
        const Poly term = at(row, c) * sub;
        acc = ((row + pos) % 2 == 0) ? acc + term : acc - term;
      }
      ++pos;
    }
    minors[mask] = std::move(acc);
  }
  return minors.back();
}

template Polynomial<double> polynomial_det(const std::vector<Polynomial<double>>&, Index);
template Polynomial<Complex> polynomial_det(const std::vector<Polynomial<Complex>>&, Index);

RationalFunction rational_det(const RationalMatrix& m, const DetOptions& opts) {
  const Index n = m.rows();
  if (n == 0) return RationalFunction::constant(1.0);
  std::vector<Polynomial<double>> numerators(static_cast<std::size_t>(n * n));
  std::vector<Polynomial<double>> den_all;
  Index degree_bound = 0;
  for (Index i = 0; i < n; ++i) {
    std::vector<Polynomial<double>> row_lcm;
    for (Index j = 0; j < n; ++j) row_lcm = factor_lcm(row_lcm, m(i, j).denominator_factors());
    Index row_degree = 0;
    for (Index j = 0; j < n; ++j) {
      const auto& e = m(i, j);
      auto& slot = numerators[static_cast<std::size_t>(i * n + j)];
      if (e.is_zero()) continue;
      slot = e.numerator() * product(factor_complement(row_lcm, e.denominator_factors()));
      row_degree = std::max(row_degree, slot.degree());
    }
    degree_bound += row_degree;
    den_all.insert(den_all.end(), row_lcm.begin(), row_lcm.end());
  }
  Index den_degree = 0;
  for (const auto& f : den_all) den_degree += f.degree();
  if (degree_bound > opts.degree_cap || den_degree > opts.degree_cap) {
    std::ostringstream os;
    os << "determinant degree " << std::max(degree_bound, den_degree) << " exceeds cap " << opts.degree_cap;
    throw Error(ErrorKind::DegreeOverflow, os.str());
  }
  return RationalFunction::from_factors(polynomial_det(numerators, n), std::move(den_all),
                                        opts.gcd_tolerance);
}

}  // namespace harmsync
