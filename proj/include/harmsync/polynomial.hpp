#pragma once

#include <stdexcept>
#include <utility>

#include <unsupported/Eigen/Polynomials>

#include "harmsync/linalg.hpp"

namespace harmsync {

/// Polynomial with coefficients in ascending degree. The zero polynomial has no
/// coefficients and degree -1.
template <typename Scalar>
class Polynomial {
 public:
  using Coefficients = VectorX<Scalar>;

  Polynomial() = default;
  explicit Polynomial(Coefficients c) : c_(std::move(c)) { trim(); }
  Polynomial(std::initializer_list<Scalar> c) : c_(static_cast<Index>(c.size())) {
    Index k = 0;
    for (const auto& v : c) c_(k++) = v;
    trim();
  }

  static Polynomial constant(Scalar v) { return Polynomial({v}); }
  static Polynomial monomial(Index degree, Scalar v = Scalar(1)) {
    Coefficients c = Coefficients::Zero(degree + 1);
    c(degree) = v;
    return Polynomial(std::move(c));
  }

  const Coefficients& coefficients() const { return c_; }
  Index degree() const { return c_.size() - 1; }
  bool is_zero() const { return c_.size() == 0; }
  Scalar leading() const { return is_zero() ? Scalar(0) : c_(c_.size() - 1); }
  Scalar operator[](Index k) const { return k < c_.size() ? c_(k) : Scalar(0); }

  /// Sum of |c_k|; the scale that coefficient tolerances refer to.
  double norm1() const { return c_.size() ? c_.cwiseAbs().sum() : 0.0; }

  template <typename T>
  auto operator()(const T& x) const {
    using R = decltype(Scalar() * x);
    R acc(0);
    for (Index k = c_.size() - 1; k >= 0; --k) acc = acc * x + c_(k);
    return acc;
  }

  /// sum |c_k| |x|^k, the magnitude against which a value at x can be called zero.
  double magnitude_at(double abs_x) const {
    double acc = 0.0;
    for (Index k = c_.size() - 1; k >= 0; --k) acc = acc * abs_x + std::abs(c_(k));
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    Coefficients d(c_.size() - 1);
    for (Index k = 1; k < c_.size(); ++k) d(k - 1) = c_(k) * Scalar(static_cast<double>(k));
    return Polynomial(std::move(d));
  }

  /// Drops leading coefficients with |c| <= tol * norm1().
  Polynomial trimmed(double tol) const {
    const double cut = tol * norm1();
    Index n = c_.size();
    while (n > 0 && std::abs(c_(n - 1)) <= cut) --n;
    return Polynomial(Coefficients(c_.head(n)));
  }

  /// Roots by the eigenvalues of the balanced companion matrix.
  Eigen::VectorXcd roots() const {
    if (degree() < 1) return {};
    if (degree() == 1) {
      Eigen::VectorXcd r(1);
      r(0) = Complex(-c_(0) / c_(1));
      return r;
    }
    Eigen::PolynomialSolver<Scalar, Eigen::Dynamic> solver(c_);
    return solver.roots().template cast<Complex>();
  }

  template <typename To>
  Polynomial<To> cast() const {
    return Polynomial<To>(VectorX<To>(c_.template cast<To>()));
  }

  Polynomial operator-() const { return Polynomial(Coefficients(-c_)); }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Coefficients c = Coefficients::Zero(std::max(a.c_.size(), b.c_.size()));
    c.head(a.c_.size()) += a.c_;
    c.head(b.c_.size()) += b.c_;
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Coefficients c = Coefficients::Zero(a.c_.size() + b.c_.size() - 1);
    for (Index i = 0; i < a.c_.size(); ++i) c.segment(i, b.c_.size()) += a.c_(i) * b.c_;
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(Scalar s, const Polynomial& p) { return Polynomial(Coefficients(s * p.c_)); }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

 private:
  void trim() {
    Index n = c_.size();
    while (n > 0 && c_(n - 1) == Scalar(0)) --n;
    c_.conservativeResize(n);
  }

  Coefficients c_;
};

/// Long division a = q b + r with deg r < deg b.
template <typename Scalar>
std::pair<Polynomial<Scalar>, Polynomial<Scalar>> divide(const Polynomial<Scalar>& a,
                                                         const Polynomial<Scalar>& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {Polynomial<Scalar>(), a};
  VectorX<Scalar> rem = a.coefficients();
  const auto& den = b.coefficients();
  const Index db = b.degree();
  VectorX<Scalar> quo = VectorX<Scalar>::Zero(a.degree() - db + 1);
  for (Index k = a.degree() - db; k >= 0; --k) {
    const Scalar f = rem(k + db) / den(db);
    quo(k) = f;
    rem.segment(k, db + 1) -= f * den;
    rem(k + db) = Scalar(0);
  }
  return {Polynomial<Scalar>(std::move(quo)), Polynomial<Scalar>(VectorX<Scalar>(rem.head(db)))};
}

/// Real monic factors of degree one or two whose product times `leading` is p.
struct RealFactorization {
  double leading = 0.0;
  std::vector<Polynomial<double>> factors;
};

/// Pairs conjugate roots (|Im| <= conj_tol * (1 + |root|)) into quadratics.
RealFactorization factor_real(const Polynomial<double>& p, double conj_tol = 1e-7);

}  // namespace harmsync
