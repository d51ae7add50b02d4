#pragma once

#include <string>
#include <vector>

#include "harmsync/polynomial.hpp"

namespace harmsync {

inline constexpr double kGcdTolerance = 1e-10;
inline constexpr Index kDefaultDegreeCap = 64;
inline constexpr double kRootMatchTolerance = 1e-6;
inline constexpr Index kMaxExpansionRows = 16;

/// Real rational function num(s) / prod(den factors). Denominator factors are real
/// monic polynomials of degree one or two, so common denominators are unions of
/// factors and no polynomial GCD is needed for them.
class RationalFunction {
 public:
  using Poly = Polynomial<double>;

  RationalFunction() = default;
  /// num / den, with den factored and common roots cancelled. Throws
  /// std::domain_error on a zero denominator.
  RationalFunction(const Poly& num, const Poly& den);

  static RationalFunction constant(double c) { return RationalFunction(Poly::constant(c), Poly::constant(1.0)); }
  static RationalFunction from_factors(Poly num, std::vector<Poly> factors, double gcd_tol = kGcdTolerance);

  const Poly& numerator() const { return num_; }
  const std::vector<Poly>& denominator_factors() const { return den_; }
  Poly denominator() const;

  bool is_zero() const { return num_.is_zero(); }
  Index numerator_degree() const { return num_.degree(); }
  Index denominator_degree() const;

  Complex operator()(Complex s) const;
  Complex at_jw(double omega) const { return (*this)(Complex(0.0, omega)); }

  /// Non-negative frequencies w with a denominator root at jw (within tol).
  std::vector<double> axis_poles(double tol = 1e-9) const;
  bool has_pole_at(double omega, double tol = 1e-9) const;

  /// Removes denominator factors whose roots are also numerator roots: a computed
  /// numerator root lies within kRootMatchTolerance and |num(root)| <= tol * sum |c_k| |root|^k.
  RationalFunction& cancel(double tol = kGcdTolerance);

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(double c, const RationalFunction& a);
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }

  std::string to_string() const;

 private:
  Poly num_;
  std::vector<Poly> den_;
};

/// Factors present in either list, counting multiplicity (a multiset union).
std::vector<Polynomial<double>> factor_lcm(const std::vector<Polynomial<double>>& a,
                                           const std::vector<Polynomial<double>>& b);

/// Factors of `whole` left after removing those of `part` (which must be contained).
std::vector<Polynomial<double>> factor_complement(const std::vector<Polynomial<double>>& whole,
                                                  const std::vector<Polynomial<double>>& part);

Polynomial<double> product(const std::vector<Polynomial<double>>& factors);

/// Square matrix of rational functions, row major.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(Index n) : n_(n), data_(static_cast<std::size_t>(n * n)) {}

  Index rows() const { return n_; }
  RationalFunction& operator()(Index i, Index j) { return data_[static_cast<std::size_t>(i * n_ + j)]; }
  const RationalFunction& operator()(Index i, Index j) const {
    return data_[static_cast<std::size_t>(i * n_ + j)];
  }

  Eigen::MatrixXcd evaluate(Complex s) const;

 private:
  Index n_ = 0;
  std::vector<RationalFunction> data_;
};

struct DetOptions {
  Index degree_cap = kDefaultDegreeCap;
  double gcd_tolerance = kGcdTolerance;
};

/// Determinant over the product of row-wise common denominators, with the polynomial
/// determinant expanded division free over column subsets. Throws
/// Error(DegreeOverflow) past the degree cap or kMaxExpansionRows rows.
RationalFunction rational_det(const RationalMatrix& m, const DetOptions& opts = {});

/// Determinant of a square polynomial matrix (row major, n x n).
template <typename Scalar>
Polynomial<Scalar> polynomial_det(const std::vector<Polynomial<Scalar>>& m, Index n);

}  // namespace harmsync
