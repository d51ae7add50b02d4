#include <random>

#include "doctest.h"
#include "harmsync/error.hpp"
#include "harmsync/rational.hpp"

using namespace harmsync;
using Poly = Polynomial<double>;

namespace {

Complex pointwise_det(const RationalMatrix& m, Complex s) { return m.evaluate(s).determinant(); }

RationalFunction random_rational(std::mt19937_64& rng, Index max_degree) {
  std::uniform_int_distribution<Index> deg(0, max_degree);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> pos(0.2, 2.0);
  Eigen::VectorXd num(deg(rng) + 1);
  for (Index k = 0; k < num.size(); ++k) num(k) = coef(rng);
  // Denominator as a product of stable real factors.
  Poly den = Poly::constant(pos(rng));
  const Index dd = deg(rng);
  for (Index k = 0; k < dd; ++k) den *= Poly({pos(rng), 1.0});
  return RationalFunction(Poly(num), den);
}

}  // namespace

TEST_CASE("polynomial arithmetic and evaluation") {
  const Poly p({1.0, -3.0, 2.0});  // 2s^2 - 3s + 1
  CHECK(p.degree() == 2);
  CHECK(p(2.0) == 3.0);
  CHECK(p(Complex(0.0, 1.0)) == Complex(-1.0, -3.0));
  CHECK((p * Poly({1.0, 1.0})).coefficients() == Eigen::Vector4d(1.0, -2.0, -1.0, 2.0));
  CHECK((p - p).is_zero());
  CHECK(Poly().degree() == -1);
  CHECK(p.derivative() == Poly({-3.0, 4.0}));

  const auto [q, r] = divide(p, Poly({-1.0, 1.0}));
  CHECK(q == Poly({-1.0, 2.0}));
  CHECK(r.is_zero());
  const auto [q2, r2] = divide(Poly({1.0, 0.0, 1.0}), Poly({1.0, 1.0}));
  CHECK(q2 == Poly({-1.0, 1.0}));
  CHECK(r2 == Poly({2.0}));
}

TEST_CASE("roots and real factorization") {
  const Poly p = Poly({1.0, 0.0, 1.0}) * Poly({-2.0, 1.0});  // (s^2 + 1)(s - 2)
  auto roots = p.roots();
  REQUIRE(roots.size() == 3);
  int on_axis = 0;
  for (Index k = 0; k < 3; ++k) on_axis += std::abs(std::abs(roots(k)) - 1.0) < 1e-12;
  CHECK(on_axis == 2);

  const auto f = factor_real(3.0 * p);
  CHECK(f.leading == doctest::Approx(3.0));
  REQUIRE(f.factors.size() == 2);
  const Poly back = f.leading * product(f.factors);
  CHECK((back.coefficients() - (3.0 * p).coefficients()).norm() < 1e-12);
}

TEST_CASE("rational functions cancel common factors") {
  // (s^2 - 1) / (s - 1) = s + 1
  const RationalFunction r(Poly({-1.0, 0.0, 1.0}), Poly({-1.0, 1.0}));
  CHECK(r.denominator_factors().empty());
  CHECK(r.numerator().degree() == 1);
  CHECK(std::abs(r(Complex(2.0, 0.0)) - 3.0) <= 1e-14);

  // s / (s^2 + 1) has poles at +-j.
  const RationalFunction y(Poly({0.0, 1.0}), Poly({1.0, 0.0, 1.0}));
  CHECK(y.axis_poles() == std::vector<double>{1.0});
  CHECK(y.has_pole_at(1.0));
  CHECK_FALSE(y.has_pole_at(0.5));
  CHECK(std::isinf(std::abs(y.at_jw(1.0))));

  const RationalFunction inductor(Poly({1.0}), Poly({0.0, 2.0}));
  CHECK(inductor.axis_poles() == std::vector<double>{0.0});
}

TEST_CASE("rational arithmetic matches pointwise arithmetic") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> w(0.1, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_rational(rng, 3);
    const auto b = random_rational(rng, 3);
    const auto sum = a + b;
    const auto prod = a * b;
    const auto diff = a - b;
    for (int k = 0; k < 5; ++k) {
      const Complex s(0.0, w(rng));
      CHECK(std::abs(sum(s) - (a(s) + b(s))) <= 1e-10 * (1.0 + std::abs(a(s)) + std::abs(b(s))));
      CHECK(std::abs(prod(s) - a(s) * b(s)) <= 1e-10 * (1.0 + std::abs(a(s) * b(s))));
      CHECK(std::abs(diff(s) - (a(s) - b(s))) <= 1e-10 * (1.0 + std::abs(a(s)) + std::abs(b(s))));
    }
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("shared denominators are not duplicated") {
  const RationalFunction g = RationalFunction::constant(2.0);
  const RationalFunction h(Poly({3.0}), Poly({0.0, 1.0}));  // 3 / s
  const auto sum = (g + h) + h;
  CHECK(sum.denominator_degree() == 1);
  CHECK(sum(Complex(0.0, 1.0)) == Complex(2.0, -6.0));
}

TEST_CASE("rational_det small cases") {
  const RationalFunction tank(Poly({0.0, 1.0}), Poly({1.0, 0.0, 1.0}));
  RationalMatrix diag(2);
  diag(0, 0) = tank;
  diag(1, 1) = tank;
  const auto det = rational_det(diag);
  // s^2 / (s^2 + 1)^2
  CHECK(det.denominator_degree() == 4);
  CHECK(det.numerator().degree() == 2);
  for (double w : {0.3, 2.0, 7.0}) {
    const Complex s(0.0, w);
    CHECK(std::abs(det(s) - s * s / std::pow(s * s + 1.0, 2)) <= 1e-12);
  }

  RationalMatrix one(1);
  const RationalFunction y0(Poly({1.0, 0.0, 1.0}), Poly({0.0, 1.0}));  // s + 1/s
  one(0, 0) = y0;
  const auto d1 = rational_det(one);
  CHECK(d1.numerator() == y0.numerator());
  CHECK(d1.denominator_factors().size() == 1);

  CHECK(rational_det(RationalMatrix(3)).is_zero());
}

TEST_CASE("rational_det against the complex determinant") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> w(0.05, 10.0);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 2 + trial % 4;
    RationalMatrix m(n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) m(i, j) = random_rational(rng, 2);
    const auto det = rational_det(m);
    for (int k = 0; k < 20; ++k) {
      const Complex s(0.0, w(rng));
      const Complex expect = pointwise_det(m, s);
      CHECK(std::abs(det(s) - expect) <= 1e-8 * (1.0 + std::abs(expect)));
    }
  }
}

TEST_CASE("rational_det degree cap") {
  RationalMatrix m(3);
  const RationalFunction big(Poly::monomial(30, 1.0) + Poly({1.0}), Poly({1.0, 1.0}));
  for (Index i = 0; i < 3; ++i) m(i, i) = big;
  try {
    rational_det(m);
    FAIL("expected DegreeOverflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegreeOverflow);
  }
  CHECK_NOTHROW(rational_det(m, {128}));
}

TEST_CASE("rational_det rejects oversized expansions") {
  RationalMatrix m(kMaxExpansionRows + 1);
  for (Index i = 0; i < m.rows(); ++i) m(i, i) = RationalFunction::constant(1.0);
  CHECK_THROWS_AS(rational_det(m), Error);
}

TEST_CASE("complex polynomial determinant") {
  using CPoly = Polynomial<Complex>;
  // det [[a - x, b], [c, d - x]] = x^2 - (a + d) x + ad - bc
  const Complex a(1, 2), b(0, 1), c(3, 0), d(-1, 1);
  std::vector<CPoly> m = {CPoly({a, -1.0}), CPoly({b}), CPoly({c}), CPoly({d, -1.0})};
  const auto p = polynomial_det(m, 2);
  CHECK(std::abs(p[0] - (a * d - b * c)) < 1e-14);
  CHECK(std::abs(p[1] + (a + d)) < 1e-14);
  CHECK(std::abs(p[2] - 1.0) < 1e-14);
  const auto r = p.roots();
  for (Index k = 0; k < r.size(); ++k) CHECK(std::abs(p(r(k))) < 1e-12);
}

TEST_CASE("cancellation keeps relative accuracy where the numerator is small") {
  // n(s) = f(s)^2 h(s) with large high-order coefficients; n / (f g) should equal f h / g.
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> pos(0.2, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    const Poly f({pos(rng), pos(rng), 1.0});
    const Poly g({pos(rng), 1.0});
    Poly h = Poly::constant(1.0);
    for (int k = 0; k < 12; ++k) h *= Poly({pos(rng), 1.0 + 10.0 * pos(rng)});
    const RationalFunction r(f * f * h, f * g);
    // f may survive when its double root sits among h's clustered roots; g must stay.
    CHECK(r.denominator_degree() >= 1);
    CHECK(r.denominator_degree() <= 3);
    for (double w : {0.01, 0.2, 1.0, 5.0}) {
      const Complex s(0.0, w);
      const Complex expect = f(s) * h(s) / g(s);
      CHECK(std::abs(r(s) - expect) <= 1e-12 * std::abs(expect));
    }
  }
}
