#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "harmsync/admittance.hpp"
#include "harmsync/error.hpp"
#include "oracles.hpp"

using namespace harmsync;
using Poly = Polynomial<double>;

namespace {

const Complex J(0.0, 1.0);

LcNetwork lc_example1(double c0 = 1.0, double l0 = 1.0) {
  const auto a = testing::example1();
  return lc_from_array(c0, l0, c0 * a.d(), c0 * a.r());
}

RationalFunction series_lc(double L, double C) { return RationalFunction(Poly({0.0, C}), Poly({1.0, 0.0, L * C})); }
RationalFunction resistor(double R) { return RationalFunction::constant(1.0 / R); }
RationalFunction tank(double c0, double l0) { return RationalFunction(Poly({1.0, 0.0, c0 * l0}), Poly({0.0, l0})); }

// The four-node ring with y12 and y23 resonant at w = 1.
GeneralNetwork ring4(const RationalFunction& y0) {
  return make_general(4, y0,
                      {{0, 1, series_lc(1.0, 1.0)}, {1, 2, series_lc(2.0, 0.5)}, {2, 3, resistor(2.0)},
                       {0, 3, resistor(1.0)}});
}

std::vector<Complex> sorted(Eigen::VectorXcd v) {
  std::vector<Complex> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

}  // namespace

TEST_CASE("LC network maps onto the mechanical array") {
  const auto lc = lc_example1();
  const auto a = equivalent_array(lc);
  const auto ex = testing::example1();
  CHECK(a.omega0() == 1.0);
  CHECK(a.d() == ex.d());
  CHECK(a.r() == ex.r());

  const auto none = lc_from_array(1.0, 1.0, Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 3));
  CHECK(none.G.isZero(0.0));
  CHECK(none.H.isZero(0.0));

  const auto doubled = lc_from_array(2.0, 0.5, testing::example1().d(), testing::example1().r());
  const auto half = equivalent_array(doubled);
  CHECK(half.d() == 0.5 * ex.d());
  CHECK(half.r() == 0.5 * ex.r());
  CHECK(pbh_check(half).synchronizes == pbh_check(ex).synchronizes);

  CHECK_THROWS_AS(lc_from_array(0.0, 1.0, ex.d(), ex.r()), ValidationError);
  Eigen::MatrixXd bad = ex.d();
  bad(0, 1) = -1.0;
  bad(1, 0) = -1.0;
  CHECK_THROWS_AS(lc_from_array(1.0, 1.0, bad, ex.r()), ValidationError);
}

TEST_CASE("Y(jw) of the LC form") {
  const auto lc = lc_example1();
  const auto Y = eval_Y(lc, 1.0);
  CHECK((Y * Eigen::VectorXcd::Ones(4)).norm() <= 1e-14);
  CHECK(Y.isApprox(lc.G.cast<Complex>() - J * lc.H.cast<Complex>()));

  Eigen::VectorXcd xi(4);
  xi << 1, 0, -1, 0;
  CHECK((Y * xi + J * xi).norm() <= 1e-14);
  CHECK(std::abs(lambda2_real(Y)) <= 1e-10);
  CHECK_THROWS_AS(eval_Y(lc, 0.0), std::invalid_argument);
}

TEST_CASE("lambda_2 of resistive and empty networks") {
  const auto a = testing::path_dampers(5);
  const auto lc = lc_from_array(1.0, 1.0, a.d(), Eigen::MatrixXd::Zero(5, 5));
  const double fiedler = algebraic_connectivity(lc.G);
  for (double w : {0.1, 1.0, 30.0}) CHECK(lambda2_real(eval_Y(lc, w)) == doctest::Approx(fiedler).epsilon(1e-12));
  CHECK(lambda2_real(Eigen::MatrixXcd(Eigen::MatrixXcd::Zero(3, 3))) == 0.0);
  CHECK(std::isinf(lambda2_real(Eigen::MatrixXcd(Eigen::MatrixXcd::Zero(1, 1)))));
}

TEST_CASE("lc_sync_check on the examples") {
  const auto ex1 = lc_sync_check(lc_example1());
  CHECK_FALSE(ex1.verdict.synchronizes);
  CHECK(ex1.pbh_agrees);
  CHECK(ex1.frequency_collapse);
  CHECK(ex1.half_plane_ok);
  for (double re : ex1.report.re_lambda2) CHECK(std::abs(re) <= 1e-10);
  REQUIRE(ex1.report.certificate);
  CHECK(ex1.report.certificate->omega == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  const auto a = testing::path_dampers(4);
  const auto connected = lc_from_array(1.0, 1.0, a.d() + Eigen::MatrixXd::Ones(4, 4) - Eigen::MatrixXd::Identity(4, 4),
                                       Eigen::MatrixXd::Zero(4, 4));
  CHECK(lc_sync_check(connected).verdict.synchronizes);

  Eigen::MatrixXd h(2, 2);
  h << 0, 1, 1, 0;
  const auto pair = lc_sync_check(lc_from_array(1.0, 1.0, Eigen::MatrixXd::Zero(2, 2), h));
  CHECK_FALSE(pair.verdict.synchronizes);
  CHECK(pair.pbh_agrees);
}

TEST_CASE("LC half-plane and frequency-collapse properties on random networks") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> w(0.05, 10.0);
  for (int trial = 0; trial < 60; ++trial) {
    const auto lc = testing::random_lc(rng, 2 + trial % 5, 0.5);
    std::vector<double> probes = default_probes(lc);
    for (int k = 0; k < 5; ++k) probes.push_back(w(rng));
    const auto check = lc_sync_check(lc, probes);
    CHECK(check.half_plane_ok);
    CHECK(check.frequency_collapse);
    CHECK(check.pbh_agrees);
  }
}

TEST_CASE("short-circuit reduction reproduces the ring display") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  const Complex y0(u(rng), u(rng)), y14(u(rng), -u(rng)), y34(u(rng), u(rng));
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(4, 4);
  c(0, 1) = c(1, 0) = inf;
  c(1, 2) = c(2, 1) = inf;
  c(0, 3) = c(3, 0) = y14;
  c(2, 3) = c(3, 2) = y34;
  const auto reduced = reduce_short_circuits(c, {{0, 1}, {1, 2}});
  REQUIRE(reduced.groups.size() == 2);
  CHECK(reduced.groups[0] == std::vector<Index>{0, 1, 2});

  Eigen::MatrixXcd expect(4, 4);
  expect << y0 + y14, y0, y0 + y34, -y14 - y34,
            -y14, 0.0, -y34, y0 + y14 + y34,
            1.0, -1.0, 0.0, 0.0,
            0.0, 1.0, -1.0, 0.0;
  const Eigen::MatrixXcd E = reduced.node_matrix(y0);
  CHECK(E.allFinite());
  CHECK((E - expect).norm() <= 1e-14);

  // p(lambda) = det(matrix - lambda mask) as a polynomial in lambda.
  using CPoly = Polynomial<Complex>;
  std::vector<CPoly> entries;
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) entries.push_back(CPoly({reduced.matrix(i, j), -reduced.mask(i, j)}));
  const auto p = polynomial_det(entries, 4);
  CHECK(p.degree() == 2);
  for (Index k = 0; k <= p.degree(); ++k) CHECK(std::isfinite(std::abs(p[k])));
  const auto finite = ordered_spectrum(reduced).values;
  REQUIRE(finite.size() == 2);
  const auto roots = sorted(p.roots());
  const auto eig = sorted(finite);
  for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(roots[k] - eig[k]) <= 1e-12 * (1.0 + std::abs(eig[k])));
  // One of them is the zero eigenvalue belonging to 1.
  CHECK(std::abs(finite(0)) <= 1e-14);
}

TEST_CASE("reduction edge cases") {
  std::mt19937_64 rng(53);
  const auto lc = testing::random_lc(rng, 4, 0.8);
  const Eigen::MatrixXcd Y = eval_Y(lc, 1.3);
  Eigen::MatrixXcd c = -Y;
  c.diagonal().setZero();
  const auto same = reduce_short_circuits(c, {});
  CHECK((same.matrix - Y).norm() <= 1e-14);
  CHECK(same.mask == Eigen::MatrixXd::Identity(4, 4));

  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd all = Eigen::MatrixXcd::Zero(3, 3);
  all(0, 1) = all(1, 0) = inf;
  all(1, 2) = all(2, 1) = inf;
  all(0, 2) = all(2, 0) = Complex(0.5, 0.0);
  const auto r = reduce_short_circuits(all, {{0, 1}, {1, 2}});
  CHECK(r.matrix.allFinite());
  const auto ns = nullspace(r.matrix);
  REQUIRE(ns.dimension() == 1);
  CHECK(subset_of_ones(ns.basis));

  try {
    reduce_short_circuits(all, {{0, 1}});
    FAIL("expected InconsistentShort");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InconsistentShort);
  }
}

TEST_CASE("eval_Y on general networks") {
  const auto net = make_general(2, tank(1.0, 0.5), {{0, 1, RationalFunction(Poly({1.0}), Poly({1.0, 0.0, 1.0}))}});
  const auto at_pole = eval_Y(net, 1.0);
  REQUIRE(std::holds_alternative<ReducedSystem>(at_pole));
  const auto& red = std::get<ReducedSystem>(at_pole);
  CHECK(red.matrix.row(1) == Eigen::RowVector2cd(1.0, -1.0));

  const auto away = eval_Y(net, 0.5);
  REQUIRE(std::holds_alternative<Eigen::MatrixXcd>(away));
  CHECK((std::get<Eigen::MatrixXcd>(away) * Eigen::VectorXcd::Ones(2)).norm() <= 1e-14);

  try {
    eval_Y(net, 0.0);
    FAIL("expected OscillatorShortCircuit");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OscillatorShortCircuit);
  }
}

TEST_CASE("node matrix determinant of the LC example") {
  const auto net = to_general(lc_example1());
  const auto m = node_matrix(net);
  const auto det = rational_det(m);
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> w(0.05, 10.0);
  for (int k = 0; k < 20; ++k) {
    const Complex s(0.0, w(rng));
    const Complex expect = m.evaluate(s).determinant();
    CHECK(std::abs(det(s) - expect) <= 1e-8 * (1.0 + std::abs(expect)));
  }
  // s^4 det(y0 I + Y) is the characteristic polynomial of the mechanical array.
  CHECK(det.numerator().degree() == 8);
}

TEST_CASE("rational_det against the pointwise determinant on random general networks") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> w(0.05, 10.0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto net = testing::random_general(rng, 2 + trial % 3, 0.7);
    const auto m = node_matrix(net);
    const auto det = rational_det(m);
    for (int k = 0; k < 20; ++k) {
      const Complex s(0.0, w(rng));
      const Complex expect = m.evaluate(s).determinant();
      if (!expect.real() || !std::isfinite(std::abs(expect))) continue;
      CHECK(std::abs(det(s) - expect) <= 1e-8 * (1.0 + std::abs(expect)));
    }
  }
}

TEST_CASE("candidate frequencies") {
  const auto tanks = make_general(3, tank(1.0, 1.0), {});
  const auto c1 = candidate_frequencies(tanks);
  bool has_one = false;
  for (const auto& c : c1) has_one |= std::abs(c.omega - 1.0) <= 1e-9 && c.from_root && c.from_y0_zero;
  CHECK(has_one);

  const auto ex1 = candidate_frequencies(to_general(lc_example1()));
  bool has_sqrt2 = false;
  for (const auto& c : ex1) has_sqrt2 |= std::abs(c.omega - std::sqrt(2.0)) <= 1e-9;
  CHECK(has_sqrt2);

  const RationalFunction rc(Poly({1.0, 1.0}), Poly({1.0}));  // 1 + s, no axis zeros or poles
  const auto resistive = make_general(3, rc, {{0, 1, resistor(1.0)}, {1, 2, resistor(0.5)}});
  CHECK(candidate_frequencies(resistive).empty());
}

TEST_CASE("general_sync_check agrees with the LC and mechanical tests") {
  std::mt19937_64 rng(67);
  int non_sync = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto lc = testing::random_lc(rng, 2 + trial % 4, 0.5);
    const auto lc_check = lc_sync_check(lc);
    const auto general = general_sync_check(to_general(lc));
    CHECK(lc_check.pbh_agrees);
    CHECK(general.verdict.synchronizes == lc_check.verdict.synchronizes);
    non_sync += !lc_check.verdict.synchronizes;
    if (!general.verdict.synchronizes) {
      REQUIRE(general.report.certificate);
      const auto& cert = *general.report.certificate;
      const auto E = node_matrix(to_general(lc)).evaluate(Complex(0.0, cert.omega));
      CHECK((E * cert.xi).norm() <= 1e-6 * std::max(1.0, E.norm()));
      CHECK(std::abs(cert.xi.sum()) <= 1e-9);
    }
    // Synchronized motion only at the tank frequency.
    REQUIRE(general.report.steady_state_frequencies.size() == 1);
    CHECK(general.report.steady_state_frequencies[0] == doctest::Approx(lc.omega0()).epsilon(1e-9));
  }
  CHECK(non_sync >= 5);
}

TEST_CASE("general_sync_check on non-LC networks") {
  // Lossy oscillators: y0 = series RLC, whose only axis zero is w = 0, where every
  // coupling below conducts.
  const RationalFunction lossy(Poly({0.0, 1.0}), Poly({1.0, 0.5, 1.0}));
  const auto net = make_general(3, lossy, {{0, 1, resistor(1.0)}, {1, 2, resistor(2.0) + series_lc(1.0, 2.0)}});
  const auto check = general_sync_check(net);
  CHECK(check.verdict.synchronizes);
  for (const auto& c : check.report.candidates) CHECK(c.synchronizes);

  // A capacitor-only path leaves node 0 free to hold its own DC level.
  const auto isolated = general_sync_check(make_general(3, lossy, {{0, 1, series_lc(1.0, 2.0)}, {1, 2, resistor(1.0)}}));
  CHECK_FALSE(isolated.verdict.synchronizes);
  REQUIRE(isolated.report.certificate);
  CHECK(isolated.report.certificate->omega == 0.0);

  // Ring: at w = 1 the two resonant couplings short nodes 1, 2, 3.
  const auto ring = general_sync_check(ring4(tank(1.0, 0.5)));
  bool saw_short = false;
  for (const auto& c : ring.report.candidates) {
    if (std::abs(c.omega - 1.0) <= 1e-12) {
      saw_short = c.short_circuit;
      CHECK(c.synchronizes);
      CHECK(c.basis.cols() == 0);
    }
  }
  CHECK(saw_short);

  // Star of unit tanks through series LC branches resonant at the tank frequency. With
  // Laplacian eigenvalue mu the node matrix is singular where (w^2 - 1)^2 = mu w^2;
  // both non-trivial modes (mu = 1, 3) are orthogonal to 1.
  const auto star = general_sync_check(make_general(3, tank(1.0, 1.0), {{0, 1, series_lc(1.0, 1.0)}, {0, 2, series_lc(1.0, 1.0)}}));
  CHECK_FALSE(star.verdict.synchronizes);
  std::vector<double> expect;
  for (double mu : {1.0, 3.0}) {
    const double r = std::sqrt(mu + 4.0), m = std::sqrt(mu);
    expect.push_back(0.5 * (r - m));
    expect.push_back(0.5 * (r + m));
  }
  std::sort(expect.begin(), expect.end());
  std::vector<double> failing;
  for (const auto& c : star.report.candidates)
    if (!c.synchronizes) failing.push_back(c.omega);
  REQUIRE(failing.size() == expect.size());
  for (std::size_t k = 0; k < expect.size(); ++k) CHECK(failing[k] == doctest::Approx(expect[k]).epsilon(1e-9));
}

TEST_CASE("eigenvalues of passive Y(jw) lie in the closed right half-plane") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> w(0.05, 10.0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto net = testing::random_general(rng, 2 + trial % 3, 0.7);
    CHECK_NOTHROW(check_passive(net));
    for (int k = 0; k < 5; ++k) {
      const auto Y = eval_Y(net, w(rng));
      const auto spec = std::visit([](const auto& v) { return ordered_spectrum(v); }, Y);
      for (Index m = 0; m < spec.values.size(); ++m) CHECK(spec.values(m).real() >= -1e-9 * (1.0 + std::abs(spec.values(m))));
    }
  }
}

TEST_CASE("passivity check rejects negative resistance") {
  const auto net = make_general(2, tank(1.0, 1.0), {{0, 1, RationalFunction::constant(-1.0)}});
  try {
    check_passive(net);
    FAIL("expected NotPassive");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPassive);
  }
}

TEST_CASE("make_general validation") {
  CHECK_THROWS_AS(make_general(2, tank(1, 1), {{0, 0, resistor(1.0)}}), ValidationError);
  CHECK_THROWS_AS(make_general(2, tank(1, 1), {{0, 1, resistor(1.0)}, {1, 0, resistor(1.0)}}), ValidationError);
  CHECK_THROWS_AS(make_general(2, RationalFunction(), {}), ValidationError);
  CHECK_THROWS_AS(make_general(2, tank(1, 1), {{0, 2, resistor(1.0)}}), ValidationError);
}

TEST_CASE("sweep rows") {
  const auto net = to_general(lc_example1());
  const auto rows = sweep(net, log_grid(0.1, 10.0, 16));
  REQUIRE(rows.size() == 16);
  for (const auto& r : rows) {
    CHECK(std::abs(r.lambda2.real()) <= 1e-10);
    CHECK(r.min_singular_value >= 0.0);
  }
  const auto at_mode = sweep(net, {std::sqrt(2.0)});
  CHECK(at_mode[0].min_singular_value <= 1e-12);
  CHECK(sweep(net, {0.0}).empty());
}
