#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "harmsync/certify.hpp"
#include "oracles.hpp"

using namespace harmsync;
using doctest::Approx;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Eigen::MatrixXd stack(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd s(a.rows() + b.rows(), a.cols());
  s << a, b;
  return s;
}

Eigen::MatrixXd observability_stack(const Eigen::MatrixXd& c, const Eigen::MatrixXd& a) {
  const Index n = a.rows();
  Eigen::MatrixXd s(c.rows() * n, n);
  Eigen::MatrixXd p = c;
  for (Index k = 0; k < n; ++k) {
    s.middleRows(k * c.rows(), c.rows()) = p;
    p = p * a;
  }
  return s;
}

}  // namespace

TEST_CASE("nullspace edge cases") {
  CHECK(nullspace(Eigen::MatrixXd::Identity(3, 3)).dimension() == 0);
  CHECK(nullspace(Eigen::MatrixXd::Zero(3, 3)).dimension() == 3);

  const auto L = build_laplacians(testing::example1());
  const Eigen::MatrixXd s = stack(L.R - Eigen::MatrixXd::Identity(4, 4), L.D);
  const auto ns = nullspace(s);
  REQUIRE(ns.dimension() == 1);
  CHECK(oracle::exact_nullity(s) == 1);
  CHECK(oracle::abs_cosine(ns.basis.col(0), vec({1, 0, -1, 0})) == Approx(1.0).epsilon(1e-12));

  const auto complex_ns = nullspace(Eigen::MatrixXcd(s.cast<Complex>()));
  CHECK(complex_ns.dimension() == 1);
}

TEST_CASE("subset_of_ones") {
  CHECK(subset_of_ones(Eigen::MatrixXd(4, 0)));
  CHECK(subset_of_ones(Eigen::MatrixXd(Eigen::VectorXd::Ones(4) / 2.0)));
  CHECK_FALSE(subset_of_ones(Eigen::MatrixXd(vec({1, 0, -1, 0}) / std::sqrt(2.0))));
}

TEST_CASE("pbh_check on the first example") {
  const auto v = pbh_check(testing::example1());
  CHECK_FALSE(v.synchronizes);
  REQUIRE(v.certificate);
  const auto& c = *v.certificate;
  CHECK(c.lambda_star == Approx(1.0).epsilon(1e-12));
  CHECK(oracle::abs_cosine(c.xi_star, vec({1, 0, -1, 0})) >= 1.0 - 1e-8);
  CHECK(std::abs(c.omega_star - std::sqrt(2.0)) <= 1e-10);
  CHECK(certificate_valid(build_laplacians(testing::example1()), c));
  CHECK_FALSE(c.marginal);
}

TEST_CASE("pbh_check on the second example") {
  const auto v = pbh_check(testing::example2());
  CHECK_FALSE(v.synchronizes);
  REQUIRE(v.certificate);
  CHECK(v.certificate->lambda_star == Approx(2.0).epsilon(1e-12));
  CHECK(oracle::abs_cosine(v.certificate->xi_star, vec({1, -1, -1, 1})) >= 1.0 - 1e-8);
  CHECK(std::abs(v.certificate->omega_star - std::sqrt(3.0)) <= 1e-10);
}

TEST_CASE("pbh_check with path-connected dampers synchronizes") {
  CHECK(pbh_check(testing::path_dampers(3)).synchronizes);
  CHECK(pbh_check(array_from_edges(3, 1.0, {{0, 1, 1.0, 3.0}, {1, 2, 1.0, 0.0}, {0, 2, 0.0, 2.0}}))
            .synchronizes);
}

TEST_CASE("pbh_check on two oscillators joined by a spring only") {
  // R has eigenvalues 0 (on 1) and 2 (on [1,-1]); D = 0 so the second eigenvector
  // is undamped.
  const auto a = array_from_edges(2, 1.0, {{0, 1, 0.0, 1.0}});
  const auto L = build_laplacians(a);
  CHECK(oracle::exact_nullity(stack(L.R, L.D)) == 1);
  CHECK(oracle::exact_nullity(stack(L.R - 2.0 * Eigen::MatrixXd::Identity(2, 2), L.D)) == 1);

  const auto v = pbh_check(a);
  CHECK_FALSE(v.synchronizes);
  REQUIRE(v.certificate);
  CHECK(v.certificate->lambda_star == Approx(2.0).epsilon(1e-12));
  CHECK(oracle::abs_cosine(v.certificate->xi_star, vec({1, -1})) >= 1.0 - 1e-12);
  CHECK(v.certificate->omega_star == Approx(std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("a single oscillator always synchronizes") {
  const auto a = array_from_edges(1, 3.0, {});
  CHECK(pbh_check(a).synchronizes);
  CHECK(observability_check(a).synchronizes);
  CHECK(sufficient_check(a).overall);
}

TEST_CASE("unobservable_subspace") {
  const auto path = build_laplacians(testing::path_dampers(4));
  const auto u = unobservable_subspace(path.D, path.R);
  REQUIRE(u.dimension() == 1);
  CHECK(oracle::abs_cosine(u.basis.col(0), Eigen::VectorXd::Ones(4)) == Approx(1.0));

  const auto L = build_laplacians(testing::example1());
  const Eigen::MatrixXd obs = observability_stack(L.D, L.R);
  const long expected = oracle::exact_nullity(obs);
  CHECK(expected == 2);
  const auto u1 = unobservable_subspace(L.D, L.R);
  CHECK(u1.dimension() == expected);
  // span{1, [1,0,-1,0]}: both vectors lie in the computed subspace.
  const Eigen::MatrixXd proj = u1.basis * u1.basis.transpose();
  CHECK((proj * Eigen::VectorXd::Ones(4) - Eigen::VectorXd::Ones(4)).norm() <= 1e-12);
  CHECK((proj * vec({1, 0, -1, 0}) - vec({1, 0, -1, 0})).norm() <= 1e-12);

  CHECK(unobservable_subspace(Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 3)).dimension() ==
        3);
}

TEST_CASE("observability_check on the examples") {
  const auto v1 = observability_check(testing::example1());
  CHECK_FALSE(v1.synchronizes);
  REQUIRE(v1.certificate);
  CHECK(certificate_valid(build_laplacians(testing::example1()), *v1.certificate));

  const auto L2 = build_laplacians(testing::example2());
  CHECK(oracle::exact_nullity(observability_stack(L2.D, L2.R)) >= 2);
  const auto v2 = observability_check(testing::example2());
  CHECK_FALSE(v2.synchronizes);
  REQUIRE(v2.certificate);
  CHECK(oracle::abs_cosine(v2.certificate->xi_star, vec({1, -1, -1, 1})) >= 1.0 - 1e-8);

  std::mt19937_64 rng(21);
  for (int k = 0; k < 20; ++k) {
    auto a = testing::random_array(rng, 6, 0.6);
    // Force a connected damper graph with a path of dampers.
    Eigen::MatrixXd d = a.d();
    for (Index i = 0; i + 1 < 6; ++i) d(i, i + 1) = d(i + 1, i) = 1.0;
    CHECK(observability_check(validate_array(1.0, d, a.r())).synchronizes);
  }
}

TEST_CASE("characteristic frequencies of the example blocks") {
  const auto rd1 = build_r_delta(testing::example1()).decomposition;
  const auto w1 = characteristic_frequencies(rd1.blocks[0], 1.0);
  REQUIRE(w1.size() == 3);
  CHECK(w1[0] == Approx(1.0).epsilon(1e-12));
  CHECK(w1[1] == Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(w1[2] == Approx(2.0).epsilon(1e-12));
  const auto w2 = characteristic_frequencies(rd1.blocks[1], 1.0);
  REQUIRE(w2.size() == 1);
  CHECK(w2[0] == 1.0);

  const auto rd2 = build_r_delta(testing::example2()).decomposition;
  const auto w3 = characteristic_frequencies(rd2.blocks[0], 1.0);
  REQUIRE(w3.size() == 2);
  CHECK(w3[1] == Approx(std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("single_output_observable") {
  const auto r1 = build_r_delta(testing::example1()).decomposition.blocks[0];
  CHECK_FALSE(single_output_observable(r1, 1));
  CHECK(single_output_observable(r1, 0));
  CHECK(single_output_observable(r1, 2));
  // Exact rank oracle on the integer observability matrices.
  for (Index k = 0; k < 3; ++k) {
    const Eigen::MatrixXd obs = observability_stack(Eigen::RowVectorXd::Unit(3, k), r1);
    CHECK((oracle::exact_nullity(obs) == 0) == single_output_observable(r1, k));
  }
  const auto r2 = build_r_delta(testing::example2()).decomposition.blocks[0];
  CHECK(single_output_observable(r2, 0));
  CHECK(single_output_observable(r2, 1));
}

TEST_CASE("zero_entry_eigenvector_check") {
  const auto r1 = build_r_delta(testing::example1()).decomposition.blocks[0];
  CHECK(zero_entry_eigenvector_check(r1) == ZeroEntry::Present);
  Eigen::MatrixXd r2(2, 2);
  r2 << 1.3, -1.3, -1.3, 1.3;
  CHECK(zero_entry_eigenvector_check(r2) == ZeroEntry::None);
  CHECK(zero_entry_eigenvector_check(Eigen::MatrixXd::Zero(1, 1)) == ZeroEntry::None);
  // Star graph on four vertices: eigenvalue 1 has multiplicity two.
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(4, 4);
  for (Index i = 1; i < 4; ++i) w(0, i) = w(i, 0) = 1.0;
  CHECK(zero_entry_eigenvector_check(laplacian(w)) == ZeroEntry::Indeterminate);
}

TEST_CASE("zero-entry and single-output forms agree on simple spectra") {
  std::mt19937_64 rng(8);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = testing::random_array(rng, 6, 0.7);
    for (const auto& block : build_r_delta(a).decomposition.blocks) {
      const auto z = zero_entry_eigenvector_check(block);
      if (z == ZeroEntry::Indeterminate) continue;
      bool all_observable = true;
      for (Index k = 0; k < block.rows(); ++k)
        all_observable = all_observable && single_output_observable(block, k);
      CHECK(all_observable == (z == ZeroEntry::None));
      ++compared;
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("sufficient_check attribution on the examples") {
  const auto s1 = sufficient_check(testing::example1());
  CHECK_FALSE(s1.cond1);
  CHECK_FALSE(s1.blocks[0].observable_from[1]);
  CHECK(s1.blocks[1].observable_from[0]);
  CHECK(s1.cond2);
  CHECK(s1.cond3);
  CHECK(s1.sum_graph_connected);
  CHECK_FALSE(s1.overall);
  CHECK(sufficient_verdict(s1).inconclusive);

  const auto s2 = sufficient_check(testing::example2());
  CHECK(s2.cond1);
  CHECK_FALSE(s2.cond2);
  REQUIRE(s2.common_frequencies.size() == 2);
  CHECK(std::abs(s2.common_frequencies[0] - 1.0) <= 1e-10);
  CHECK(std::abs(s2.common_frequencies[1] - std::sqrt(3.0)) <= 1e-10);
  CHECK(s2.cond3);
  CHECK_FALSE(s2.overall);

  const auto s3 = sufficient_check(array_from_edges(4, 1.0, {{0, 1, 1, 0}, {1, 2, 1, 0}, {2, 3, 1, 0}}));
  CHECK(s3.overall);
  CHECK(sufficient_verdict(s3).synchronizes);
}

TEST_CASE("intersect_nullspaces") {
  CHECK(intersect_nullspaces(Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 3)).dimension() ==
        3);
  const auto L = build_laplacians(testing::example1());
  const auto ns = intersect_nullspaces(L.R, L.D);
  REQUIRE(ns.dimension() == 1);
  CHECK(oracle::abs_cosine(ns.basis.col(0), Eigen::VectorXd::Ones(4)) == Approx(1.0));
  const auto P = build_laplacians(testing::path_dampers(5));
  CHECK(intersect_nullspaces(P.D, P.R).dimension() == 1);
}

TEST_CASE("pbh and observability agree and certificates are valid") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> qdist(2, 8);
  const double densities[] = {0.2, 0.5, 0.9};
  int failures = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = testing::random_array(rng, qdist(rng), densities[trial % 3]);
    const auto L = build_laplacians(a);
    const auto p = pbh_check(a);
    const auto o = observability_check(a);
    CHECK(p.synchronizes == o.synchronizes);
    if (!p.synchronizes) {
      ++failures;
      REQUIRE(p.certificate);
      CHECK(certificate_valid(L, *p.certificate));
      REQUIRE(o.certificate);
      CHECK(certificate_valid(L, *o.certificate));
    }
    if (sufficient_check(a).overall) CHECK(p.synchronizes);
  }
  CHECK(failures > 30);
}
