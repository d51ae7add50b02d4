#pragma once

#include <random>
#include <vector>

#include "harmsync/admittance.hpp"
#include "harmsync/network.hpp"

namespace harmsync::testing {

// Four oscillators: springs on (1,2),(2,3), one damper on (2,4).
inline OscillatorArray example1(double d = 1.0, double r = 1.0, double omega0 = 1.0) {
  return array_from_edges(4, omega0, {{0, 1, 0.0, r}, {1, 2, 0.0, r}, {1, 3, d, 0.0}});
}

// Four oscillators: springs on (1,2),(3,4), one damper on (2,3).
inline OscillatorArray example2(double d = 1.0, double r = 1.0, double omega0 = 1.0) {
  return array_from_edges(4, omega0, {{0, 1, 0.0, r}, {2, 3, 0.0, r}, {1, 2, d, 0.0}});
}

// Dampers along a path, springs on a couple of chords.
inline OscillatorArray path_dampers(Index q = 3, double omega0 = 1.0) {
  std::vector<WeightedPair> edges;
  for (Index i = 0; i + 1 < q; ++i) edges.push_back({i, i + 1, 1.0, 0.0});
  if (q > 2) edges.push_back({0, q - 1, 0.0, 0.5});
  return array_from_edges(q, omega0, edges);
}

// Symmetric weights drawn mostly from {1, 2} so that structured (non-synchronizing)
// arrays are common; each present edge is a damper, a spring, or both.
inline OscillatorArray random_array(std::mt19937_64& rng, Index q, double density,
                                    double omega0 = 1.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto weight = [&] {
    if (unit(rng) < 0.7) return unit(rng) < 0.5 ? 1.0 : 2.0;
    return 0.5 + 1.5 * unit(rng);
  };
  std::vector<WeightedPair> edges;
  for (Index i = 0; i < q; ++i) {
    for (Index j = i + 1; j < q; ++j) {
      if (unit(rng) >= density) continue;
      const double kind = unit(rng);
      WeightedPair e{i, j, 0.0, 0.0};
      if (kind < 0.4) e.d = weight();
      else if (kind < 0.8) e.r = weight();
      else { e.d = weight(); e.r = weight(); }
      edges.push_back(e);
    }
  }
  return array_from_edges(q, omega0, edges);
}

inline std::vector<Index> random_permutation(std::mt19937_64& rng, Index q) {
  std::vector<Index> p(static_cast<std::size_t>(q));
  for (Index i = 0; i < q; ++i) p[i] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// LC network whose equivalent array is random_array(q, density) scaled by c0.
inline LcNetwork random_lc(std::mt19937_64& rng, Index q, double density) {
  const double choices[] = {0.5, 1.0, 2.0};
  std::uniform_int_distribution<int> pick(0, 2);
  const double c0 = choices[pick(rng)], l0 = choices[pick(rng)];
  const auto a = random_array(rng, q, density);
  return lc_from_array(c0, l0, c0 * a.d(), c0 * a.r());
}

// Admittance of a random passive RLC one-port of numerator/denominator degree <= 2.
inline RationalFunction random_branch(std::mt19937_64& rng) {
  using P = Polynomial<double>;
  std::uniform_real_distribution<double> v(0.5, 2.0);
  std::uniform_int_distribution<int> kind(0, 6);
  const double R = v(rng), L = v(rng), C = v(rng);
  switch (kind(rng)) {
    case 0: return RationalFunction::constant(1.0 / R);
    case 1: return RationalFunction(P({0.0, C}), P({1.0}));
    case 2: return RationalFunction(P({1.0}), P({0.0, L}));
    case 3: return RationalFunction(P({1.0}), P({R, L}));                       // series RL
    case 4: return RationalFunction(P({0.0, C}), P({1.0, R * C}));              // series RC
    case 5: return RationalFunction(P({0.0, C}), P({1.0, R * C, L * C}));       // series RLC
    default: return RationalFunction(P({1.0, L / R, L * C}), P({0.0, L}));      // parallel RLC
  }
}

// Random general network: q in [2, 4], each pair coupled with probability density by
// one branch (or two in parallel); y0 a parallel RLC or LC tank.
inline GeneralNetwork random_general(std::mt19937_64& rng, Index q, double density) {
  using P = Polynomial<double>;
  std::uniform_real_distribution<double> unit(0.0, 1.0), v(0.5, 2.0);
  const double L = v(rng), C = v(rng);
  RationalFunction y0 = unit(rng) < 0.5 ? RationalFunction(P({1.0, 0.0, L * C}), P({0.0, L}))
                                        : RationalFunction(P({1.0, L / v(rng), L * C}), P({0.0, L}));
  std::vector<RationalEdge> edges;
  for (Index i = 0; i < q; ++i) {
    for (Index j = i + 1; j < q; ++j) {
      if (unit(rng) >= density) continue;
      RationalFunction y = random_branch(rng);
      if (unit(rng) < 0.3) y += random_branch(rng);
      edges.push_back({i, j, y});
    }
  }
  return make_general(q, y0, edges);
}

}  // namespace harmsync::testing
