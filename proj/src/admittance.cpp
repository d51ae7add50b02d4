#include "harmsync/admittance.hpp"

#include <numeric>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "harmsync/error.hpp"

namespace harmsync {

namespace {

using Poly = Polynomial<double>;

Eigen::MatrixXd weights_of(const Eigen::MatrixXd& laplacian_matrix) {
  Eigen::MatrixXd w = -laplacian_matrix;
  w.diagonal().setZero();
  return w;
}

// Unit vector orthogonal to 1 spanning most of the basis, largest entry real positive.
Eigen::VectorXcd complex_spread_direction(const Eigen::MatrixXcd& basis) {
  Eigen::MatrixXcd centered = basis;
  for (Index k = 0; k < centered.cols(); ++k) centered.col(k) = remove_mean(basis.col(k));
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(centered, Eigen::ComputeThinU);
  Eigen::VectorXcd xi = remove_mean(svd.matrixU().col(0));
  xi.normalize();
  Index peak = 0;
  xi.cwiseAbs().maxCoeff(&peak);
  const Complex phase = std::abs(xi(peak)) > 0.0 ? std::conj(xi(peak)) / std::abs(xi(peak)) : 1.0;
  return xi * phase;
}

double min_singular_ratio(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1) / std::max(1.0, s(0));
}

double min_singular_value(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

struct NodeEvaluation {
  bool grounded = false;
  bool short_circuit = false;
  Eigen::MatrixXcd E;
  YEvaluation Y;
};

// Coupling values at jw with poles marked infinite; collects the shorted pairs.
Eigen::MatrixXcd coupling_values(const GeneralNetwork& net, double omega,
                                 std::vector<std::pair<Index, Index>>& shorts) {
  const Index q = net.q();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(q, q);
  for (Index i = 0; i < q; ++i) {
    for (Index j = i + 1; j < q; ++j) {
      const auto& y = net.couplings(i, j);
      if (y.is_zero()) continue;
      if (y.has_pole_at(omega)) {
        c(i, j) = c(j, i) = Complex(std::numeric_limits<double>::infinity(), 0.0);
        shorts.emplace_back(i, j);
      } else {
        c(i, j) = c(j, i) = y.at_jw(omega);
      }
    }
  }
  return c;
}

NodeEvaluation evaluate_nodes(const GeneralNetwork& net, double omega) {
  NodeEvaluation out;
  if (net.y0.has_pole_at(omega)) {
    out.grounded = true;
    return out;
  }
  const Complex y0 = net.y0.at_jw(omega);
  std::vector<std::pair<Index, Index>> shorts;
  const Eigen::MatrixXcd c = coupling_values(net, omega, shorts);
  if (shorts.empty()) {
    Eigen::MatrixXcd Y = laplacian(c);
    out.E = Y + y0 * Eigen::MatrixXcd::Identity(net.q(), net.q());
    out.Y = std::move(Y);
  } else {
    auto reduced = reduce_short_circuits(c, shorts);
    out.short_circuit = true;
    out.E = reduced.node_matrix(y0);
    out.Y = std::move(reduced);
  }
  return out;
}

OrderedSpectrum order_spectrum(const Eigen::VectorXcd& values, const Eigen::MatrixXcd& node_vectors) {
  const Index n = values.size();
  OrderedSpectrum out;
  if (n == 0) return out;
  const double root_q = std::sqrt(static_cast<double>(node_vectors.rows()));
  Index pinned = 0;
  for (Index k = 0; k < n; ++k) {
    const double norm = node_vectors.col(k).norm();
    const double align = norm > 0.0 ? std::abs(node_vectors.col(k).sum()) / (norm * root_q) : 0.0;
    if (align > out.ones_alignment) {
      out.ones_alignment = align;
      pinned = k;
    }
  }
  std::vector<Index> rest;
  for (Index k = 0; k < n; ++k)
    if (k != pinned) rest.push_back(k);
  std::sort(rest.begin(), rest.end(), [&](Index a, Index b) {
    if (values(a).real() != values(b).real()) return values(a).real() < values(b).real();
    return values(a).imag() < values(b).imag();
  });
  out.values.resize(n);
  out.values(0) = values(pinned);
  for (std::size_t k = 0; k < rest.size(); ++k) out.values(static_cast<Index>(k) + 1) = values(rest[k]);
  return out;
}

// Brent search for the local minimum of the normalized smallest singular value.
double refine_frequency(const GeneralNetwork& net, double omega) {
  const double delta = kRootClusterRadius * (1.0 + omega);
  const double lo = std::max(0.0, omega - delta), hi = omega + delta;
  auto objective = [&](double w) {
    if (net.y0.has_pole_at(w)) return 1.0;
    for (Index i = 0; i < net.q(); ++i)
      for (Index j = i + 1; j < net.q(); ++j)
        if (net.couplings(i, j).has_pole_at(w)) return 1.0;
    return min_singular_ratio(evaluate_nodes(net, w).E);
  };
  const auto [best, value] = boost::math::tools::brent_find_minima(objective, lo, hi, 50);
  return value <= objective(omega) ? best : omega;
}

std::vector<double> axis_zeros(const Poly& p) {
  std::vector<double> out;
  if (p.degree() < 1) return out;
  const Eigen::VectorXcd r = p.roots();
  for (Index k = 0; k < r.size(); ++k) {
    const double scale = 1.0 + std::abs(r(k));
    if (std::abs(r(k).real()) <= kRootAxisTolerance * scale && r(k).imag() >= -kRootAxisTolerance * scale) {
      out.push_back(std::max(0.0, r(k).imag()));
    }
  }
  return out;
}

}  // namespace

LcNetwork lc_from_array(double c0, double l0, const Eigen::MatrixXd& g, const Eigen::MatrixXd& h) {
  std::vector<ValidationIssue> issues;
  if (!(c0 > 0.0) || !std::isfinite(c0)) issues.push_back({ErrorKind::NonPositiveParameter, -1, -1, "c0 must be positive"});
  if (!(l0 > 0.0) || !std::isfinite(l0)) issues.push_back({ErrorKind::NonPositiveParameter, -1, -1, "l0 must be positive"});
  if (!issues.empty()) throw ValidationError(std::move(issues));
  validate_array(1.0 / std::sqrt(l0 * c0), g / c0, h / c0);
  return LcNetwork{c0, l0, laplacian(g), laplacian(h)};
}

OscillatorArray equivalent_array(const LcNetwork& net) {
  return validate_array(net.omega0(), weights_of(net.G) / net.c0, weights_of(net.H) / net.c0);
}

Eigen::MatrixXcd eval_Y(const LcNetwork& net, double omega) {
  if (omega == 0.0) throw std::invalid_argument("eval_Y: G + H/s has a pole at omega = 0");
  return net.G.cast<Complex>() - Complex(0.0, 1.0 / omega) * net.H.cast<Complex>();
}

GeneralNetwork make_general(Index q, RationalFunction y0, const std::vector<RationalEdge>& edges) {
  std::vector<ValidationIssue> issues;
  if (q < 1) issues.push_back({ErrorKind::ShapeMismatch, -1, -1, "network needs at least one node"});
  if (y0.is_zero()) issues.push_back({ErrorKind::NonPositiveParameter, -1, -1, "y0 must not be identically zero"});
  GeneralNetwork net{std::move(y0), RationalMatrix(std::max<Index>(q, 0))};
  std::vector<std::vector<bool>> seen(static_cast<std::size_t>(std::max<Index>(q, 0)),
                                      std::vector<bool>(static_cast<std::size_t>(std::max<Index>(q, 0)), false));
  for (const auto& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= q || e.j >= q) {
      issues.push_back({ErrorKind::ShapeMismatch, e.i, e.j, "edge index out of range"});
      continue;
    }
    if (e.i == e.j) {
      issues.push_back({ErrorKind::NonzeroDiagonal, e.i, e.j, "self coupling"});
      continue;
    }
    if (seen[e.i][e.j]) {
      issues.push_back({ErrorKind::NonSymmetric, e.i, e.j, "coupling listed twice"});
      continue;
    }
    seen[e.i][e.j] = seen[e.j][e.i] = true;
    net.couplings(e.i, e.j) = e.y;
    net.couplings(e.j, e.i) = e.y;
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return net;
}

GeneralNetwork to_general(const LcNetwork& net) {
  const Index q = net.q();
  std::vector<RationalEdge> edges;
  for (Index i = 0; i < q; ++i) {
    for (Index j = i + 1; j < q; ++j) {
      const double g = -net.G(i, j), h = -net.H(i, j);
      if (g == 0.0 && h == 0.0) continue;
      edges.push_back({i, j, RationalFunction(Poly({h, g}), Poly({0.0, 1.0}))});
    }
  }
  RationalFunction y0(Poly({1.0, 0.0, net.c0 * net.l0}), Poly({0.0, net.l0}));
  return make_general(q, std::move(y0), edges);
}

RationalMatrix admittance_matrix(const GeneralNetwork& net) {
  const Index q = net.q();
  RationalMatrix Y(q);
  for (Index i = 0; i < q; ++i) {
    for (Index j = 0; j < q; ++j) {
      if (i == j) continue;
      const auto& y = net.couplings(i, j);
      if (y.is_zero()) continue;
      Y(i, j) = -y;
      Y(i, i) += y;
    }
  }
  return Y;
}

RationalMatrix node_matrix(const GeneralNetwork& net) {
  RationalMatrix m = admittance_matrix(net);
  for (Index i = 0; i < net.q(); ++i) m(i, i) += net.y0;
  return m;
}

Eigen::MatrixXd ReducedSystem::incidence() const {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(q(), static_cast<Index>(groups.size()));
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (Index i : groups[g]) T(i, static_cast<Index>(g)) = 1.0;
  return T;
}

ReducedSystem reduce_short_circuits(const Eigen::MatrixXcd& coupling,
                                    const std::vector<std::pair<Index, Index>>& short_pairs) {
  const Index q = coupling.rows();
  std::vector<Index> parent(static_cast<std::size_t>(q));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& [a, b] : short_pairs) {
    if (a < 0 || b < 0 || a >= q || b >= q || a == b) {
      throw Error(ErrorKind::InconsistentShort, "short-circuit pair out of range");
    }
    const Index ra = find(a), rb = find(b);
    parent[std::max(ra, rb)] = std::min(ra, rb);
  }

  ReducedSystem out;
  std::vector<Index> group_of(static_cast<std::size_t>(q), -1);
  for (Index i = 0; i < q; ++i) {
    const Index root = find(i);
    if (group_of[root] < 0) {
      group_of[root] = static_cast<Index>(out.groups.size());
      out.groups.emplace_back();
    }
    group_of[i] = group_of[root];
    out.groups[group_of[i]].push_back(i);
  }
  for (Index i = 0; i < q; ++i) {
    for (Index j = 0; j < q; ++j) {
      if (i != j && !std::isfinite(std::abs(coupling(i, j))) && group_of[i] != group_of[j]) {
        std::ostringstream os;
        os << "infinite admittance between nodes " << i + 1 << " and " << j + 1 << " is not shorted";
        throw Error(ErrorKind::InconsistentShort, os.str());
      }
    }
  }

  const Index k = static_cast<Index>(out.groups.size());
  out.matrix = Eigen::MatrixXcd::Zero(q, q);
  out.mask = Eigen::MatrixXd::Zero(q, q);
  out.quotient = Eigen::MatrixXcd::Zero(k, k);
  out.group_sizes.resize(k);
  // Finite part of node c's admittance leaving group g, and of group g into node c.
  auto leaving = [&](Index c, Index g) {
    Complex acc(0.0, 0.0);
    for (Index m = 0; m < q; ++m)
      if (m != c && group_of[m] != g) acc += coupling(c, m);
    return acc;
  };
  Index row = 0;
  for (Index i = 0; i < q; ++i) {
    const Index g = group_of[i];
    const auto& members = out.groups[g];
    if (members.front() != i) continue;
    for (Index c = 0; c < q; ++c) {
      if (group_of[c] == g) {
        out.matrix(row, c) = leaving(c, g);
        out.mask(row, c) = 1.0;
      } else {
        for (Index m : members) out.matrix(row, c) -= coupling(m, c);
      }
    }
    ++row;
  }
  for (const auto& members : out.groups) {
    for (std::size_t a = 0; a + 1 < members.size(); ++a) {
      out.matrix(row, members[a]) = 1.0;
      out.matrix(row, members[a + 1]) = -1.0;
      ++row;
    }
  }
  for (Index g = 0; g < k; ++g) {
    out.group_sizes(g) = static_cast<double>(out.groups[g].size());
    for (Index i : out.groups[g]) {
      for (Index m = 0; m < q; ++m) {
        if (m == i || group_of[m] == g) continue;
        out.quotient(g, g) += coupling(i, m);
        out.quotient(g, group_of[m]) -= coupling(i, m);
      }
    }
  }
  return out;
}

YEvaluation eval_Y(const GeneralNetwork& net, double omega) {
  if (net.y0.has_pole_at(omega)) {
    std::ostringstream os;
    os << "y0 is infinite at omega = " << omega << "; every node voltage is zero";
    throw Error(ErrorKind::OscillatorShortCircuit, os.str());
  }
  std::vector<std::pair<Index, Index>> shorts;
  const Eigen::MatrixXcd c = coupling_values(net, omega, shorts);
  if (shorts.empty()) return Eigen::MatrixXcd(laplacian(c));
  return reduce_short_circuits(c, shorts);
}

OrderedSpectrum ordered_spectrum(const Eigen::MatrixXcd& Y) {
  if (Y.size() == 0) return {};
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Y);
  return order_spectrum(es.eigenvalues(), es.eigenvectors());
}

OrderedSpectrum ordered_spectrum(const ReducedSystem& reduced) {
  const Eigen::MatrixXcd A = reduced.group_sizes.cwiseInverse().asDiagonal() * reduced.quotient;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A);
  const Eigen::MatrixXcd nodes = reduced.incidence().cast<Complex>() * es.eigenvectors();
  return order_spectrum(es.eigenvalues(), nodes);
}

namespace {
Complex second(const OrderedSpectrum& s) {
  if (s.values.size() < 2) return Complex(std::numeric_limits<double>::infinity(), 0.0);
  return s.values(1);
}
}  // namespace

Complex lambda2(const Eigen::MatrixXcd& Y) { return second(ordered_spectrum(Y)); }
Complex lambda2(const ReducedSystem& reduced) { return second(ordered_spectrum(reduced)); }
double lambda2_real(const Eigen::MatrixXcd& Y) { return lambda2(Y).real(); }
double lambda2_real(const ReducedSystem& reduced) { return lambda2(reduced).real(); }
double lambda2_real(const YEvaluation& y) {
  return std::visit([](const auto& v) { return lambda2_real(v); }, y);
}

std::vector<double> default_probes(const LcNetwork& net) {
  const double w0 = net.omega0();
  std::vector<double> probes = {0.5 * w0, w0, 2.0 * w0};
  if (net.q() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(net.H, Eigen::EigenvaluesOnly);
    const double tol = eig_tolerance(net.H.cwiseAbs().rowwise().sum().maxCoeff());
    for (Index k = 0; k < es.eigenvalues().size(); ++k) {
      const double lam = es.eigenvalues()(k);
      if (lam > tol) probes.push_back(std::sqrt(lam));
    }
  }
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, b); }),
               probes.end());
  return probes;
}

LcCheck lc_sync_check(const LcNetwork& net, const std::vector<double>& probes_in, const RankOptions& opts) {
  const auto probes = probes_in.empty() ? default_probes(net) : probes_in;
  LcCheck out;
  out.verdict.method = Method::LcAdmittance;
  auto& rep = out.report;
  std::optional<bool> first_sign;
  double worst = std::numeric_limits<double>::infinity();
  for (double w : probes) {
    const Eigen::MatrixXcd Y = eval_Y(net, w);
    const auto spectrum = ordered_spectrum(Y);
    const double tol = eig_tolerance(spectral_norm(Y));
    const double re2 = second(spectrum).real();
    for (Index k = 0; k < spectrum.values.size(); ++k) {
      if (spectrum.values(k).real() < -tol || spectrum.values(k).imag() > tol) out.half_plane_ok = false;
    }
    const bool positive = re2 > tol;
    if (!first_sign) first_sign = positive;
    else if (*first_sign != positive) out.frequency_collapse = false;

    CandidateCheck c;
    c.omega = w;
    c.synchronizes = positive;
    c.re_lambda2 = re2;
    rep.candidates.push_back(std::move(c));
    rep.omegas.push_back(w);
    rep.re_lambda2.push_back(re2);
    if (re2 < worst) {
      worst = re2;
      rep.worst_omega = w;
    }
    if (!positive) rep.verdict = false;
  }
  rep.steady_state_frequencies = {net.omega0()};
  out.verdict.synchronizes = rep.verdict;

  out.pbh = pbh_check(equivalent_array(net), opts);
  out.pbh_agrees = out.pbh.synchronizes == rep.verdict;
  if (!out.pbh_agrees) out.verdict.warnings.push_back("lambda_2 probes disagree with pbh_check");
  if (!out.frequency_collapse) out.verdict.warnings.push_back("sign of Re lambda_2 differs across probes");
  if (!out.half_plane_ok) out.verdict.warnings.push_back("an eigenvalue of Y(jw) left the LC half-plane");
  if (!rep.verdict && out.pbh.certificate) {
    out.verdict.certificate = out.pbh.certificate;
    rep.certificate = FrequencyCertificate{out.pbh.certificate->omega_star,
                                           out.pbh.certificate->xi_star.cast<Complex>()};
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, Index points) {
  std::vector<double> out(static_cast<std::size_t>(points));
  if (points == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (Index k = 0; k < points; ++k) {
    out[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(points - 1));
  }
  out.back() = hi;
  return out;
}

std::vector<FrequencyCandidate> candidate_frequencies(const GeneralNetwork& net) {
  std::vector<FrequencyCandidate> raw;

  const auto det = rational_det(node_matrix(net));
  const Poly& n = det.numerator();
  if (n.degree() >= 1) {
    const Eigen::VectorXcd r = n.roots();
    const Index m = r.size();
    std::vector<Index> parent(static_cast<std::size_t>(m));
    std::iota(parent.begin(), parent.end(), Index{0});
    auto find = [&](Index a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    for (Index a = 0; a < m; ++a)
      for (Index b = a + 1; b < m; ++b)
        if (std::abs(r(a) - r(b)) <= kRootClusterRadius * (1.0 + std::abs(r(a)))) parent[find(b)] = find(a);
    std::vector<std::vector<Index>> clusters(static_cast<std::size_t>(m));
    for (Index a = 0; a < m; ++a) clusters[find(a)].push_back(a);
    for (const auto& members : clusters) {
      if (members.empty()) continue;
      Complex centroid(0.0, 0.0);
      for (Index a : members) centroid += r(a);
      centroid /= static_cast<double>(members.size());
      const double scale = 1.0 + std::abs(centroid);
      if (std::abs(centroid.real()) > kRootAxisTolerance * scale) continue;
      if (centroid.imag() < -kRootAxisTolerance * scale) continue;
      FrequencyCandidate c;
      c.omega = std::max(0.0, centroid.imag());
      c.multiplicity = static_cast<Index>(members.size());
      c.from_root = true;
      raw.push_back(c);
    }
  }

  auto add_poles = [&](const RationalFunction& y) {
    for (double w : y.axis_poles()) {
      FrequencyCandidate c;
      c.omega = w;
      c.from_pole = true;
      raw.push_back(c);
    }
  };
  add_poles(net.y0);
  for (Index i = 0; i < net.q(); ++i)
    for (Index j = i + 1; j < net.q(); ++j) add_poles(net.couplings(i, j));
  for (double w : axis_zeros(net.y0.numerator())) {
    FrequencyCandidate c;
    c.omega = w;
    c.from_y0_zero = true;
    raw.push_back(c);
  }

  // Roots away from poles are polished on the node matrix itself.
  for (auto& c : raw) {
    if (!c.from_root || c.omega <= 0.0) continue;
    bool at_pole = net.y0.has_pole_at(c.omega, 1e-6);
    for (Index i = 0; i < net.q() && !at_pole; ++i)
      for (Index j = i + 1; j < net.q() && !at_pole; ++j) at_pole = net.couplings(i, j).has_pole_at(c.omega, 1e-6);
    if (!at_pole) c.omega = refine_frequency(net, c.omega);
  }

  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.omega < b.omega; });
  std::vector<FrequencyCandidate> out;
  for (const auto& c : raw) {
    if (!out.empty() && std::abs(out.back().omega - c.omega) <= 1e-7 * (1.0 + c.omega)) {
      auto& prev = out.back();
      if (c.from_pole && !prev.from_pole) prev.omega = c.omega;  // poles are exact
      prev.multiplicity = std::max(prev.multiplicity, c.multiplicity);
      prev.from_root |= c.from_root;
      prev.from_pole |= c.from_pole;
      prev.from_y0_zero |= c.from_y0_zero;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

void check_passive(const GeneralNetwork& net) {
  const auto grid = log_grid(1e-3, 1e3, 121);
  auto check = [&](const RationalFunction& y, const std::string& name) {
    if (y.is_zero()) return;
    for (double w : grid) {
      if (y.has_pole_at(w, 1e-6)) continue;
      const Complex v = y.at_jw(w);
      if (v.real() < -1e-9 * std::max(1.0, std::abs(v))) {
        std::ostringstream os;
        os << name << " has Re y(jw) = " << v.real() << " < 0 at w = " << w;
        throw Error(ErrorKind::NotPassive, os.str());
      }
    }
  };
  check(net.y0, "y0");
  for (Index i = 0; i < net.q(); ++i)
    for (Index j = i + 1; j < net.q(); ++j) {
      std::ostringstream name;
      name << "y" << i + 1 << "," << j + 1;
      check(net.couplings(i, j), name.str());
    }
}

namespace {

// |y(jw)| without the cancellation between terms of the numerator.
double termwise_magnitude(const RationalFunction& y, double omega) {
  double den = 1.0;
  for (const auto& f : y.denominator_factors()) den *= std::abs(f(Complex(0.0, omega)));
  return y.numerator().magnitude_at(omega) / den;
}

CandidateCheck check_candidate(const GeneralNetwork& net, const FrequencyCandidate& cand,
                               const RankOptions& opts) {
  CandidateCheck out;
  out.omega = cand.omega;
  out.multiplicity = cand.from_root ? cand.multiplicity : 0;
  const auto ev = evaluate_nodes(net, cand.omega);
  if (ev.grounded) {
    out.grounded = true;
    out.basis = Eigen::MatrixXcd::Zero(net.q(), 0);
    out.re_lambda2 = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.short_circuit = ev.short_circuit;
  out.re_lambda2 = lambda2_real(ev.Y);
  // Scaled by the summands, since y0(jw) I + Y(jw) may vanish entirely at a candidate.
  const double coupling_norm = std::visit([](const auto& y) {
    if constexpr (std::is_same_v<std::decay_t<decltype(y)>, ReducedSystem>) return y.matrix.norm();
    else return y.norm();
  }, ev.Y);
  const double scale = std::max(termwise_magnitude(net.y0, cand.omega), coupling_norm);
  const auto ns = nullspace(ev.E, kCandidateRankTolerance, std::max(opts.abs_floor, kCandidateRankTolerance * scale));
  out.basis = ns.basis;
  out.synchronizes = subset_of_ones(ns.basis, kSubsetTolerance);
  out.potentially_defective = cand.from_root && !ev.short_circuit && cand.multiplicity > ns.dimension();
  return out;
}

}  // namespace

GeneralCheck general_sync_check(const GeneralNetwork& net, const RankOptions& opts) {
  check_passive(net);
  GeneralCheck out;
  out.verdict.method = Method::GeneralAdmittance;
  auto& rep = out.report;

  auto candidates = candidate_frequencies(net);
  double ref = 1.0;
  for (const auto& c : candidates) ref = std::max(ref, c.omega);

  // Confirmation sweep: a near-singular node matrix away from every candidate means
  // the root finder missed one, so it is added and checked.
  const auto grid = log_grid(1e-3 * ref, 1e3 * ref, kConfirmationPoints);
  double worst = std::numeric_limits<double>::infinity();
  std::vector<FrequencyCandidate> missed;
  for (double w : grid) {
    const auto ev = evaluate_nodes(net, w);
    if (ev.grounded) continue;
    const double re2 = lambda2_real(ev.Y);
    rep.omegas.push_back(w);
    rep.re_lambda2.push_back(re2);
    if (re2 < worst) {
      worst = re2;
      rep.worst_omega = w;
    }
    if (min_singular_ratio(ev.E) > 1e-6) continue;
    bool known = false;
    for (const auto& c : candidates) known |= std::abs(c.omega - w) <= 1e-2 * (1.0 + w);
    if (!known) {
      FrequencyCandidate c;
      c.omega = refine_frequency(net, w);
      missed.push_back(c);
      std::ostringstream os;
      os << "confirmation sweep found a near-singular node matrix at w = " << c.omega;
      out.verdict.warnings.push_back(os.str());
    }
  }
  candidates.insert(candidates.end(), missed.begin(), missed.end());
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) { return a.omega < b.omega; });

  for (const auto& cand : candidates) {
    auto check = check_candidate(net, cand, opts);
    if (check.potentially_defective) {
      std::ostringstream os;
      os << "potentially defective at w = " << check.omega << " (root multiplicity " << check.multiplicity
         << " > null-space dimension " << check.basis.cols() << "); verdict unverified there";
      out.verdict.warnings.push_back(os.str());
    }
    if (!check.synchronizes && rep.verdict) {
      rep.verdict = false;
      rep.certificate = FrequencyCertificate{check.omega, complex_spread_direction(check.basis)};
    }
    if (cand.from_y0_zero) rep.steady_state_frequencies.push_back(cand.omega);
    rep.candidates.push_back(std::move(check));
  }
  out.verdict.synchronizes = rep.verdict;
  return out;
}

std::vector<SweepRow> sweep(const GeneralNetwork& net, const std::vector<double>& omegas) {
  std::vector<SweepRow> rows;
  for (double w : omegas) {
    const auto ev = evaluate_nodes(net, w);
    if (ev.grounded) continue;
    SweepRow row;
    row.omega = w;
    row.lambda2 = std::visit([](const auto& v) { return lambda2(v); }, ev.Y);
    row.min_singular_value = min_singular_value(ev.E);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace harmsync
