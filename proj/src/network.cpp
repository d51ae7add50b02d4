#include "harmsync/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "harmsync/tolerances.hpp"

namespace harmsync {

namespace {

std::string at(Index i, Index j) {
  std::ostringstream os;
  os << "(" << i + 1 << "," << j + 1 << ")";
  return os.str();
}

void check_weights(const Eigen::MatrixXd& w, const char* name, std::vector<ValidationIssue>& issues) {
  const Index q = w.rows();
  for (Index i = 0; i < q; ++i) {
    if (w(i, i) != 0.0) {
      issues.push_back({ErrorKind::NonzeroDiagonal, static_cast<long>(i), -1,
                        std::string(name) + " diagonal entry at " + std::to_string(i + 1)});
    }
    for (Index j = 0; j < q; ++j) {
      if (!std::isfinite(w(i, j))) {
        issues.push_back({ErrorKind::NonFiniteWeight, static_cast<long>(i), static_cast<long>(j),
                          std::string(name) + " non-finite at " + at(i, j)});
        continue;
      }
      if (w(i, j) < 0.0) {
        issues.push_back({ErrorKind::NegativeWeight, static_cast<long>(i), static_cast<long>(j),
                          std::string(name) + " negative at " + at(i, j)});
      }
      if (j > i && w(i, j) != w(j, i)) {
        issues.push_back({ErrorKind::NonSymmetric, static_cast<long>(i), static_cast<long>(j),
                          std::string(name) + " asymmetric at " + at(i, j)});
      }
    }
  }
}

}  // namespace

OscillatorArray validate_array(double omega0, const Eigen::MatrixXd& d, const Eigen::MatrixXd& r) {
  std::vector<ValidationIssue> issues;
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
    issues.push_back({ErrorKind::NonPositiveOmega0, -1, -1, "omega0 must be positive and finite"});
  }
  if (d.rows() != d.cols() || r.rows() != r.cols() || d.rows() != r.rows() || d.rows() == 0) {
    issues.push_back({ErrorKind::ShapeMismatch, -1, -1, "d and r must be q x q with q >= 1"});
    throw ValidationError(std::move(issues));
  }
  check_weights(d, "d", issues);
  check_weights(r, "r", issues);
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return OscillatorArray(omega0, d, r);
}

OscillatorArray array_from_edges(Index q, double omega0, const std::vector<WeightedPair>& edges) {
  if (q < 1) throw ValidationError({{ErrorKind::ShapeMismatch, -1, -1, "q must be positive"}});
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(q, q);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(q, q);
  std::vector<ValidationIssue> issues;
  for (const auto& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= q || e.j >= q) {
      issues.push_back({ErrorKind::ShapeMismatch, static_cast<long>(e.i), static_cast<long>(e.j),
                        "edge index out of range at " + at(e.i, e.j)});
      continue;
    }
    if (e.i == e.j) {
      issues.push_back({ErrorKind::NonzeroDiagonal, static_cast<long>(e.i), -1,
                        "self-loop at " + std::to_string(e.i + 1)});
      continue;
    }
    d(e.i, e.j) = d(e.j, e.i) = e.d;
    r(e.i, e.j) = r(e.j, e.i) = e.r;
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return validate_array(omega0, d, r);
}

OscillatorArray permuted(const OscillatorArray& array, const std::vector<Index>& perm) {
  return validate_array(array.omega0(), permute_symmetric(array.d(), perm),
                        permute_symmetric(array.r(), perm));
}

Eigen::MatrixXd permute_symmetric(const Eigen::MatrixXd& m, const std::vector<Index>& perm) {
  const Index n = static_cast<Index>(perm.size());
  Eigen::MatrixXd out(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) out(a, b) = m(perm[a], perm[b]);
  return out;
}

LaplacianPair build_laplacians(const OscillatorArray& array) {
  return {laplacian(array.d()), laplacian(array.r())};
}

void validate_laplacian_pair(const LaplacianPair& pair) {
  std::vector<ValidationIssue> issues;
  const Index q = pair.D.rows();
  if (q == 0 || pair.D.cols() != q || pair.R.rows() != q || pair.R.cols() != q) {
    throw ValidationError({{ErrorKind::ShapeMismatch, -1, -1, "D and R must be q x q"}});
  }
  for (const auto* m : {&pair.D, &pair.R}) {
    const char* name = m == &pair.D ? "D" : "R";
    const double norm = spectral_norm(*m);
    const double row_tol = 1e-12 * std::max(1.0, m->cwiseAbs().maxCoeff());
    for (Index i = 0; i < q; ++i) {
      if (std::abs(m->row(i).sum()) > row_tol * static_cast<double>(q)) {
        issues.push_back({ErrorKind::ShapeMismatch, static_cast<long>(i), -1,
                          std::string(name) + " row sum nonzero at row " + std::to_string(i + 1)});
      }
      for (Index j = i + 1; j < q; ++j) {
        if ((*m)(i, j) != (*m)(j, i)) {
          issues.push_back({ErrorKind::NonSymmetric, static_cast<long>(i), static_cast<long>(j),
                            std::string(name) + " asymmetric at " + at(i, j)});
        }
        if ((*m)(i, j) > 0.0) {
          issues.push_back({ErrorKind::NegativeWeight, static_cast<long>(i), static_cast<long>(j),
                            std::string(name) + " positive off-diagonal at " + at(i, j)});
        }
      }
    }
    if (issues.empty()) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*m, Eigen::EigenvaluesOnly);
      if (es.eigenvalues()(0) < -psd_tolerance(q, norm)) {
        issues.push_back({ErrorKind::NegativeWeight, -1, -1, std::string(name) + " not PSD"});
      }
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

bool CouplingGraph::has_edge(Index i, Index j) const {
  if (i > j) std::swap(i, j);
  return std::any_of(edges.begin(), edges.end(),
                     [&](const Edge& e) { return e.i == i && e.j == j; });
}

CouplingGraph graph_from_weights(const Eigen::MatrixXd& weights) {
  CouplingGraph g;
  g.vertex_count = weights.rows();
  for (Index i = 0; i < weights.rows(); ++i)
    for (Index j = i + 1; j < weights.cols(); ++j)
      if (weights(i, j) != 0.0) g.edges.push_back({i, j, weights(i, j)});
  return g;
}

InterconnectionGraphs derive_graphs(const OscillatorArray& array) {
  const Eigen::MatrixXd& d = array.d();
  const Eigen::MatrixXd& r = array.r();
  InterconnectionGraphs out;
  out.dissipative = graph_from_weights(d);
  out.restorative = graph_from_weights(r);
  out.sum.vertex_count = out.difference.vertex_count = array.q();
  for (Index i = 0; i < array.q(); ++i) {
    for (Index j = i + 1; j < array.q(); ++j) {
      if (d(i, j) != 0.0 || r(i, j) != 0.0) out.sum.edges.push_back({i, j, d(i, j) + r(i, j)});
      if (r(i, j) != 0.0 && d(i, j) == 0.0) out.difference.edges.push_back({i, j, r(i, j)});
    }
  }
  return out;
}

Partition connected_components(const CouplingGraph& graph) {
  const Index n = graph.vertex_count;
  std::vector<std::vector<Index>> adjacency(static_cast<std::size_t>(n));
  for (const auto& e : graph.edges) {
    adjacency[e.i].push_back(e.j);
    adjacency[e.j].push_back(e.i);
  }
  Partition p;
  p.assignment.assign(static_cast<std::size_t>(n), -1);
  // Seeds are visited in ascending order, so components come out ordered by
  // their smallest vertex.
  for (Index seed = 0; seed < n; ++seed) {
    if (p.assignment[seed] >= 0) continue;
    const Index id = p.count();
    std::vector<Index> members{seed};
    p.assignment[seed] = id;
    for (std::size_t head = 0; head < members.size(); ++head) {
      for (Index next : adjacency[members[head]]) {
        if (p.assignment[next] < 0) {
          p.assignment[next] = id;
          members.push_back(next);
        }
      }
    }
    std::sort(members.begin(), members.end());
    p.components.push_back(std::move(members));
  }
  return p;
}

bool is_connected(const CouplingGraph& graph) { return connected_components(graph).count() <= 1; }

double algebraic_connectivity(const Eigen::MatrixXd& laplacian_matrix) {
  if (laplacian_matrix.rows() < 2) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian_matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(1);
}

bool is_connected_spectral(const Eigen::MatrixXd& laplacian_matrix) {
  if (laplacian_matrix.rows() < 2) return true;
  return algebraic_connectivity(laplacian_matrix) > eig_tolerance(spectral_norm(laplacian_matrix));
}

std::vector<Index> ComponentDecomposition::vertices(Index l) const {
  return {permutation.begin() + offsets[l], permutation.begin() + offsets[l] + sizes[l]};
}

RDelta build_r_delta(const OscillatorArray& array) {
  const Index q = array.q();
  Eigen::MatrixXd r_hat = array.r();
  for (Index i = 0; i < q; ++i)
    for (Index j = 0; j < q; ++j)
      if (array.d()(i, j) != 0.0) r_hat(i, j) = 0.0;

  RDelta out;
  out.matrix = laplacian(r_hat);

  const Partition parts = connected_components(derive_graphs(array).difference);
  auto& dec = out.decomposition;
  dec.assignment = parts.assignment;
  Index offset = 0;
  for (const auto& members : parts.components) {
    const Index n = static_cast<Index>(members.size());
    dec.sizes.push_back(n);
    dec.offsets.push_back(offset);
    offset += n;
    dec.permutation.insert(dec.permutation.end(), members.begin(), members.end());
    dec.blocks.push_back(permute_symmetric(out.matrix, members));
  }
  return out;
}

}  // namespace harmsync
