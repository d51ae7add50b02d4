#pragma once

#include <vector>

#include "harmsync/error.hpp"
#include "harmsync/linalg.hpp"

namespace harmsync {

/// q identical harmonic oscillators with natural frequency omega0, coupled by
/// dampers (weights d) and springs (weights r). Instances are only produced by
/// validate_array, so the invariants (symmetric, nonnegative, zero diagonal,
/// omega0 > 0) always hold.
class OscillatorArray {
 public:
  Index q() const { return d_.rows(); }
  double omega0() const { return omega0_; }
  const Eigen::MatrixXd& d() const { return d_; }
  const Eigen::MatrixXd& r() const { return r_; }

  friend OscillatorArray validate_array(double omega0, const Eigen::MatrixXd& d,
                                        const Eigen::MatrixXd& r);

 private:
  OscillatorArray(double omega0, Eigen::MatrixXd d, Eigen::MatrixXd r)
      : omega0_(omega0), d_(std::move(d)), r_(std::move(r)) {}

  double omega0_;
  Eigen::MatrixXd d_;
  Eigen::MatrixXd r_;
};

/// Checks raw weights and returns a validated array. Asymmetric input is an error;
/// nothing is symmetrized. Throws ValidationError listing every problem found.
OscillatorArray validate_array(double omega0, const Eigen::MatrixXd& d, const Eigen::MatrixXd& r);

/// One undirected coupling given with 0-based endpoints.
struct WeightedPair {
  Index i = 0;
  Index j = 0;
  double d = 0.0;
  double r = 0.0;
};

/// Builds the weight matrices from an edge list and validates them.
OscillatorArray array_from_edges(Index q, double omega0, const std::vector<WeightedPair>& edges);

/// Relabels vertices: vertex perm[k] of `array` becomes vertex k of the result.
OscillatorArray permuted(const OscillatorArray& array, const std::vector<Index>& perm);

/// Weighted Laplacian of a symmetric weight matrix: diagonal holds row sums,
/// off-diagonal entries are the negated weights. Works for real and complex weights.
template <typename Derived>
MatrixX<typename Derived::Scalar> laplacian(const Eigen::MatrixBase<Derived>& weights) {
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> out = -weights;
  out.diagonal().setZero();
  const VectorX<Scalar> sums = -out.rowwise().sum();
  out.diagonal() = sums;
  return out;
}

/// Dissipative and restorative Laplacians of an array.
struct LaplacianPair {
  Eigen::MatrixXd D;
  Eigen::MatrixXd R;

  Index q() const { return D.rows(); }
};

LaplacianPair build_laplacians(const OscillatorArray& array);

/// Checks the Laplacian invariants (square, symmetric, zero row sums, nonpositive
/// off-diagonal, PSD up to q * eps * |M|). Throws ValidationError.
void validate_laplacian_pair(const LaplacianPair& pair);

struct Edge {
  Index i = 0;  // i < j
  Index j = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected simple graph with positively weighted edges, sorted by (i, j).
struct CouplingGraph {
  Index vertex_count = 0;
  std::vector<Edge> edges;

  bool has_edge(Index i, Index j) const;
};

/// Graph of the nonzero entries of a symmetric weight matrix (exact "!= 0" test).
CouplingGraph graph_from_weights(const Eigen::MatrixXd& weights);

/// The four interconnection graphs of an array.
struct InterconnectionGraphs {
  CouplingGraph dissipative;  // edges where d_ij != 0
  CouplingGraph restorative;  // edges where r_ij != 0
  CouplingGraph sum;          // union of the two edge sets
  CouplingGraph difference;   // restorative edges with no damper in parallel
};

InterconnectionGraphs derive_graphs(const OscillatorArray& array);

/// Connected components ordered by their smallest vertex; vertices ascending inside.
struct Partition {
  std::vector<std::vector<Index>> components;
  std::vector<Index> assignment;  // vertex -> component index

  Index count() const { return static_cast<Index>(components.size()); }
};

Partition connected_components(const CouplingGraph& graph);

bool is_connected(const CouplingGraph& graph);

/// Second-smallest eigenvalue of a symmetric Laplacian (0 when q < 2).
double algebraic_connectivity(const Eigen::MatrixXd& laplacian_matrix);

/// Spectral connectivity test: lambda_2 > 1e-9 * max(1, |L|).
bool is_connected_spectral(const Eigen::MatrixXd& laplacian_matrix);

/// Components of the spring-only graph and the per-component Laplacian blocks.
struct ComponentDecomposition {
  std::vector<Index> assignment;   // vertex -> component
  std::vector<Index> sizes;        // n_l
  std::vector<Index> offsets;      // sigma_l, offsets[0] == 0
  std::vector<Index> permutation;  // block-ordered position -> original vertex
  std::vector<Eigen::MatrixXd> blocks;

  Index count() const { return static_cast<Index>(sizes.size()); }
  /// Original vertices of component l in local order.
  std::vector<Index> vertices(Index l) const;
};

struct RDelta {
  Eigen::MatrixXd matrix;  // Laplacian of the spring weights not paralleled by a damper
  ComponentDecomposition decomposition;
};

RDelta build_r_delta(const OscillatorArray& array);

/// P * M * P^T for the permutation given as block-ordered position -> original index.
Eigen::MatrixXd permute_symmetric(const Eigen::MatrixXd& m, const std::vector<Index>& perm);

}  // namespace harmsync
