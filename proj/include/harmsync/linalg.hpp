#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace harmsync {

/// Dense column vector of dynamic size, templated on scalar type.
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Dense matrix of dynamic size, templated on scalar type.
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;
using Complex = std::complex<double>;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Largest singular value. Zero for empty matrices.
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(m.eval());
  return svd.singularValues()(0);
}

/// Orthonormal basis of a null space, with the singular values that decided it.
template <typename Scalar>
struct NullSpace {
  MatrixX<Scalar> basis;        // cols() == dimension
  double sigma_max = 0.0;
  double cut = 0.0;             // singular values < cut were treated as zero
  double smallest_kept = std::numeric_limits<double>::infinity();
  double largest_dropped = 0.0;

  Index dimension() const { return basis.cols(); }

  /// True when a kept singular value is within three decades above the cut, or a
  /// dropped one is within a factor of two below it.
  bool marginal() const {
    const bool kept_near = std::isfinite(smallest_kept) && smallest_kept < 1e3 * cut;
    const bool dropped_near = dimension() > 0 && largest_dropped > 0.5 * cut;
    return kept_near || dropped_near;
  }
};

/// Default relative rank cut, max(rows, cols) * machine epsilon.
inline double default_rank_tolerance(Index rows, Index cols) {
  return static_cast<double>(std::max(rows, cols)) * kEps;
}

/// Null space by full SVD. Singular values below max(rel_tol * sigma_max, abs_floor)
/// span the null space. A zero matrix (or one with no rows) has a full null space.
template <typename Derived>
NullSpace<typename Derived::Scalar> nullspace(const Eigen::MatrixBase<Derived>& m, double rel_tol,
                                              double abs_floor = 0.0) {
  using Scalar = typename Derived::Scalar;
  const Index n = m.cols();
  NullSpace<Scalar> out;
  if (m.rows() == 0 || n == 0) {
    out.basis = MatrixX<Scalar>::Identity(n, n);
    return out;
  }
  // Pad with zero rows so the full V is always n x n.
  MatrixX<Scalar> a = MatrixX<Scalar>::Zero(std::max(m.rows(), n), n);
  a.topRows(m.rows()) = m;
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  out.sigma_max = s(0);
  out.cut = std::max(rel_tol * out.sigma_max, abs_floor);
  if (out.sigma_max == 0.0) out.cut = std::max(abs_floor, 0.0);

  Index rank = 0;
  while (rank < s.size() && s(rank) > out.cut && s(rank) > 0.0) ++rank;
  if (rank > 0) out.smallest_kept = s(rank - 1);
  if (rank < s.size()) out.largest_dropped = s(rank);
  out.basis = svd.matrixV().rightCols(n - rank);
  return out;
}

/// Null space with the default relative cut.
template <typename Derived>
auto nullspace(const Eigen::MatrixBase<Derived>& m) {
  return nullspace(m, default_rank_tolerance(m.rows(), m.cols()));
}

/// Component of v orthogonal to the all-ones vector.
template <typename Derived>
auto remove_mean(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Scalar mean = v.sum() / static_cast<double>(v.size());
  return (v.array() - mean).matrix().eval();
}

/// True iff every basis vector lies in span{1} up to tol (norm of the mean-removed part).
template <typename Derived>
bool subset_of_ones(const Eigen::MatrixBase<Derived>& basis, double tol = 1e-6) {
  for (Index k = 0; k < basis.cols(); ++k) {
    const double scale = std::max(1.0, basis.col(k).norm());
    if (remove_mean(basis.col(k)).norm() > tol * scale) return false;
  }
  return true;
}

/// A group of numerically repeated eigenvalues of a symmetric matrix.
struct EigenCluster {
  double value = 0.0;       // mean of the members
  Eigen::MatrixXd vectors;  // orthonormal eigenvectors spanning the cluster
};

/// Ascending eigenvalues of a symmetric matrix grouped so that consecutive values
/// closer than tol fall in one cluster.
std::vector<EigenCluster> cluster_symmetric_eigen(const Eigen::MatrixXd& sym, double tol);

}  // namespace harmsync
