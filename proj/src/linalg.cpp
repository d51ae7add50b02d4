#include "harmsync/linalg.hpp"

namespace harmsync {

std::vector<EigenCluster> cluster_symmetric_eigen(const Eigen::MatrixXd& sym, double tol) {
  std::vector<EigenCluster> out;
  if (sym.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  const Eigen::VectorXd& values = es.eigenvalues();
  const Eigen::MatrixXd& vectors = es.eigenvectors();

  Index start = 0;
  const Index n = values.size();
  for (Index k = 1; k <= n; ++k) {
    if (k == n || values(k) - values(k - 1) > tol) {
      EigenCluster c;
      c.value = values.segment(start, k - start).mean();
      c.vectors = vectors.middleCols(start, k - start);
      out.push_back(std::move(c));
      start = k;
    }
  }
  return out;
}

}  // namespace harmsync
