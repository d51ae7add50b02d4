#pragma once

#include <optional>
#include <string>
#include <vector>

#include "harmsync/linalg.hpp"
#include "harmsync/network.hpp"
#include "harmsync/tolerances.hpp"

namespace harmsync {

enum class Method { Pbh, Observability, Sufficient, LcAdmittance, GeneralAdmittance };

const char* to_string(Method method);

/// Witness of non-synchronization: z(t) = Re(exp(j omega_star t) xi_star) is a
/// solution that never synchronizes.
struct FailureCertificate {
  double lambda_star = 0.0;  // eigenvalue of R
  Eigen::VectorXd xi_star;   // unit norm, orthogonal to the all-ones vector
  double omega_star = 0.0;   // sqrt(omega0^2 + lambda_star)
  double residual_r = 0.0;   // |R xi - lambda xi|
  double residual_d = 0.0;   // |D xi|
  bool marginal = false;     // the rank decision sat close to the cut
};

struct SyncVerdict {
  bool synchronizes = true;
  bool inconclusive = false;  // sufficient-only test failed its conditions
  Method method = Method::Pbh;
  std::optional<FailureCertificate> certificate;
  std::vector<std::string> warnings;
};

/// Residual bound used for certificates of this pair.
double certificate_tolerance(const LaplacianPair& pair);

/// True iff the certificate satisfies its residual and spread bounds for the pair.
bool certificate_valid(const LaplacianPair& pair, const FailureCertificate& cert);

/// Exact test: for every eigenvalue lambda of R, null [R - lambda I; D] must lie in
/// span{1}. The first violation (smallest lambda) becomes the certificate.
SyncVerdict pbh_check(const LaplacianPair& pair, double omega0, const RankOptions& opts = {});
SyncVerdict pbh_check(const OscillatorArray& array, const RankOptions& opts = {});

/// Null space of the raw stack [D; DR; ...; DR^(q-1)].
NullSpace<double> unobservable_subspace(const Eigen::MatrixXd& D, const Eigen::MatrixXd& R,
                                        const RankOptions& opts = {});

/// Synchronizes iff the unobservable subspace of (D, R) is span{1}. On failure the
/// certificate is an eigenvector of R restricted to that subspace.
SyncVerdict observability_check(const LaplacianPair& pair, double omega0,
                                const RankOptions& opts = {});
SyncVerdict observability_check(const OscillatorArray& array, const RankOptions& opts = {});

/// Basis of null A intersected with null B, as the null space of [A; B].
NullSpace<double> intersect_nullspaces(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                       const RankOptions& opts = {});

/// Sorted sqrt(omega0^2 + lambda) over the distinct eigenvalues of a block.
std::vector<double> characteristic_frequencies(const Eigen::MatrixXd& block, double omega0);

/// Distinct eigenvalues of a symmetric block, clustered at 1e-8 * max(1, |block|).
std::vector<double> distinct_eigenvalues(const Eigen::MatrixXd& block);

/// Observability of (e_k^T, omega0^2 I + block), decided on (e_k^T, block).
bool single_output_observable(const Eigen::MatrixXd& block, Index k, const RankOptions& opts = {});

enum class ZeroEntry { None, Present, Indeterminate };

const char* to_string(ZeroEntry z);

/// Whether some eigenvector of the block has a (numerically) zero entry. Repeated
/// eigenvalues make the question basis-dependent and yield Indeterminate.
ZeroEntry zero_entry_eigenvector_check(const Eigen::MatrixXd& block);

struct BlockReport {
  std::vector<Index> vertices;            // original 0-based vertex indices
  std::vector<bool> observable_from;      // per local output
  ZeroEntry zero_entry = ZeroEntry::None;
  bool indeterminate = false;             // P-form and M-form disagree
  std::vector<double> eigenvalues;        // distinct, ascending
  std::vector<double> frequencies;        // characteristic frequencies
};

struct SufficientReport {
  std::vector<BlockReport> blocks;
  bool cond1_p_form = true;   // every block observable from every output
  bool cond1_m_form = true;   // no block has an eigenvector with a zero entry
  bool cond1 = true;
  std::vector<double> common_eigenvalues;   // shared by every block
  std::vector<double> common_frequencies;   // intersection of the frequency sets
  bool cond2 = true;
  bool sum_graph_connected = true;
  Index joint_nullspace_dimension = 1;
  bool cond3 = true;
  bool overall = true;
};

SufficientReport sufficient_check(const OscillatorArray& array, const RankOptions& opts = {});

/// Never claims non-synchronization: a failed report is inconclusive.
SyncVerdict sufficient_verdict(const SufficientReport& report);

}  // namespace harmsync
