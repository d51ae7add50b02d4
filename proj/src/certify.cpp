#include "harmsync/certify.hpp"

#include <algorithm>
#include <cmath>

namespace harmsync {

const char* to_string(Method method) {
  switch (method) {
    case Method::Pbh: return "pbh";
    case Method::Observability: return "observability";
    case Method::Sufficient: return "sufficient";
    case Method::LcAdmittance: return "lc-admittance";
    case Method::GeneralAdmittance: return "general-admittance";
  }
  return "unknown";
}

const char* to_string(ZeroEntry z) {
  switch (z) {
    case ZeroEntry::None: return "none";
    case ZeroEntry::Present: return "present";
    case ZeroEntry::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

namespace {

// Direction in span(basis) with the largest component orthogonal to 1, made
// orthogonal to 1, normalized, and sign-fixed so its first largest entry is positive.
Eigen::VectorXd spread_direction(const Eigen::MatrixXd& basis) {
  Eigen::MatrixXd centered = basis;
  for (Index k = 0; k < centered.cols(); ++k) centered.col(k) = remove_mean(basis.col(k));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU);
  Eigen::VectorXd xi = svd.matrixU().col(0);
  xi = remove_mean(xi);
  xi.normalize();
  const double peak = xi.cwiseAbs().maxCoeff();
  for (Index i = 0; i < xi.size(); ++i) {
    if (std::abs(xi(i)) >= peak * (1.0 - 1e-9)) {
      if (xi(i) < 0.0) xi = -xi;
      break;
    }
  }
  return xi;
}

FailureCertificate make_certificate(const LaplacianPair& pair, double omega0, double lambda,
                                    const Eigen::VectorXd& xi, bool marginal) {
  FailureCertificate c;
  c.lambda_star = std::max(lambda, 0.0);
  c.xi_star = xi;
  c.omega_star = std::sqrt(omega0 * omega0 + c.lambda_star);
  c.residual_r = (pair.R * xi - c.lambda_star * xi).norm();
  c.residual_d = (pair.D * xi).norm();
  c.marginal = marginal;
  return c;
}

double pair_scale(const LaplacianPair& pair) {
  return std::max(spectral_norm(pair.R), spectral_norm(pair.D));
}

}  // namespace

double certificate_tolerance(const LaplacianPair& pair) {
  return residual_tolerance(pair_scale(pair));
}

bool certificate_valid(const LaplacianPair& pair, const FailureCertificate& cert) {
  const double tol = certificate_tolerance(pair);
  const Eigen::VectorXd& xi = cert.xi_star;
  if (xi.size() != pair.q() || std::abs(xi.norm() - 1.0) > 1e-9) return false;
  return (pair.R * xi - cert.lambda_star * xi).norm() <= tol && (pair.D * xi).norm() <= tol &&
         remove_mean(xi).norm() >= kCertificateSpread;
}

SyncVerdict pbh_check(const LaplacianPair& pair, double omega0, const RankOptions& opts) {
  SyncVerdict verdict;
  verdict.method = Method::Pbh;
  const Index q = pair.q();
  if (q <= 1) return verdict;

  const double r_norm = spectral_norm(pair.R);
  const auto clusters = cluster_symmetric_eigen(pair.R, cluster_tolerance(r_norm));
  Eigen::MatrixXd stacked(2 * q, q);
  stacked.bottomRows(q) = pair.D;
  // Clusters arrive in ascending order, so the first violation has the smallest lambda.
  for (const auto& cluster : clusters) {
    stacked.topRows(q) = pair.R - cluster.value * Eigen::MatrixXd::Identity(q, q);
    const auto ns = nullspace(stacked, default_rank_tolerance(2 * q, q), opts.abs_floor);
    if (subset_of_ones(ns.basis, kSubsetTolerance)) continue;
    verdict.synchronizes = false;
    verdict.certificate =
        make_certificate(pair, omega0, cluster.value, spread_direction(ns.basis), ns.marginal());
    if (verdict.certificate->marginal) {
      verdict.warnings.push_back("certificate rank decision is marginal");
    }
    break;
  }
  return verdict;
}

SyncVerdict pbh_check(const OscillatorArray& array, const RankOptions& opts) {
  return pbh_check(build_laplacians(array), array.omega0(), opts);
}

NullSpace<double> unobservable_subspace(const Eigen::MatrixXd& D, const Eigen::MatrixXd& R,
                                        const RankOptions& opts) {
  const Index q = D.rows();
  Eigen::MatrixXd stack(q * q, q);
  Eigen::MatrixXd power = D;
  for (Index k = 0; k < q; ++k) {
    stack.middleRows(k * q, q) = power;
    power = power * R;
  }
  return nullspace(stack, default_rank_tolerance(stack.rows(), q), opts.abs_floor);
}

SyncVerdict observability_check(const LaplacianPair& pair, double omega0, const RankOptions& opts) {
  SyncVerdict verdict;
  verdict.method = Method::Observability;
  const Index q = pair.q();
  if (q <= 1) return verdict;
  if (q > 50) {
    verdict.warnings.push_back("observability stack for q > 50 may be ill-conditioned; "
                               "the pbh test is authoritative");
  }
  const auto unobs = unobservable_subspace(pair.D, pair.R, opts);
  if (subset_of_ones(unobs.basis, kSubsetTolerance)) return verdict;

  verdict.synchronizes = false;
  // The unobservable subspace is R-invariant, so R restricted to it has an
  // eigenvector outside span{1}.
  const Eigen::MatrixXd& w = unobs.basis;
  const Eigen::MatrixXd restricted = w.transpose() * pair.R * w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (restricted + restricted.transpose()));
  Index best = 0;
  double best_spread = -1.0;
  for (Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double spread = remove_mean(Eigen::VectorXd(w * es.eigenvectors().col(k))).norm();
    if (spread > best_spread + 1e-12) {
      best_spread = spread;
      best = k;
    }
  }
  const Eigen::VectorXd v = w * es.eigenvectors().col(best);
  verdict.certificate = make_certificate(pair, omega0, es.eigenvalues()(best),
                                         spread_direction(v), unobs.marginal());
  return verdict;
}

SyncVerdict observability_check(const OscillatorArray& array, const RankOptions& opts) {
  return observability_check(build_laplacians(array), array.omega0(), opts);
}

NullSpace<double> intersect_nullspaces(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                       const RankOptions& opts) {
  Eigen::MatrixXd stacked(a.rows() + b.rows(), a.cols());
  stacked << a, b;
  return nullspace(stacked, default_rank_tolerance(stacked.rows(), stacked.cols()),
                   opts.abs_floor);
}

std::vector<double> distinct_eigenvalues(const Eigen::MatrixXd& block) {
  std::vector<double> out;
  for (const auto& c : cluster_symmetric_eigen(block, cluster_tolerance(spectral_norm(block)))) {
    out.push_back(c.value);
  }
  return out;
}

std::vector<double> characteristic_frequencies(const Eigen::MatrixXd& block, double omega0) {
  std::vector<double> out;
  for (double lambda : distinct_eigenvalues(block)) {
    out.push_back(std::sqrt(omega0 * omega0 + std::max(lambda, 0.0)));
  }
  return out;
}

bool single_output_observable(const Eigen::MatrixXd& block, Index k, const RankOptions& opts) {
  const Index n = block.rows();
  Eigen::MatrixXd obs(n, n);
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Unit(n, k);
  for (Index i = 0; i < n; ++i) {
    obs.row(i) = row;
    row = row * block;
  }
  return nullspace(obs, default_rank_tolerance(n, n), opts.abs_floor).dimension() == 0;
}

ZeroEntry zero_entry_eigenvector_check(const Eigen::MatrixXd& block) {
  const auto clusters = cluster_symmetric_eigen(block, cluster_tolerance(spectral_norm(block)));
  bool repeated = false;
  for (const auto& c : clusters) {
    if (c.vectors.cols() > 1) {
      repeated = true;
      continue;
    }
    const Eigen::VectorXd& v = c.vectors.col(0);
    if ((v.cwiseAbs().array() <= kZeroEntryTolerance * v.norm()).any()) return ZeroEntry::Present;
  }
  return repeated ? ZeroEntry::Indeterminate : ZeroEntry::None;
}

SufficientReport sufficient_check(const OscillatorArray& array, const RankOptions& opts) {
  SufficientReport rep;
  const RDelta rd = build_r_delta(array);
  const auto& dec = rd.decomposition;
  const double tol = cluster_tolerance(spectral_norm(rd.matrix));

  for (Index l = 0; l < dec.count(); ++l) {
    const Eigen::MatrixXd& block = dec.blocks[l];
    BlockReport br;
    br.vertices = dec.vertices(l);
    for (Index k = 0; k < block.rows(); ++k) {
      br.observable_from.push_back(single_output_observable(block, k, opts));
    }
    br.zero_entry = zero_entry_eigenvector_check(block);
    br.eigenvalues = distinct_eigenvalues(block);
    br.frequencies = characteristic_frequencies(block, array.omega0());

    const bool p_form = std::all_of(br.observable_from.begin(), br.observable_from.end(),
                                    [](bool b) { return b; });
    const bool m_form = br.zero_entry == ZeroEntry::None;
    br.indeterminate = br.zero_entry == ZeroEntry::Indeterminate || p_form != m_form;
    rep.cond1_p_form = rep.cond1_p_form && p_form;
    rep.cond1_m_form = rep.cond1_m_form && m_form;
    rep.cond1 = rep.cond1 && p_form && m_form && !br.indeterminate;
    rep.blocks.push_back(std::move(br));
  }

  // Matching on eigenvalues rather than frequencies avoids sqrt-induced precision loss.
  rep.common_eigenvalues = rep.blocks.front().eigenvalues;
  for (std::size_t l = 1; l < rep.blocks.size(); ++l) {
    std::vector<double> kept;
    for (double a : rep.common_eigenvalues) {
      const auto& other = rep.blocks[l].eigenvalues;
      if (std::any_of(other.begin(), other.end(), [&](double b) { return std::abs(a - b) <= tol; }))
        kept.push_back(a);
    }
    rep.common_eigenvalues = std::move(kept);
  }
  for (double lambda : rep.common_eigenvalues) {
    rep.common_frequencies.push_back(
        std::sqrt(array.omega0() * array.omega0() + std::max(lambda, 0.0)));
  }
  rep.cond2 = rep.common_eigenvalues.size() == 1 && std::abs(rep.common_eigenvalues[0]) <= tol;

  const LaplacianPair pair = build_laplacians(array);
  const auto joint = intersect_nullspaces(pair.R, pair.D, opts);
  rep.joint_nullspace_dimension = joint.dimension();
  rep.cond3 = joint.dimension() == 1 && subset_of_ones(joint.basis, kSubsetTolerance);
  rep.sum_graph_connected = is_connected(derive_graphs(array).sum);

  rep.overall = rep.cond1 && rep.cond2 && rep.cond3;
  return rep;
}

SyncVerdict sufficient_verdict(const SufficientReport& report) {
  SyncVerdict v;
  v.method = Method::Sufficient;
  v.synchronizes = report.overall;
  v.inconclusive = !report.overall;
  if (v.inconclusive) v.warnings.push_back("sufficient test inconclusive; defer to pbh");
  return v;
}

}  // namespace harmsync
