#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "harmsync/certify.hpp"
#include "harmsync/rational.hpp"

namespace harmsync {

/// Identical LC tanks (c0 to ground in parallel with l0) coupled through conductances
/// g_ij and inductances 1/h_ij. Y(s) = G + H / s.
struct LcNetwork {
  double c0 = 1.0;
  double l0 = 1.0;
  Eigen::MatrixXd G;
  Eigen::MatrixXd H;

  Index q() const { return G.rows(); }
  double omega0() const { return 1.0 / std::sqrt(l0 * c0); }
};

/// g and h are symmetric weight matrices with zero diagonal. Validates like
/// validate_array (on g / c0, h / c0) and throws ValidationError.
LcNetwork lc_from_array(double c0, double l0, const Eigen::MatrixXd& g, const Eigen::MatrixXd& h);

/// The mechanical array with omega0 = 1 / sqrt(l0 c0), d = g / c0, r = h / c0.
OscillatorArray equivalent_array(const LcNetwork& net);

/// G - j H / omega. Throws std::invalid_argument at omega = 0.
Eigen::MatrixXcd eval_Y(const LcNetwork& net, double omega);

/// One-port oscillators y0(s) coupled by one-ports y_ij(s).
struct GeneralNetwork {
  RationalFunction y0;
  RationalMatrix couplings;  // symmetric, zero diagonal; zero function where absent

  Index q() const { return couplings.rows(); }
};

struct RationalEdge {
  Index i = 0, j = 0;  // 0-based, i != j
  RationalFunction y;
};

/// Throws ValidationError on a self loop, a repeated pair or an index out of range.
GeneralNetwork make_general(Index q, RationalFunction y0, const std::vector<RationalEdge>& edges);

/// y0 = c0 s + 1 / (l0 s), y_ij = g_ij + h_ij / s.
GeneralNetwork to_general(const LcNetwork& net);

/// Y(s) with Y_ii = sum_k y_ik and Y_ij = -y_ij.
RationalMatrix admittance_matrix(const GeneralNetwork& net);

/// y0(s) I + Y(s).
RationalMatrix node_matrix(const GeneralNetwork& net);

/// Result of replacing shorted node groups by their row sum plus equality rows.
///
/// Rows are emitted in node order: an unshorted node keeps its row, a shorted group
/// contributes one summed row at the position of its smallest node, and the equality
/// rows z_a = z_b for consecutive members of each group follow at the end.
struct ReducedSystem {
  Eigen::MatrixXcd matrix;       // coupling part; no infinite entries
  Eigen::MatrixXd mask;          // where -lambda (or +y0) enters: E = matrix + y0 * mask
  std::vector<std::vector<Index>> groups;  // every node in exactly one group, ordered by smallest node
  Eigen::MatrixXcd quotient;     // T^T Y T over the groups
  Eigen::VectorXd group_sizes;   // T^T T

  Index q() const { return matrix.cols(); }
  Eigen::MatrixXcd node_matrix(Complex y0) const { return matrix + y0 * mask.cast<Complex>(); }
  /// Incidence T (q x groups) mapping group voltages to node voltages.
  Eigen::MatrixXd incidence() const;
};

/// `coupling` holds y_ij(jw) off the diagonal; non-finite entries are infinite
/// admittances. Throws Error(InconsistentShort) if an infinite entry joins nodes
/// that short_pairs does not place in one group.
ReducedSystem reduce_short_circuits(const Eigen::MatrixXcd& coupling,
                                    const std::vector<std::pair<Index, Index>>& short_pairs);

/// Y(jw) or, when some coupling has a pole at jw, its reduced system. Throws
/// Error(OscillatorShortCircuit) when y0 has a pole at jw.
using YEvaluation = std::variant<Eigen::MatrixXcd, ReducedSystem>;
YEvaluation eval_Y(const GeneralNetwork& net, double omega);

/// Finite eigenvalues with lambda_1 pinned to the eigenvector closest to 1 and the
/// rest ascending by real part, ties by imaginary part.
struct OrderedSpectrum {
  Eigen::VectorXcd values;
  double ones_alignment = 0.0;  // |cos| between 1 and the pinned eigenvector
};
OrderedSpectrum ordered_spectrum(const Eigen::MatrixXcd& Y);
OrderedSpectrum ordered_spectrum(const ReducedSystem& reduced);

/// Second entry of ordered_spectrum; +inf when there is a single finite eigenvalue.
Complex lambda2(const Eigen::MatrixXcd& Y);
Complex lambda2(const ReducedSystem& reduced);
double lambda2_real(const Eigen::MatrixXcd& Y);
double lambda2_real(const ReducedSystem& reduced);
double lambda2_real(const YEvaluation& y);

/// Nonzero node voltage pattern xi and frequency omega with xi in the null space of
/// y0(jw) I + Y(jw) and xi not parallel to 1.
struct FrequencyCertificate {
  double omega = 0.0;
  Eigen::VectorXcd xi;  // unit norm, orthogonal to 1
};

struct CandidateCheck {
  double omega = 0.0;
  bool synchronizes = true;
  Eigen::MatrixXcd basis;       // null space of the node matrix at omega
  Index multiplicity = 0;       // determinant roots merged into this candidate
  bool potentially_defective = false;
  bool short_circuit = false;   // some coupling is infinite at omega
  bool grounded = false;        // y0 is infinite at omega, so E = {0}
  double re_lambda2 = 0.0;
};

struct FrequencySweepReport {
  std::vector<double> omegas;
  std::vector<double> re_lambda2;
  std::vector<CandidateCheck> candidates;
  bool verdict = true;
  double worst_omega = 0.0;  // grid point with the smallest Re lambda_2
  std::optional<FrequencyCertificate> certificate;
  std::vector<double> steady_state_frequencies;  // {w >= 0 : y0(jw) = 0}
};

struct LcCheck {
  SyncVerdict verdict;
  FrequencySweepReport report;
  bool half_plane_ok = true;       // every probe eigenvalue has Re >= -tol and Im <= tol
  bool frequency_collapse = true;  // sign of Re lambda_2 identical at every probe
  SyncVerdict pbh;                 // the same question asked of the equivalent array
  bool pbh_agrees = true;
};

/// Default probes {w0/2, w0, 2 w0} and sqrt(lambda) for each nonzero eigenvalue of H.
std::vector<double> default_probes(const LcNetwork& net);

/// Re lambda_2(Y(jw)) > tol at every probe, cross-checked against pbh_check.
LcCheck lc_sync_check(const LcNetwork& net, const std::vector<double>& probes = {},
                      const RankOptions& opts = {});

inline constexpr double kRootAxisTolerance = 1e-7;
inline constexpr double kRootClusterRadius = 1e-4;
inline constexpr double kCandidateRankTolerance = 1e-8;
inline constexpr Index kConfirmationPoints = 256;

struct FrequencyCandidate {
  double omega = 0.0;
  Index multiplicity = 0;  // determinant roots in the cluster (0 if not a root)
  bool from_root = false;
  bool from_pole = false;
  bool from_y0_zero = false;
};

/// Non-negative frequencies where the node matrix may be singular: imaginary-axis
/// roots of n(s) (clustered, centred, refined), axis poles of y0 and of every
/// coupling, and axis zeros of y0. Sorted by omega.
std::vector<FrequencyCandidate> candidate_frequencies(const GeneralNetwork& net);

/// Throws Error(NotPassive) if Re y(jw) < -tol for y0 or a coupling on a log grid.
void check_passive(const GeneralNetwork& net);

struct GeneralCheck {
  SyncVerdict verdict;
  FrequencySweepReport report;
};

/// Null space of y0(jw) I + Y(jw) within span{1} at every candidate frequency, with a
/// confirmation sweep between candidates.
GeneralCheck general_sync_check(const GeneralNetwork& net, const RankOptions& opts = {});

struct SweepRow {
  double omega = 0.0;
  Complex lambda2;
  double min_singular_value = 0.0;  // of y0(jw) I + Y(jw) (reduced at poles)
};

/// Skips frequencies where y0 is infinite.
std::vector<SweepRow> sweep(const GeneralNetwork& net, const std::vector<double>& omegas);

std::vector<double> log_grid(double lo, double hi, Index points);

}  // namespace harmsync
