#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "harmsync/admittance.hpp"
#include "harmsync/certify.hpp"
#include "harmsync/simulate.hpp"

namespace harmsync {

inline constexpr const char* kToolName = "harmsync";
inline constexpr const char* kToolVersion = "0.1.0";

/// Network file contents. Node indices in files are 1-based with i < j per edge.
using Network = std::variant<OscillatorArray, LcNetwork, GeneralNetwork>;

const char* network_kind(const Network& net);
Index network_size(const Network& net);

/// Throws Error(Parse) on malformed structure and ValidationError on invalid content.
Network parse_network(const nlohmann::json& doc);
Network load_network(const std::string& path);

/// Inverse of parse_network. General networks store y0 and each edge as ascending
/// numerator and denominator coefficient arrays.
nlohmann::json network_to_json(const Network& net);

/// Shortest decimal with 17 significant digits; the value re-parses exactly.
std::string format_number(double x);

struct CertificateData {
  std::optional<double> lambda_star;  // absent for frequency-domain certificates
  double omega_star = 0.0;
  std::vector<Complex> xi;
  std::optional<double> residual_r;
  std::optional<double> residual_d;
  bool marginal = false;

  bool operator==(const CertificateData&) const = default;
};

struct BlockRow {
  std::vector<Index> vertices;  // 1-based
  std::vector<bool> observable_from;
  std::string zero_entry;
  bool indeterminate = false;
  std::vector<double> eigenvalues;
  std::vector<double> frequencies;

  bool operator==(const BlockRow&) const = default;
};

struct SufficientTable {
  std::vector<BlockRow> blocks;
  bool cond1_p_form = true;
  bool cond1_m_form = true;
  bool cond1 = true;
  std::vector<double> common_eigenvalues;
  std::vector<double> common_frequencies;
  bool cond2 = true;
  bool sum_graph_connected = true;
  Index joint_nullspace_dimension = 1;
  bool cond3 = true;
  bool overall = true;

  bool operator==(const SufficientTable&) const = default;
};

struct MethodResult {
  std::string method;
  std::string verdict;

  bool operator==(const MethodResult&) const = default;
};

/// An infinite value (lambda_2 with everything shorted, a grounded candidate) is held
/// as +inf and serialized as a short-circuit marker.
struct CandidateRow {
  double omega = 0.0;
  bool synchronizes = true;
  Index multiplicity = 0;
  bool potentially_defective = false;
  bool short_circuit = false;
  bool grounded = false;
  double re_lambda2 = 0.0;
  std::vector<std::vector<Complex>> null_space;

  bool operator==(const CandidateRow&) const = default;
};

struct FrequencyData {
  std::vector<double> probes;  // omegas at which re_lambda2 was sampled
  std::vector<double> re_lambda2;
  double worst_omega = 0.0;
  std::vector<CandidateRow> candidates;
  std::vector<double> steady_state_frequencies;
  std::optional<bool> half_plane_ok;        // LC networks only
  std::optional<bool> frequency_collapse;   // LC networks only

  bool operator==(const FrequencyData&) const = default;
};

struct Tolerances {
  double rank_floor = 0.0;
  double subset = kSubsetTolerance;
  double candidate_rank = kCandidateRankTolerance;

  bool operator==(const Tolerances&) const = default;
};

struct Report {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  std::string command;
  std::string network_kind;
  Index q = 0;
  std::string verdict;  // "synchronizes", "does not synchronize" or "inconclusive"
  std::string method;
  Tolerances tolerances;
  std::optional<CertificateData> certificate;
  std::vector<MethodResult> checks;
  std::optional<SufficientTable> sufficient;
  std::optional<FrequencyData> frequency;
  std::vector<std::string> warnings;

  bool operator==(const Report&) const = default;
};

std::string verdict_string(const SyncVerdict& v);
/// 0 synchronizes, 3 does not synchronize, 4 inconclusive.
int exit_code(const SyncVerdict& v);
int exit_code(const Report& r);

CertificateData certificate_data(const FailureCertificate& cert);
CertificateData certificate_data(const FrequencyCertificate& cert);
SufficientTable sufficient_table(const SufficientReport& report);
FrequencyData frequency_data(const FrequencySweepReport& report);

nlohmann::json report_to_json(const Report& r);
/// Throws Error(Parse).
Report report_from_json(const nlohmann::json& doc);

/// Machine format: the JSON document, keys sorted, two-space indent, trailing newline.
std::string machine_format(const Report& r);
std::string human_format(const Report& r);

/// Header t,z1..zq,zd1..zdq,sync_error,energy.
void write_trajectory_csv(std::ostream& os, const StateSpace& ss, const Trajectory& traj);
/// Header omega,re_lambda2,im_lambda2,min_singular_value.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace harmsync
