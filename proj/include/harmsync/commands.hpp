#pragma once

#include <string>
#include <vector>

#include "harmsync/io.hpp"

namespace harmsync {

struct CertifyOptions {
  std::string method = "pbh";  // pbh, observability, sufficient or all
  RankOptions rank;
};

/// Mechanical and LC networks run the selected time-domain test (LC networks on
/// their equivalent array, plus the admittance check); general networks always use
/// the admittance check. Throws std::invalid_argument on an unknown method.
Report certify_report(const Network& net, const CertifyOptions& opts = {});

struct SweepOptions {
  double wmin = 1e-2;
  double wmax = 1e2;
  Index points = 200;
  RankOptions rank;
};

struct SweepResult {
  Report report;
  std::vector<SweepRow> rows;  // log grid merged with the finite candidate frequencies
};

/// LC or general networks only; throws std::invalid_argument otherwise.
SweepResult sweep_report(const Network& net, const SweepOptions& opts = {});

}  // namespace harmsync
