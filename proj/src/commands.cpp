#include "harmsync/commands.hpp"

#include <algorithm>
#include <stdexcept>

namespace harmsync {

namespace {

Report base_report(const char* command, const Network& net, const RankOptions& rank) {
  Report r;
  r.command = command;
  r.network_kind = network_kind(net);
  r.q = network_size(net);
  r.tolerances.rank_floor = rank.abs_floor;
  return r;
}

void take_verdict(Report& r, const SyncVerdict& v) {
  r.verdict = verdict_string(v);
  r.method = to_string(v.method);
  r.warnings.insert(r.warnings.end(), v.warnings.begin(), v.warnings.end());
}

void add_check(Report& r, const SyncVerdict& v) { r.checks.push_back({to_string(v.method), verdict_string(v)}); }

void certify_array(Report& r, const OscillatorArray& array, const CertifyOptions& opts) {
  const auto& m = opts.method;
  if (m != "pbh" && m != "observability" && m != "sufficient" && m != "all")
    throw std::invalid_argument("unknown method '" + m + "'");
  std::optional<SyncVerdict> pbh, obs;
  if (m == "pbh" || m == "all") pbh = pbh_check(array, opts.rank);
  if (m == "observability" || m == "all") obs = observability_check(array, opts.rank);
  if (m == "sufficient" || m == "all") {
    const auto report = sufficient_check(array, opts.rank);
    r.sufficient = sufficient_table(report);
    const auto v = sufficient_verdict(report);
    add_check(r, v);
    if (m == "sufficient") take_verdict(r, v);
  }
  if (obs) {
    add_check(r, *obs);
    if (m == "observability") take_verdict(r, *obs);
  }
  if (pbh) {
    add_check(r, *pbh);
    take_verdict(r, *pbh);
    if (obs && obs->synchronizes != pbh->synchronizes)
      r.warnings.push_back("observability test disagrees with the PBH test");
  }
  const auto& chosen = pbh ? pbh : obs;
  if (chosen && chosen->certificate) r.certificate = certificate_data(*chosen->certificate);
  std::sort(r.checks.begin(), r.checks.end(), [](const auto& a, const auto& b) { return a.method < b.method; });
}

void attach_lc(Report& r, const LcCheck& lc) {
  auto f = frequency_data(lc.report);
  f.half_plane_ok = lc.half_plane_ok;
  f.frequency_collapse = lc.frequency_collapse;
  r.frequency = std::move(f);
  add_check(r, lc.verdict);
  if (!lc.half_plane_ok) r.warnings.push_back("an eigenvalue of Y(jw) left the closed right half-plane");
  if (!lc.frequency_collapse) r.warnings.push_back("sign of Re lambda_2 changed between probes");
  if (!lc.pbh_agrees) r.warnings.push_back("admittance test disagrees with the PBH test");
}

std::vector<double> merged_grid(const SweepOptions& opts, const FrequencySweepReport& rep) {
  if (!(opts.wmin > 0.0) || !(opts.wmax > opts.wmin) || opts.points < 2)
    throw std::invalid_argument("sweep needs 0 < wmin < wmax and at least two points");
  auto grid = log_grid(opts.wmin, opts.wmax, opts.points);
  for (const auto& c : rep.candidates) {
    if (!c.grounded && c.omega >= opts.wmin && c.omega <= opts.wmax) grid.push_back(c.omega);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace

Report certify_report(const Network& net, const CertifyOptions& opts) {
  Report r = base_report("certify", net, opts.rank);
  if (const auto* a = std::get_if<OscillatorArray>(&net)) {
    certify_array(r, *a, opts);
  } else if (const auto* lc = std::get_if<LcNetwork>(&net)) {
    certify_array(r, equivalent_array(*lc), opts);
    attach_lc(r, lc_sync_check(*lc, {}, opts.rank));
  } else {
    const auto g = general_sync_check(std::get<GeneralNetwork>(net), opts.rank);
    take_verdict(r, g.verdict);
    add_check(r, g.verdict);
    if (g.report.certificate) r.certificate = certificate_data(*g.report.certificate);
    r.frequency = frequency_data(g.report);
    if (opts.method != "pbh") r.warnings.push_back("--method ignored for general networks");
  }
  return r;
}

SweepResult sweep_report(const Network& net, const SweepOptions& opts) {
  SweepResult out;
  out.report = base_report("sweep", net, opts.rank);
  auto& r = out.report;
  GeneralNetwork g;
  if (const auto* lc = std::get_if<LcNetwork>(&net)) {
    g = to_general(*lc);
    const auto check = lc_sync_check(*lc, {}, opts.rank);
    take_verdict(r, check.verdict);
    attach_lc(r, check);
  } else if (const auto* gen = std::get_if<GeneralNetwork>(&net)) {
    g = *gen;
  } else {
    throw std::invalid_argument("sweep needs an lc or general network");
  }
  const auto general = general_sync_check(g, opts.rank);
  add_check(r, general.verdict);
  if (r.verdict.empty()) {
    take_verdict(r, general.verdict);
  } else {
    r.warnings.insert(r.warnings.end(), general.verdict.warnings.begin(), general.verdict.warnings.end());
    if (general.verdict.synchronizes != (r.verdict == "synchronizes"))
      r.warnings.push_back("general admittance test disagrees with the LC test");
  }
  if (general.report.certificate) r.certificate = certificate_data(*general.report.certificate);

  out.rows = sweep(g, merged_grid(opts, general.report));
  auto f = frequency_data(general.report);
  f.probes.clear();
  f.re_lambda2.clear();
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& row : out.rows) {
    f.probes.push_back(row.omega);
    f.re_lambda2.push_back(row.lambda2.real());
    if (row.lambda2.real() < worst) {
      worst = row.lambda2.real();
      f.worst_omega = row.omega;
    }
  }
  if (r.frequency) {
    f.half_plane_ok = r.frequency->half_plane_ok;
    f.frequency_collapse = r.frequency->frequency_collapse;
  }
  r.frequency = std::move(f);
  std::sort(r.checks.begin(), r.checks.end(), [](const auto& a, const auto& b) { return a.method < b.method; });
  return out;
}

}  // namespace harmsync
