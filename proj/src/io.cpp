#include "harmsync/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "harmsync/error.hpp"

namespace harmsync {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const json& member(const json& obj, const char* key) {
  if (!obj.is_object()) parse_fail(std::string("expected an object holding '") + key + "'");
  const auto it = obj.find(key);
  if (it == obj.end()) parse_fail(std::string("missing field '") + key + "'");
  return *it;
}

double real_field(const json& obj, const char* key, std::optional<double> fallback = std::nullopt) {
  if (fallback && (!obj.contains(key))) return *fallback;
  const json& v = member(obj, key);
  if (!v.is_number()) parse_fail(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

long index_field(const json& obj, const char* key) {
  const json& v = member(obj, key);
  if (!v.is_number_integer()) parse_fail(std::string("field '") + key + "' must be an integer");
  return v.get<long>();
}

Polynomial<double> coefficient_field(const json& obj, const char* key, bool optional_one = false) {
  if (optional_one && !obj.contains(key)) return Polynomial<double>::constant(1.0);
  const json& v = member(obj, key);
  if (!v.is_array() || v.empty()) parse_fail(std::string("field '") + key + "' must be a non-empty array");
  Eigen::VectorXd c(static_cast<Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number()) parse_fail(std::string("field '") + key + "' must hold numbers");
    c(static_cast<Index>(k)) = v[k].get<double>();
  }
  return Polynomial<double>(c);
}

RationalFunction rational_field(const json& obj, const std::string& where) {
  const auto num = coefficient_field(obj, "num");
  const auto den = coefficient_field(obj, "den", true);
  if (!num.coefficients().allFinite() || !den.coefficients().allFinite())
    throw ValidationError({{ErrorKind::NonFiniteWeight, -1, -1, "non-finite coefficient in " + where}});
  if (den.is_zero()) throw ValidationError({{ErrorKind::NonPositiveParameter, -1, -1, "zero denominator in " + where}});
  return RationalFunction(num, den);
}

struct EdgeIndex {
  Index i, j;
};

// Converts 1-based (i, j) with i < j to 0-based; collects every problem.
std::vector<EdgeIndex> edge_indices(const json& edges, Index q) {
  if (!edges.is_array()) parse_fail("'edges' must be an array");
  std::vector<EdgeIndex> out;
  std::vector<ValidationIssue> issues;
  std::set<std::pair<long, long>> seen;
  for (const auto& e : edges) {
    const long i = index_field(e, "i"), j = index_field(e, "j");
    const std::string at = "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
    if (i < 1 || j < 1 || i > q || j > q) {
      issues.push_back({ErrorKind::ShapeMismatch, i - 1, j - 1, "edge " + at + " out of range 1.." + std::to_string(q)});
    } else if (i == j) {
      issues.push_back({ErrorKind::NonzeroDiagonal, i - 1, -1, "self-loop at " + std::to_string(i)});
    } else if (i > j) {
      issues.push_back({ErrorKind::ShapeMismatch, i - 1, j - 1, "edge " + at + " must have i < j"});
    } else if (!seen.insert({i, j}).second) {
      issues.push_back({ErrorKind::ShapeMismatch, i - 1, j - 1, "repeated edge " + at});
    }
    out.push_back({i - 1, j - 1});
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return out;
}

Index size_field(const json& doc) {
  const long q = index_field(doc, "q");
  if (q < 1) throw ValidationError({{ErrorKind::ShapeMismatch, -1, -1, "q must be positive"}});
  return q;
}

Network parse_mechanical(const json& doc) {
  const Index q = size_field(doc);
  const double omega0 = real_field(doc, "omega0");
  const auto& edges = member(doc, "edges");
  const auto idx = edge_indices(edges, q);
  std::vector<WeightedPair> pairs;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    pairs.push_back({idx[k].i, idx[k].j, real_field(edges[k], "d", 0.0), real_field(edges[k], "r", 0.0)});
  }
  return array_from_edges(q, omega0, pairs);
}

Network parse_lc(const json& doc) {
  const Index q = size_field(doc);
  const double c0 = real_field(doc, "c0"), l0 = real_field(doc, "l0");
  const auto& edges = member(doc, "edges");
  const auto idx = edge_indices(edges, q);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(q, q), h = Eigen::MatrixXd::Zero(q, q);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto [i, j] = idx[k];
    g(i, j) = g(j, i) = real_field(edges[k], "g", 0.0);
    h(i, j) = h(j, i) = real_field(edges[k], "h", 0.0);
  }
  return lc_from_array(c0, l0, g, h);
}

Network parse_general(const json& doc) {
  const Index q = size_field(doc);
  auto y0 = rational_field(member(doc, "y0"), "y0");
  const auto& edges = member(doc, "edges");
  const auto idx = edge_indices(edges, q);
  std::vector<RationalEdge> list;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const std::string where = "edge (" + std::to_string(idx[k].i + 1) + ", " + std::to_string(idx[k].j + 1) + ")";
    list.push_back({idx[k].i, idx[k].j, rational_field(edges[k], where)});
  }
  return make_general(q, std::move(y0), list);
}

json coefficients_json(const Polynomial<double>& p) {
  json a = json::array();
  if (p.is_zero()) a.push_back(0.0);
  for (Index k = 0; k <= p.degree(); ++k) a.push_back(p[k]);
  return a;
}

json rational_json(const RationalFunction& y) {
  return {{"num", coefficients_json(y.numerator())}, {"den", coefficients_json(y.denominator())}};
}

// Report encoding: reals as 17-digit strings, +inf as a short-circuit marker.

json number_json(double x) {
  if (std::isinf(x) && x > 0) return json{{"short_circuit", true}};
  if (!std::isfinite(x)) throw std::logic_error("report holds a non-finite value");
  return format_number(x);
}

double number_from(const json& v) {
  if (v.is_object()) {
    if (v.contains("short_circuit") && v["short_circuit"] == true) return std::numeric_limits<double>::infinity();
    parse_fail("unknown number marker");
  }
  if (!v.is_string()) parse_fail("numbers must be decimal strings");
  const std::string s = v.get<std::string>();
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(x)) parse_fail("bad number '" + s + "'");
  return x;
}

json reals_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_json(x));
  return a;
}

std::vector<double> reals_from(const json& v) {
  if (!v.is_array()) parse_fail("expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number_from(x));
  return out;
}

json complex_vector_json(const std::vector<Complex>& v) {
  std::vector<double> re, im;
  bool complex = false;
  for (const auto& z : v) {
    re.push_back(z.real());
    im.push_back(z.imag());
    complex |= z.imag() != 0.0;
  }
  json out = {{"real", reals_json(re)}};
  if (complex) out["imag"] = reals_json(im);
  return out;
}

std::vector<Complex> complex_vector_from(const json& v) {
  const auto re = reals_from(member(v, "real"));
  std::vector<double> im(re.size(), 0.0);
  if (v.contains("imag")) im = reals_from(v["imag"]);
  if (im.size() != re.size()) parse_fail("real and imaginary parts differ in length");
  std::vector<Complex> out;
  for (std::size_t k = 0; k < re.size(); ++k) out.emplace_back(re[k], im[k]);
  return out;
}

template <typename T>
T get(const json& obj, const char* key) {
  try {
    return member(obj, key).get<T>();
  } catch (const json::exception& e) {
    parse_fail(std::string("field '") + key + "': " + e.what());
  }
}

json certificate_json(const CertificateData& c) {
  json out = {{"omega_star", number_json(c.omega_star)}, {"xi", complex_vector_json(c.xi)}, {"marginal", c.marginal}};
  if (c.lambda_star) out["lambda_star"] = number_json(*c.lambda_star);
  if (c.residual_r) out["residual_r"] = number_json(*c.residual_r);
  if (c.residual_d) out["residual_d"] = number_json(*c.residual_d);
  return out;
}

CertificateData certificate_from(const json& v) {
  CertificateData c;
  c.omega_star = number_from(member(v, "omega_star"));
  c.xi = complex_vector_from(member(v, "xi"));
  c.marginal = get<bool>(v, "marginal");
  if (v.contains("lambda_star")) c.lambda_star = number_from(v["lambda_star"]);
  if (v.contains("residual_r")) c.residual_r = number_from(v["residual_r"]);
  if (v.contains("residual_d")) c.residual_d = number_from(v["residual_d"]);
  return c;
}

json sufficient_json(const SufficientTable& t) {
  json blocks = json::array();
  for (const auto& b : t.blocks) {
    blocks.push_back({{"vertices", b.vertices},
                      {"observable_from", b.observable_from},
                      {"zero_entry", b.zero_entry},
                      {"indeterminate", b.indeterminate},
                      {"eigenvalues", reals_json(b.eigenvalues)},
                      {"frequencies", reals_json(b.frequencies)}});
  }
  return {{"blocks", blocks},
          {"cond1_p_form", t.cond1_p_form},
          {"cond1_m_form", t.cond1_m_form},
          {"cond1", t.cond1},
          {"common_eigenvalues", reals_json(t.common_eigenvalues)},
          {"common_frequencies", reals_json(t.common_frequencies)},
          {"cond2", t.cond2},
          {"sum_graph_connected", t.sum_graph_connected},
          {"joint_nullspace_dimension", t.joint_nullspace_dimension},
          {"cond3", t.cond3},
          {"overall", t.overall}};
}

SufficientTable sufficient_from(const json& v) {
  SufficientTable t;
  const auto& blocks = member(v, "blocks");
  if (!blocks.is_array()) parse_fail("'blocks' must be an array");
  for (const auto& b : blocks) {
    BlockRow row;
    row.vertices = get<std::vector<Index>>(b, "vertices");
    row.observable_from = get<std::vector<bool>>(b, "observable_from");
    row.zero_entry = get<std::string>(b, "zero_entry");
    row.indeterminate = get<bool>(b, "indeterminate");
    row.eigenvalues = reals_from(member(b, "eigenvalues"));
    row.frequencies = reals_from(member(b, "frequencies"));
    t.blocks.push_back(std::move(row));
  }
  t.cond1_p_form = get<bool>(v, "cond1_p_form");
  t.cond1_m_form = get<bool>(v, "cond1_m_form");
  t.cond1 = get<bool>(v, "cond1");
  t.common_eigenvalues = reals_from(member(v, "common_eigenvalues"));
  t.common_frequencies = reals_from(member(v, "common_frequencies"));
  t.cond2 = get<bool>(v, "cond2");
  t.sum_graph_connected = get<bool>(v, "sum_graph_connected");
  t.joint_nullspace_dimension = get<Index>(v, "joint_nullspace_dimension");
  t.cond3 = get<bool>(v, "cond3");
  t.overall = get<bool>(v, "overall");
  return t;
}

json frequency_json(const FrequencyData& f) {
  json candidates = json::array();
  for (const auto& c : f.candidates) {
    json basis = json::array();
    for (const auto& v : c.null_space) basis.push_back(complex_vector_json(v));
    candidates.push_back({{"omega", number_json(c.omega)},
                          {"synchronizes", c.synchronizes},
                          {"multiplicity", c.multiplicity},
                          {"potentially_defective", c.potentially_defective},
                          {"short_circuit", c.short_circuit},
                          {"grounded", c.grounded},
                          {"re_lambda2", number_json(c.re_lambda2)},
                          {"null_space", basis}});
  }
  json out = {{"probes", reals_json(f.probes)},
              {"re_lambda2", reals_json(f.re_lambda2)},
              {"worst_omega", number_json(f.worst_omega)},
              {"candidates", candidates},
              {"steady_state_frequencies", reals_json(f.steady_state_frequencies)}};
  if (f.half_plane_ok) out["half_plane_ok"] = *f.half_plane_ok;
  if (f.frequency_collapse) out["frequency_collapse"] = *f.frequency_collapse;
  return out;
}

FrequencyData frequency_from(const json& v) {
  FrequencyData f;
  f.probes = reals_from(member(v, "probes"));
  f.re_lambda2 = reals_from(member(v, "re_lambda2"));
  f.worst_omega = number_from(member(v, "worst_omega"));
  const auto& candidates = member(v, "candidates");
  if (!candidates.is_array()) parse_fail("'candidates' must be an array");
  for (const auto& c : candidates) {
    CandidateRow row;
    row.omega = number_from(member(c, "omega"));
    row.synchronizes = get<bool>(c, "synchronizes");
    row.multiplicity = get<Index>(c, "multiplicity");
    row.potentially_defective = get<bool>(c, "potentially_defective");
    row.short_circuit = get<bool>(c, "short_circuit");
    row.grounded = get<bool>(c, "grounded");
    row.re_lambda2 = number_from(member(c, "re_lambda2"));
    for (const auto& b : member(c, "null_space")) row.null_space.push_back(complex_vector_from(b));
    f.candidates.push_back(std::move(row));
  }
  f.steady_state_frequencies = reals_from(member(v, "steady_state_frequencies"));
  if (v.contains("half_plane_ok")) f.half_plane_ok = get<bool>(v, "half_plane_ok");
  if (v.contains("frequency_collapse")) f.frequency_collapse = get<bool>(v, "frequency_collapse");
  return f;
}

std::string short_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf (short circuit)" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + short_number(v[k]);
  return out + "]";
}

std::string complex_list(const std::vector<Complex>& v) {
  std::string out = "[";
  for (std::size_t k = 0; k < v.size(); ++k) {
    out += k ? ", " : "";
    out += short_number(v[k].real());
    if (v[k].imag() != 0.0) out += (v[k].imag() < 0 ? " - " : " + ") + short_number(std::abs(v[k].imag())) + "j";
  }
  return out + "]";
}

const char* passed(bool ok) { return ok ? "passed" : "failed"; }

}  // namespace

const char* network_kind(const Network& net) {
  switch (net.index()) {
    case 0: return "mechanical";
    case 1: return "lc";
    default: return "general";
  }
}

Index network_size(const Network& net) {
  return std::visit([](const auto& n) { return n.q(); }, net);
}

Network parse_network(const json& doc) {
  try {
    const auto kind = get<std::string>(doc, "kind");
    if (kind == "mechanical") return parse_mechanical(doc);
    if (kind == "lc") return parse_lc(doc);
    if (kind == "general") return parse_general(doc);
    parse_fail("unknown network kind '" + kind + "'");
  } catch (const json::exception& e) {
    parse_fail(e.what());
  }
}

Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot read '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    parse_fail(path + ": " + e.what());
  }
  return parse_network(doc);
}

json network_to_json(const Network& net) {
  json edges = json::array();
  if (const auto* a = std::get_if<OscillatorArray>(&net)) {
    for (Index i = 0; i < a->q(); ++i)
      for (Index j = i + 1; j < a->q(); ++j)
        if (a->d()(i, j) != 0.0 || a->r()(i, j) != 0.0)
          edges.push_back({{"i", i + 1}, {"j", j + 1}, {"d", a->d()(i, j)}, {"r", a->r()(i, j)}});
    return {{"kind", "mechanical"}, {"q", a->q()}, {"omega0", a->omega0()}, {"edges", edges}};
  }
  if (const auto* lc = std::get_if<LcNetwork>(&net)) {
    for (Index i = 0; i < lc->q(); ++i)
      for (Index j = i + 1; j < lc->q(); ++j)
        if (lc->G(i, j) != 0.0 || lc->H(i, j) != 0.0)
          edges.push_back({{"i", i + 1}, {"j", j + 1}, {"g", -lc->G(i, j)}, {"h", -lc->H(i, j)}});
    return {{"kind", "lc"}, {"q", lc->q()}, {"c0", lc->c0}, {"l0", lc->l0}, {"edges", edges}};
  }
  const auto& g = std::get<GeneralNetwork>(net);
  for (Index i = 0; i < g.q(); ++i) {
    for (Index j = i + 1; j < g.q(); ++j) {
      if (g.couplings(i, j).is_zero()) continue;
      json e = rational_json(g.couplings(i, j));
      e["i"] = i + 1;
      e["j"] = j + 1;
      edges.push_back(e);
    }
  }
  return {{"kind", "general"}, {"q", g.q()}, {"y0", rational_json(g.y0)}, {"edges", edges}};
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string verdict_string(const SyncVerdict& v) {
  if (v.inconclusive) return "inconclusive";
  return v.synchronizes ? "synchronizes" : "does not synchronize";
}

int exit_code(const SyncVerdict& v) { return v.inconclusive ? 4 : (v.synchronizes ? 0 : 3); }

int exit_code(const Report& r) {
  if (r.verdict == "synchronizes") return 0;
  if (r.verdict == "does not synchronize") return 3;
  return 4;
}

CertificateData certificate_data(const FailureCertificate& cert) {
  CertificateData c;
  c.lambda_star = cert.lambda_star;
  c.omega_star = cert.omega_star;
  for (Index k = 0; k < cert.xi_star.size(); ++k) c.xi.emplace_back(cert.xi_star(k), 0.0);
  c.residual_r = cert.residual_r;
  c.residual_d = cert.residual_d;
  c.marginal = cert.marginal;
  return c;
}

CertificateData certificate_data(const FrequencyCertificate& cert) {
  CertificateData c;
  c.omega_star = cert.omega;
  c.xi.assign(cert.xi.data(), cert.xi.data() + cert.xi.size());
  return c;
}

SufficientTable sufficient_table(const SufficientReport& report) {
  SufficientTable t;
  for (const auto& b : report.blocks) {
    BlockRow row;
    for (Index v : b.vertices) row.vertices.push_back(v + 1);
    row.observable_from = b.observable_from;
    row.zero_entry = to_string(b.zero_entry);
    row.indeterminate = b.indeterminate;
    row.eigenvalues = b.eigenvalues;
    row.frequencies = b.frequencies;
    t.blocks.push_back(std::move(row));
  }
  t.cond1_p_form = report.cond1_p_form;
  t.cond1_m_form = report.cond1_m_form;
  t.cond1 = report.cond1;
  t.common_eigenvalues = report.common_eigenvalues;
  t.common_frequencies = report.common_frequencies;
  t.cond2 = report.cond2;
  t.sum_graph_connected = report.sum_graph_connected;
  t.joint_nullspace_dimension = report.joint_nullspace_dimension;
  t.cond3 = report.cond3;
  t.overall = report.overall;
  return t;
}

FrequencyData frequency_data(const FrequencySweepReport& report) {
  FrequencyData f;
  f.probes = report.omegas;
  f.re_lambda2 = report.re_lambda2;
  f.worst_omega = report.worst_omega;
  for (const auto& c : report.candidates) {
    CandidateRow row;
    row.omega = c.omega;
    row.synchronizes = c.synchronizes;
    row.multiplicity = c.multiplicity;
    row.potentially_defective = c.potentially_defective;
    row.short_circuit = c.short_circuit;
    row.grounded = c.grounded;
    row.re_lambda2 = c.grounded ? std::numeric_limits<double>::infinity() : c.re_lambda2;
    for (Index k = 0; k < c.basis.cols(); ++k)
      row.null_space.emplace_back(c.basis.col(k).data(), c.basis.col(k).data() + c.basis.rows());
    f.candidates.push_back(std::move(row));
  }
  f.steady_state_frequencies = report.steady_state_frequencies;
  return f;
}

json report_to_json(const Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"method", c.method}, {"verdict", c.verdict}});
  json out = {{"tool", r.tool},
              {"version", r.version},
              {"command", r.command},
              {"network", {{"kind", r.network_kind}, {"q", r.q}}},
              {"verdict", r.verdict},
              {"method", r.method},
              {"tolerances",
               {{"rank_floor", number_json(r.tolerances.rank_floor)},
                {"subset", number_json(r.tolerances.subset)},
                {"candidate_rank", number_json(r.tolerances.candidate_rank)}}},
              {"checks", checks},
              {"warnings", r.warnings}};
  if (r.certificate) out["certificate"] = certificate_json(*r.certificate);
  if (r.sufficient) out["sufficient"] = sufficient_json(*r.sufficient);
  if (r.frequency) out["frequency"] = frequency_json(*r.frequency);
  return out;
}

Report report_from_json(const json& doc) {
  try {
    Report r;
    r.tool = get<std::string>(doc, "tool");
    r.version = get<std::string>(doc, "version");
    r.command = get<std::string>(doc, "command");
    const auto& net = member(doc, "network");
    r.network_kind = get<std::string>(net, "kind");
    r.q = get<Index>(net, "q");
    r.verdict = get<std::string>(doc, "verdict");
    r.method = get<std::string>(doc, "method");
    const auto& tol = member(doc, "tolerances");
    r.tolerances.rank_floor = number_from(member(tol, "rank_floor"));
    r.tolerances.subset = number_from(member(tol, "subset"));
    r.tolerances.candidate_rank = number_from(member(tol, "candidate_rank"));
    for (const auto& c : member(doc, "checks")) r.checks.push_back({get<std::string>(c, "method"), get<std::string>(c, "verdict")});
    r.warnings = get<std::vector<std::string>>(doc, "warnings");
    if (doc.contains("certificate")) r.certificate = certificate_from(doc["certificate"]);
    if (doc.contains("sufficient")) r.sufficient = sufficient_from(doc["sufficient"]);
    if (doc.contains("frequency")) r.frequency = frequency_from(doc["frequency"]);
    return r;
  } catch (const json::exception& e) {
    parse_fail(e.what());
  }
}

std::string machine_format(const Report& r) { return report_to_json(r).dump(2) + "\n"; }

std::string human_format(const Report& r) {
  std::ostringstream os;
  os << r.tool << " " << r.version << " " << r.command << "\n";
  os << "network: " << r.network_kind << ", q = " << r.q << "\n";
  os << "method: " << r.method << "\n";
  if (r.certificate) {
    const auto& c = *r.certificate;
    os << "certificate:\n";
    if (c.lambda_star) os << "  lambda* = " << short_number(*c.lambda_star) << "\n";
    os << "  omega*  = " << short_number(c.omega_star) << "\n";
    os << "  xi*     = " << complex_list(c.xi) << "\n";
    if (c.residual_r && c.residual_d)
      os << "  residuals: |R xi - lambda xi| = " << short_number(*c.residual_r)
         << ", |D xi| = " << short_number(*c.residual_d) << "\n";
    if (c.marginal) os << "  marginal: rank decision close to the cut\n";
  }
  if (!r.checks.empty()) {
    os << "checks:\n";
    for (const auto& c : r.checks) os << "  " << c.method << ": " << c.verdict << "\n";
  }
  if (r.sufficient) {
    const auto& t = *r.sufficient;
    os << "sufficient conditions:\n";
    for (std::size_t b = 0; b < t.blocks.size(); ++b) {
      const auto& blk = t.blocks[b];
      os << "  block " << b + 1 << " {";
      for (std::size_t k = 0; k < blk.vertices.size(); ++k) os << (k ? ", " : "") << blk.vertices[k];
      os << "}: observable from outputs [";
      for (std::size_t k = 0; k < blk.observable_from.size(); ++k) os << (k ? ", " : "") << (blk.observable_from[k] ? "yes" : "no");
      os << "], zero-entry eigenvector " << blk.zero_entry << (blk.indeterminate ? " (indeterminate)" : "")
         << ", frequencies " << list(blk.frequencies) << "\n";
    }
    os << "  condition 1 (observability): " << passed(t.cond1) << " (P-form " << passed(t.cond1_p_form) << ", M-form "
       << passed(t.cond1_m_form) << ")\n";
    os << "  condition 2 (common eigenvalues " << list(t.common_eigenvalues) << ", common frequencies "
       << list(t.common_frequencies) << "): " << passed(t.cond2) << "\n";
    os << "  condition 3 (joint null space dimension " << t.joint_nullspace_dimension << "): " << passed(t.cond3) << "\n";
  }
  if (r.frequency) {
    const auto& f = *r.frequency;
    os << "frequency data:\n";
    if (!f.re_lambda2.empty()) {
      double lo = std::numeric_limits<double>::infinity();
      for (double x : f.re_lambda2) lo = std::min(lo, x);
      os << "  " << f.probes.size() << " probes, min Re lambda_2 = " << short_number(lo) << " at omega = "
         << short_number(f.worst_omega) << "\n";
    }
    if (f.half_plane_ok) os << "  eigenvalues in the closed right half-plane: " << (*f.half_plane_ok ? "yes" : "no") << "\n";
    if (f.frequency_collapse) os << "  sign of Re lambda_2 frequency independent: " << (*f.frequency_collapse ? "yes" : "no") << "\n";
    os << "  steady-state frequencies: " << list(f.steady_state_frequencies) << "\n";
    for (const auto& c : f.candidates) {
      os << "  candidate omega = " << short_number(c.omega) << (c.short_circuit ? " [short circuit]" : "")
         << (c.grounded ? " [grounded]" : "") << ": " << (c.synchronizes ? "synchronizes" : "does not synchronize")
         << ", null space dimension " << c.null_space.size();
      if (c.multiplicity) os << ", root multiplicity " << c.multiplicity;
      if (c.potentially_defective) os << ", potentially defective";
      os << "\n";
      for (const auto& v : c.null_space) os << "    " << complex_list(v) << "\n";
    }
  }
  for (const auto& w : r.warnings) os << "warning: " << w << "\n";
  os << "verdict: " << r.verdict << "\n";
  return os.str();
}

void write_trajectory_csv(std::ostream& os, const StateSpace& ss, const Trajectory& traj) {
  const Index q = traj.q();
  os << "t";
  for (Index k = 1; k <= q; ++k) os << ",z" << k;
  for (Index k = 1; k <= q; ++k) os << ",zd" << k;
  os << ",sync_error,energy\n";
  const auto err = sync_error(traj);
  const auto v = energy(ss, traj);
  for (Index n = 0; n < traj.samples(); ++n) {
    os << format_number(traj.times[static_cast<std::size_t>(n)]);
    for (Index k = 0; k < 2 * q; ++k) os << ',' << format_number(traj.states(k, n));
    os << ',' << format_number(err[static_cast<std::size_t>(n)]) << ',' << format_number(v[static_cast<std::size_t>(n)]) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "omega,re_lambda2,im_lambda2,min_singular_value\n";
  for (const auto& r : rows) {
    os << format_number(r.omega) << ',' << format_number(r.lambda2.real()) << ',' << format_number(r.lambda2.imag())
       << ',' << format_number(r.min_singular_value) << '\n';
  }
}

}  // namespace harmsync
