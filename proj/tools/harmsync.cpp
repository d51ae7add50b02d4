#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "harmsync/commands.hpp"
#include "harmsync/error.hpp"

using namespace harmsync;

namespace {

constexpr int kExitParse = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 5;

struct Global {
  double tol = 0.0;
  std::string format = "human";
};

RankOptions rank_options(const Global& g) { return RankOptions{g.tol}; }

void emit(const Report& r, const Global& g) {
  std::cout << (g.format == "machine" ? machine_format(r) : human_format(r));
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

OscillatorArray mechanical_view(const Network& net) {
  if (const auto* a = std::get_if<OscillatorArray>(&net)) return *a;
  if (const auto* lc = std::get_if<LcNetwork>(&net)) return equivalent_array(*lc);
  throw std::invalid_argument("simulate needs a mechanical or lc network");
}

Eigen::VectorXd read_state(const std::string& path, Index q) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot read '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorKind::Parse, "initial state must be an array of numbers");
  if (static_cast<Index>(doc.size()) != 2 * q)
    throw ValidationError({{ErrorKind::ShapeMismatch, -1, -1,
                            "initial state has " + std::to_string(doc.size()) + " entries, expected " +
                                std::to_string(2 * q)}});
  Eigen::VectorXd x(2 * q);
  for (Index k = 0; k < 2 * q; ++k) {
    if (!doc[k].is_number()) throw Error(ErrorKind::Parse, "initial state must be an array of numbers");
    x(k) = doc[k].get<double>();
  }
  return x;
}

nlohmann::json generate(const std::string& kind, Index q, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto weight = [&] { return 0.5 + 1.5 * unit(rng); };
  std::vector<WeightedPair> edges;
  for (Index i = 0; i < q; ++i) {
    for (Index j = i + 1; j < q; ++j) {
      if (unit(rng) >= density) continue;
      const double pick = unit(rng);
      WeightedPair e{i, j, 0.0, 0.0};
      if (pick < 0.4) e.d = weight();
      else if (pick < 0.8) e.r = weight();
      else { e.d = weight(); e.r = weight(); }
      edges.push_back(e);
    }
  }
  const auto a = array_from_edges(q, 1.0, edges);
  if (kind == "mechanical") return network_to_json(a);
  if (kind == "lc") return network_to_json(lc_from_array(1.0, 1.0, a.d(), a.r()));
  throw std::invalid_argument("generate supports --kind mechanical or lc");
}

int run_certify(const std::string& input, const std::string& method, const std::string& output, const Global& g) {
  const auto net = load_network(input);
  const auto report = certify_report(net, {method, rank_options(g)});
  if (!output.empty()) write_file(output, machine_format(report));
  emit(report, g);
  return exit_code(report);
}

struct SimulateArgs {
  std::string input, x0, out;
  bool seed_certificate = false;
  std::uint64_t seed = 1;
  double dt = 1e-3, horizon = 100.0;
  Index stride = 1;
};

int run_simulate(const SimulateArgs& s, const Global& g) {
  const auto net = load_network(s.input);
  const auto array = mechanical_view(net);
  const auto ss = build_state_space(array);
  Eigen::VectorXd x0;
  if (s.seed_certificate) {
    const auto v = pbh_check(array, rank_options(g));
    if (!v.certificate) throw std::invalid_argument("network synchronizes; there is no certificate to seed from");
    x0 = certificate_initial_state(*v.certificate);
  } else if (!s.x0.empty()) {
    x0 = read_state(s.x0, array.q());
  } else {
    std::mt19937_64 rng(s.seed);
    std::normal_distribution<double> normal;
    x0.resize(2 * array.q());
    for (Index k = 0; k < x0.size(); ++k) x0(k) = normal(rng);
  }
  const auto traj = integrate(ss, x0, s.horizon, s.dt, {s.stride});
  std::ofstream file;
  if (!s.out.empty()) {
    file.open(s.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write '" + s.out + "'");
  }
  std::ostream& csv = s.out.empty() ? std::cout : file;
  write_trajectory_csv(csv, ss, traj);
  std::ostream& log = s.out.empty() ? std::cerr : std::cout;
  const auto err = sync_error(traj);
  if (g.format == "machine") {
    nlohmann::json summary = {{"samples", traj.samples()},
                              {"dt", format_number(traj.dt)},
                              {"final_sync_error", format_number(err.back())},
                              {"warnings", traj.warnings}};
    log << summary.dump(2) << "\n";
  } else {
    log << "samples: " << traj.samples() << ", dt = " << format_number(traj.dt) << "\n";
    log << "final sync_error: " << format_number(err.back()) << "\n";
    for (const auto& w : traj.warnings) log << "warning: " << w << "\n";
  }
  return 0;
}

int run_sweep(const std::string& input, const SweepOptions& opts, const std::string& out, const Global& g) {
  const auto net = load_network(input);
  auto o = opts;
  o.rank = rank_options(g);
  const auto result = sweep_report(net, o);
  std::ofstream file;
  if (!out.empty()) {
    file.open(out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write '" + out + "'");
    write_sweep_csv(file, result.rows);
    emit(result.report, g);
  } else {
    write_sweep_csv(std::cout, result.rows);
    std::cerr << (g.format == "machine" ? machine_format(result.report) : human_format(result.report));
  }
  return exit_code(result.report);
}

int run_validate(const std::string& input) {
  const auto net = load_network(input);
  if (const auto* gen = std::get_if<GeneralNetwork>(&net)) check_passive(*gen);
  std::cout << "valid " << network_kind(net) << " network, q = " << network_size(net) << "\n";
  return 0;
}

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Parse: return kExitParse;
    case ErrorKind::NonFiniteState:
    case ErrorKind::DegreeOverflow: return kExitNumerical;
    default: return kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synchronization certificates for networks of identical harmonic oscillators"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--tol", g.tol, "Absolute floor for numerical rank decisions")->check(CLI::NonNegativeNumber);
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"human", "machine"}));

  std::string input, method = "pbh", output, out;
  auto* certify = app.add_subcommand("certify", "Decide synchronization and print a report");
  certify->add_option("input", input, "Network file")->required();
  certify->add_option("--method", method, "Test to run")->check(CLI::IsMember({"pbh", "observability", "sufficient", "all"}));
  certify->add_option("--output", output, "Also write the machine-format report here");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Integrate the network and write a trajectory CSV");
  simulate->add_option("input", sim.input, "Network file")->required();
  auto* x0_opt = simulate->add_option("--x0", sim.x0, "JSON array [z1..zq, zd1..zdq]");
  simulate->add_flag("--seed-certificate", sim.seed_certificate, "Start from [xi*; 0] of a PBH failure certificate")
      ->excludes(x0_opt);
  simulate->add_option("--seed", sim.seed, "Seed for a random normal initial state");
  simulate->add_option("--dt", sim.dt, "Step size")->check(CLI::PositiveNumber);
  simulate->add_option("--horizon", sim.horizon, "Final time")->check(CLI::PositiveNumber);
  simulate->add_option("--stride", sim.stride, "Keep every stride-th sample")->check(CLI::PositiveNumber);
  simulate->add_option("--out", sim.out, "CSV path (stdout if omitted)");

  SweepOptions sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sample lambda_2 of Y(jw) on a log grid");
  sweep_cmd->add_option("input", input, "Network file")->required();
  sweep_cmd->add_option("--wmin", sweep_opts.wmin, "Lowest frequency")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--wmax", sweep_opts.wmax, "Highest frequency")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--points", sweep_opts.points, "Grid points")->check(CLI::Range(2, 1000000));
  sweep_cmd->add_option("--out", out, "CSV path (stdout if omitted)");

  auto* validate = app.add_subcommand("validate", "Parse and validate a network file");
  validate->add_option("input", input, "Network file")->required();

  std::string kind = "mechanical";
  Index q = 4;
  double density = 0.5;
  std::uint64_t seed = 1;
  auto* gen = app.add_subcommand("generate", "Write a random network file");
  gen->add_option("--kind", kind, "mechanical or lc")->check(CLI::IsMember({"mechanical", "lc"}));
  gen->add_option("--q", q, "Number of oscillators")->check(CLI::PositiveNumber);
  gen->add_option("--density", density, "Edge probability")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", out, "Output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (certify->parsed()) return run_certify(input, method, output, g);
    if (simulate->parsed()) return run_simulate(sim, g);
    if (sweep_cmd->parsed()) return run_sweep(input, sweep_opts, out, g);
    if (validate->parsed()) return run_validate(input);
    if (gen->parsed()) {
      const std::string text = generate(kind, q, density, seed).dump(2) + "\n";
      if (out.empty()) std::cout << text;
      else write_file(out, text);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitParse;
}
