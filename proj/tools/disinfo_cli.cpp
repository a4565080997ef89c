// Command-line front end: simulate / sweep / tip / optimize /
// check-gradient over a scenario file. Data goes to output files or
// stdout; diagnostics go to stderr.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "disinfo/errors.hpp"
#include "disinfo/export.hpp"
#include "disinfo/optimal_control.hpp"
#include "disinfo/scenario.hpp"
#include "disinfo/tipping.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitBadBracket = 4;
constexpr int kExitBlowUp = 5;

disinfo::Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw disinfo::ValidationError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return disinfo::parse_scenario(buf.str());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw disinfo::ValidationError("cannot write output file: " + path);
  out << content;
}

void write_manifest(disinfo::RunManifest manifest,
                    std::chrono::steady_clock::time_point start,
                    const std::string& beside) {
  manifest.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_file(beside + ".manifest.json", manifest.to_json());
}

// LO:HI:N grammar of the sweep rate grid.
std::vector<double> parse_alphas(const std::string& spec, bool log_spaced) {
  double lo = 0.0, hi = 0.0;
  unsigned long n = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' ||
      !in.eof() || n < 1)
    throw disinfo::ValidationError("--alphas: expected LO:HI:N, got '" + spec +
                                   "'");
  if (log_spaced && !(lo > 0.0))
    throw disinfo::ValidationError("--alphas: LO must be > 0 with --log");
  std::vector<double> alphas(n);
  if (n == 1) {
    alphas[0] = lo;
    return alphas;
  }
  for (unsigned long i = 0; i < n; ++i) {
    const double w = static_cast<double>(i) / static_cast<double>(n - 1);
    alphas[i] = log_spaced ? lo * std::pow(hi / lo, w) : lo + w * (hi - lo);
  }
  return alphas;
}

std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

int run_simulate(const std::string& scenario_path, const std::string& out) {
  const auto start = std::chrono::steady_clock::now();
  const disinfo::Scenario sc = load_scenario(scenario_path);
  const disinfo::Trajectory traj = disinfo::integrate(sc);
  write_file(out, disinfo::export_csv(traj, false));
  disinfo::RunManifest m;
  m.scenario_digest = disinfo::scenario_digest(sc);
  m.subcommand = "simulate";
  m.options = {{"scenario", scenario_path}, {"out", out}};
  m.outputs = {out};
  write_manifest(std::move(m), start, out);
  return kExitOk;
}

int run_sweep(const std::string& scenario_path, const std::string& alphas_spec,
              bool log_spaced, const std::string& out) {
  const auto start = std::chrono::steady_clock::now();
  const disinfo::Scenario sc = load_scenario(scenario_path);
  const std::vector<double> alphas = parse_alphas(alphas_spec, log_spaced);
  const std::vector<disinfo::SweepEntry> entries =
      disinfo::sweep_rate(sc, alphas);

  std::string csv = "alpha,outcome,distance,peak_C,peak_I,error\n";
  for (const disinfo::SweepEntry& e : entries) {
    csv += fmt12(e.alpha);
    if (e.ok) {
      csv += e.verdict.outcome == disinfo::TipOutcome::Tip ? ",tip" : ",track";
      csv += "," + fmt12(e.verdict.distance) + "," + fmt12(e.peak_C) + "," +
             fmt12(e.peak_I) + ",";
    } else {
      std::string msg = e.error;
      for (char& c : msg)
        if (c == ',' || c == '\n') c = ';';
      csv += ",failed,,,," + msg;
    }
    csv += "\n";
  }
  write_file(out, csv);
  disinfo::RunManifest m;
  m.scenario_digest = disinfo::scenario_digest(sc);
  m.subcommand = "sweep";
  m.options = {{"scenario", scenario_path},
               {"alphas", alphas_spec},
               {"log", log_spaced ? "true" : "false"},
               {"out", out}};
  m.outputs = {out};
  write_manifest(std::move(m), start, out);
  return kExitOk;
}

int run_tip(const std::string& scenario_path, const std::string& out) {
  const auto start = std::chrono::steady_clock::now();
  const disinfo::Scenario sc = load_scenario(scenario_path);
  const disinfo::TippingResult res = disinfo::critical_rate(
      sc, sc.tipping.alpha_lo, sc.tipping.alpha_hi, sc.tipping.tol);

  nlohmann::ordered_json j;
  j["alpha_c"] = res.alpha_c;
  j["bracket"] = {res.alpha_lo, res.alpha_hi};
  j["iterations"] = res.iterations;
  j["verdict_lo"] = {{"outcome", "track"},
                     {"distance", res.verdict_lo.distance}};
  j["verdict_hi"] = {{"outcome", "tip"}, {"distance", res.verdict_hi.distance}};
  write_file(out, j.dump(2) + "\n");
  disinfo::RunManifest m;
  m.scenario_digest = disinfo::scenario_digest(sc);
  m.subcommand = "tip";
  m.options = {{"scenario", scenario_path}, {"out", out}};
  m.outputs = {out};
  write_manifest(std::move(m), start, out);
  return kExitOk;
}

int run_optimize(const std::string& scenario_path,
                 const std::string& out_states,
                 const std::string& out_controls) {
  const auto start = std::chrono::steady_clock::now();
  const disinfo::Scenario sc = load_scenario(scenario_path);
  const disinfo::FbsmResult res = disinfo::forward_backward_sweep(sc);

  disinfo::Trajectory traj = res.state_traj;
  traj.controls = res.controls;
  write_file(out_states, disinfo::export_csv(traj, true));
  write_file(out_controls,
             disinfo::export_controls_csv(sc.grid, res.controls));
  std::cerr << "converged in " << res.iterations
            << " iterations, J = " << res.J_history.back()
            << ", stationarity residual = " << res.stationarity_residual
            << "\n";
  disinfo::RunManifest m;
  m.scenario_digest = disinfo::scenario_digest(sc);
  m.subcommand = "optimize";
  m.options = {{"scenario", scenario_path},
               {"out-states", out_states},
               {"out-controls", out_controls}};
  m.outputs = {out_states, out_controls};
  write_manifest(std::move(m), start, out_states);
  return kExitOk;
}

int run_check_gradient(const std::string& scenario_path, unsigned seed) {
  const disinfo::Scenario sc = load_scenario(scenario_path);
  const std::size_t nodes = sc.grid.nodes();
  std::mt19937 rng(seed);
  // Random low-order Fourier schedules; the grid must resolve the
  // perturbation for the adjoint-route quadrature to be meaningful.
  std::uniform_real_distribution<double> amp_u(-0.05, 0.05);
  std::uniform_real_distribution<double> amp_du(-0.2, 0.2);
  double cu[4][4], su[4][4], cd[4][4], sd[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      cu[i][j] = amp_u(rng);
      su[i][j] = amp_u(rng);
      cd[i][j] = amp_du(rng);
      sd[i][j] = amp_du(rng);
    }
  const double span = sc.grid.T - sc.grid.t0;
  std::vector<disinfo::ControlVec> u(nodes), du(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    const double t = sc.grid.time_at(k);
    for (int i = 0; i < 4; ++i) {
      double uu = 0.5, dd = 0.0;
      for (int j = 0; j < 4; ++j) {
        const double w = 2.0 * 3.14159265358979324 * (j + 1) * t / span;
        uu += cu[i][j] * std::cos(w) + su[i][j] * std::sin(w);
        dd += cd[i][j] * std::cos(w) + sd[i][j] * std::sin(w);
      }
      u[k][i] = uu;
      du[k][i] = dd;
    }
  }
  const auto [adj, fd] = disinfo::directional_derivative_check(sc, u, du);
  const double denom = std::max(std::abs(fd), 1e-12);
  const double rel = std::abs(adj - fd) / denom;
  std::cout << "adjoint_gradient_dot_du = " << fmt12(adj) << "\n"
            << "fd_gradient_dot_du = " << fmt12(fd) << "\n"
            << "relative_disagreement = " << fmt12(rel) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"disinformation spread simulation and control toolkit"};
  app.require_subcommand(1);

  std::string scenario_path, out, out_controls, alphas_spec;
  bool log_spaced = false;
  unsigned seed = 0;

  CLI::App* simulate = app.add_subcommand("simulate", "integrate a scenario");
  simulate->add_option("--scenario", scenario_path)->required();
  simulate->add_option("--out", out)->required();

  CLI::App* sweep = app.add_subcommand("sweep", "rate-parameter sweep");
  sweep->add_option("--scenario", scenario_path)->required();
  sweep->add_option("--alphas", alphas_spec, "LO:HI:N rate grid")->required();
  sweep->add_flag("--log", log_spaced, "log-spaced grid");
  sweep->add_option("--out", out)->required();

  CLI::App* tip = app.add_subcommand("tip", "critical-rate bisection");
  tip->add_option("--scenario", scenario_path)->required();
  tip->add_option("--out", out)->required();

  CLI::App* optimize =
      app.add_subcommand("optimize", "forward-backward sweep optimal control");
  optimize->add_option("--scenario", scenario_path)->required();
  optimize->add_option("--out-states", out)->required();
  optimize->add_option("--out-controls", out_controls)->required();

  CLI::App* check =
      app.add_subcommand("check-gradient", "adjoint vs finite differences");
  check->add_option("--scenario", scenario_path)->required();
  check->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help();
    if (e.get_exit_code() == 0) return kExitOk;  // --help
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(scenario_path, out);
    if (sweep->parsed())
      return run_sweep(scenario_path, alphas_spec, log_spaced, out);
    if (tip->parsed()) return run_tip(scenario_path, out);
    if (optimize->parsed())
      return run_optimize(scenario_path, out, out_controls);
    if (check->parsed()) return run_check_gradient(scenario_path, seed);
  } catch (const disinfo::ValidationError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const disinfo::NonMonotonicBracketError& e) {
    std::cerr << "tipping error: " << e.what() << "\n";
    return kExitBadBracket;
  } catch (const disinfo::NoConvergenceError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    if (!e.j_history.empty()) {
      std::cerr << "objective history:";
      for (double j : e.j_history) std::cerr << " " << j;
      std::cerr << "\n";
    }
    return kExitNoConvergence;
  } catch (const disinfo::BlowUpError& e) {
    std::cerr << "numerical blow-up: " << e.what() << "\n";
    return kExitBlowUp;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
