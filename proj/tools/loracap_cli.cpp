// Copyright 2026 the loracap authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// loracap: LoRa uplink capacity toolkit.
//
//   loracap sweep   - run the analytical and/or Monte Carlo engines over a
//                     grid of device counts and emit CSV
//   loracap compare - pair analytic/Monte Carlo rows of a sweep CSV and
//                     report engine agreement
//
// Exit codes: 0 ok, 1 configuration error, 2 numerical/convergence error,
// 3 I/O error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "loracap/loracap.hpp"

namespace {

struct SweepOptions {
  std::string config_path;
  std::vector<int> nodes;
  std::optional<double> radius_m;
  std::optional<double> p0_dbm;
  std::optional<double> fc_mhz;
  std::optional<double> bw_hz;
  std::optional<double> alpha;
  std::optional<double> nf_db;
  std::optional<int> cr_n;
  std::string policy = "";         // sf-random | sf-distance | both
  std::string orthogonality = "";  // perfect | imperfect | both
  std::string engine = "both";     // analytic | montecarlo | both
  std::uint64_t trials = 20000;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out_path;
};

loracap::Scenario load_scenario(const SweepOptions& opt) {
  loracap::Scenario scn;
  if (!opt.config_path.empty()) {
    std::ifstream f(opt.config_path);
    if (!f)
      throw loracap::IoError("cannot open config file '" + opt.config_path +
                             "'");
    scn = loracap::parse_config(f, opt.config_path);
  }
  if (opt.radius_m) scn.radius_m = *opt.radius_m;
  if (opt.p0_dbm) scn.p0_dbm = *opt.p0_dbm;
  if (opt.fc_mhz) scn.fc_mhz = *opt.fc_mhz;
  if (opt.bw_hz) scn.bw_hz = *opt.bw_hz;
  if (opt.alpha) scn.alpha = *opt.alpha;
  if (opt.nf_db) scn.nf_db = *opt.nf_db;
  if (opt.cr_n) scn.cr_n = *opt.cr_n;
  scn.validate();
  return scn;
}

std::vector<loracap::Policy> parse_policy_set(const std::string& s,
                                              loracap::Policy fallback) {
  using loracap::Policy;
  if (s.empty()) return {fallback};
  if (s == "both") return {Policy::sf_random, Policy::sf_distance};
  const auto p = loracap::parse_policy(s);
  if (!p)
    throw loracap::ConfigError("unknown policy '" + s +
                               "' (expected sf-random, sf-distance or both)");
  return {*p};
}

std::vector<loracap::Orthogonality> parse_mode_set(const std::string& s) {
  using loracap::Orthogonality;
  if (s.empty() || s == "both")
    return {Orthogonality::perfect, Orthogonality::imperfect};
  const auto o = loracap::parse_orthogonality(s);
  if (!o)
    throw loracap::ConfigError(
        "unknown orthogonality '" + s +
        "' (expected perfect, imperfect or both)");
  return {*o};
}

std::vector<loracap::Engine> parse_engine_set(const std::string& s) {
  using loracap::Engine;
  if (s == "both") return {Engine::analytic, Engine::montecarlo};
  return {loracap::parse_engine(s)};
}

int run_sweep_command(const SweepOptions& opt) {
  const loracap::Scenario scn = load_scenario(opt);

  loracap::SweepSpec spec;
  if (!opt.nodes.empty()) spec.n_values = opt.nodes;
  spec.policies = parse_policy_set(opt.policy, scn.policy);
  spec.modes = parse_mode_set(opt.orthogonality);
  spec.engines = parse_engine_set(opt.engine);
  spec.trials = opt.trials;
  spec.seed = opt.seed;
  spec.workers = opt.workers;

  const auto rows = loracap::run_sweep(spec, scn);
  if (opt.out_path.empty()) {
    std::cout << loracap::to_csv(rows);
    if (!std::cout) throw loracap::IoError("failed writing CSV to stdout");
  } else {
    loracap::write_csv(opt.out_path, rows);
  }
  return 0;
}

int run_compare_command(const std::string& csv_path,
                        const std::string& out_path) {
  const auto rows = loracap::read_csv(csv_path);
  const auto report = loracap::compare_report(rows);
  const std::string text = loracap::format_compare(report);
  if (out_path.empty()) {
    std::cout << text;
    if (!std::cout) throw loracap::IoError("failed writing report to stdout");
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw loracap::IoError("cannot open '" + out_path + "' for writing");
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    f.flush();
    if (!f) throw loracap::IoError("failed while writing '" + out_path + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "LoRa uplink capacity toolkit: analytical capture model and Monte "
      "Carlo simulator"};
  app.require_subcommand(1);

  SweepOptions opt;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Sweep device counts and emit per-(N,policy,mode,engine) CSV");
  sweep->add_option("--config", opt.config_path,
                    "Scenario config file (key = value lines)");
  sweep->add_option("--nodes", opt.nodes,
                    "Device counts to sweep (comma separated, increasing)")
      ->delimiter(',');
  sweep->add_option("--radius-m", opt.radius_m, "Cell radius in meters");
  sweep->add_option("--p0-dbm", opt.p0_dbm, "Transmit power in dBm");
  sweep->add_option("--fc-mhz", opt.fc_mhz, "Carrier frequency in MHz");
  sweep->add_option("--bw-hz", opt.bw_hz, "Bandwidth in Hz");
  sweep->add_option("--alpha", opt.alpha, "Path-loss exponent (> 2)");
  sweep->add_option("--nf-db", opt.nf_db, "Receiver noise figure in dB");
  sweep->add_option("--cr-n", opt.cr_n, "Coding rate denominator n, CR = 4/(4+n)");
  sweep->add_option("--policy", opt.policy,
                    "SF allocation: sf-random, sf-distance or both "
                    "(default: scenario value)");
  sweep->add_option("--orthogonality", opt.orthogonality,
                    "perfect, imperfect or both (default: both)");
  sweep->add_option("--engine", opt.engine,
                    "analytic, montecarlo or both (default: both)");
  sweep->add_option("--trials", opt.trials, "Monte Carlo trials per point");
  sweep->add_option("--seed", opt.seed, "Monte Carlo base seed");
  sweep->add_option("--workers", opt.workers, "Worker threads for the sweep");
  sweep->add_option("--out", opt.out_path, "Output CSV path (default: stdout)");

  std::string compare_csv;
  std::string compare_out;
  CLI::App* compare = app.add_subcommand(
      "compare", "Report analytic vs Monte Carlo agreement from a sweep CSV");
  compare->add_option("csv", compare_csv, "Sweep CSV with rows from both engines")
      ->required();
  compare->add_option("--out", compare_out, "Report path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // CLI11 uses 0 for --help/--version; anything else is a usage error.
    return code == 0 ? 0 : 1;
  }

  try {
    if (sweep->parsed()) return run_sweep_command(opt);
    return run_compare_command(compare_csv, compare_out);
  } catch (const loracap::IoError& e) {
    std::cerr << "loracap: I/O error: " << e.what() << '\n';
    return 3;
  } catch (const loracap::QuadratureError& e) {
    std::cerr << "loracap: numerical error: " << e.what() << '\n';
    return 2;
  } catch (const loracap::ConfigError& e) {
    std::cerr << "loracap: config error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "loracap: numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "loracap: error: " << e.what() << '\n';
    return 1;
  }
}
