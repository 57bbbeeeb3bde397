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

#pragma once

// Sweep harness: runs the analytical and Monte Carlo engines over a grid
// of network sizes and serializes the results as CSV.
//
// CSV schema (stable, one header row):
//   N,policy,mode,engine,tau_bps,p_sf7,p_sf8,p_sf9,p_sf10,p_sf11,p_sf12,
//   ci95_bps,trials,seed
// The last three columns are empty on analytic rows. Doubles are written
// in shortest round-trip form, so parsing an emitted file reproduces the
// in-memory rows exactly.

#include <array>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "loracap/analytic.hpp"
#include "loracap/scenario.hpp"
#include "loracap/simulator.hpp"

namespace loracap {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Engine { analytic, montecarlo };

inline const char* to_string(Engine e) {
  return e == Engine::analytic ? "analytic" : "montecarlo";
}

inline Engine parse_engine(std::string_view s) {
  if (s == "analytic") return Engine::analytic;
  if (s == "montecarlo" || s == "mc") return Engine::montecarlo;
  throw ConfigError("unknown engine '" + std::string(s) +
                    "' (expected analytic|montecarlo)");
}

inline std::vector<int> default_grid() {
  return {1, 2, 5, 10, 15, 20, 25, 35, 50, 75, 100, 150, 200};
}

// Grid and execution parameters of one sweep.
struct SweepSpec {
  std::vector<int> n_values = default_grid();
  std::vector<Policy> policies = {Policy::sf_distance};
  std::vector<Orthogonality> modes = {Orthogonality::perfect,
                                      Orthogonality::imperfect};
  std::vector<Engine> engines = {Engine::analytic, Engine::montecarlo};
  std::uint64_t trials = 20000;
  std::uint64_t seed = 1;
  int workers = 1;
  QuadratureSpec quad{};

  void validate() const {
    if (n_values.empty()) throw ConfigError("sweep grid must be nonempty");
    int prev = 0;
    for (int n : n_values) {
      if (n < 1) throw ConfigError("sweep grid values must be >= 1");
      if (n <= prev)
        throw ConfigError("sweep grid must be strictly increasing");
      prev = n;
    }
    if (policies.empty()) throw ConfigError("sweep needs at least one policy");
    if (modes.empty()) throw ConfigError("sweep needs at least one mode");
    if (engines.empty()) throw ConfigError("sweep needs at least one engine");
    if (trials == 0) throw ConfigError("trials must be >= 1");
  }
};

// One output row. ci95_bps, trials and seed are meaningful only on Monte
// Carlo rows and serialize as empty fields otherwise.
struct SweepRow {
  int n = 0;
  Policy policy = Policy::sf_distance;
  Orthogonality mode = Orthogonality::imperfect;
  Engine engine = Engine::analytic;
  double tau_bps = 0.0;
  std::array<double, kSfCount> per_sf{};
  double ci95_bps = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const SweepRow& a, const SweepRow& b) {
    if (a.n != b.n || a.policy != b.policy || a.mode != b.mode ||
        a.engine != b.engine || a.tau_bps != b.tau_bps ||
        a.per_sf != b.per_sf)
      return false;
    if (a.engine == Engine::montecarlo)
      return a.ci95_bps == b.ci95_bps && a.trials == b.trials &&
             a.seed == b.seed;
    return true;
  }
  friend bool operator!=(const SweepRow& a, const SweepRow& b) {
    return !(a == b);
  }
};

// Runs every (N, policy, mode, engine) combination of the spec against the
// base scenario. Rows come back in spec order (N outermost, then policy,
// mode, engine); the worker pool only changes who computes a row, never
// its content or position.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec,
                                       const Scenario& base) {
  spec.validate();
  base.validate();

  struct Task {
    int n;
    Policy policy;
    Orthogonality mode;
    Engine engine;
  };
  std::vector<Task> tasks;
  for (int n : spec.n_values)
    for (Policy policy : spec.policies)
      for (Orthogonality mode : spec.modes)
        for (Engine engine : spec.engines)
          tasks.push_back({n, policy, mode, engine});

  std::vector<SweepRow> rows(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());

  const auto run_task = [&](size_t i) {
    const Task& t = tasks[i];
    SweepRow row;
    row.n = t.n;
    row.policy = t.policy;
    row.mode = t.mode;
    row.engine = t.engine;
    Scenario scn = base;
    scn.nodes = t.n;
    scn.policy = t.policy;
    scn.orthogonality = t.mode;
    if (t.engine == Engine::analytic) {
      const SuccessProfile prof = throughput(scn, t.n, t.mode, spec.quad);
      row.tau_bps = prof.throughput_bps;
      row.per_sf = prof.per_sf;
    } else {
      const ThroughputResult res =
          estimate(scn, t.n, spec.trials, spec.seed, t.mode, /*workers=*/1);
      row.tau_bps = res.throughput_bps;
      row.per_sf = res.per_sf;
      row.ci95_bps = res.ci95_bps;
      row.trials = res.trials;
      row.seed = res.seed;
    }
    rows[i] = row;
  };

  const int workers = spec.workers < 1 ? 1 : spec.workers;
  if (workers == 1 || tasks.size() <= 1) {
    for (size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<size_t> next{0};
    const auto worker = [&] {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        try {
          run_task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    const size_t pool = static_cast<size_t>(workers) < tasks.size()
                            ? static_cast<size_t>(workers)
                            : tasks.size();
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (size_t w = 0; w < pool; ++w) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return rows;
}

// ------------------------------------------------------------------ CSV ---

namespace detail {

inline std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline double parse_double_field(std::string_view s, size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw IoError("csv line " + std::to_string(line_no) +
                  ": bad numeric field '" + std::string(s) + "'");
  return v;
}

inline std::uint64_t parse_u64_field(std::string_view s, size_t line_no) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw IoError("csv line " + std::to_string(line_no) +
                  ": bad integer field '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  for (;;) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "N,policy,mode,engine,tau_bps,p_sf7,p_sf8,p_sf9,p_sf10,p_sf11,p_sf12,"
    "ci95_bps,trials,seed";

inline std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const SweepRow& r : rows) {
    out += std::to_string(r.n);
    out += ',';
    out += to_string(r.policy);
    out += ',';
    out += to_string(r.mode);
    out += ',';
    out += to_string(r.engine);
    out += ',';
    out += detail::format_double(r.tau_bps);
    for (double p : r.per_sf) {
      out += ',';
      out += detail::format_double(p);
    }
    if (r.engine == Engine::montecarlo) {
      out += ',';
      out += detail::format_double(r.ci95_bps);
      out += ',';
      out += std::to_string(r.trials);
      out += ',';
      out += std::to_string(r.seed);
    } else {
      out += ",,,";
    }
    out += '\n';
  }
  return out;
}

inline void write_csv(const std::string& path,
                      const std::vector<SweepRow>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  const std::string text = to_csv(rows);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.flush();
  if (!f) throw IoError("failed while writing '" + path + "'");
}

inline std::vector<SweepRow> parse_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  std::string line;
  size_t line_no = 0;
  if (!std::getline(in, line)) throw IoError("csv input is empty");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    throw IoError("csv header mismatch: got '" + line + "'");
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = detail::split_fields(line);
    if (f.size() != 14)
      throw IoError("csv line " + std::to_string(line_no) + ": expected 14 fields, got " +
                    std::to_string(f.size()));
    SweepRow r;
    r.n = static_cast<int>(detail::parse_u64_field(f[0], line_no));
    const auto policy = parse_policy(f[1]);
    if (!policy)
      throw IoError("csv line " + std::to_string(line_no) +
                    ": unknown policy '" + std::string(f[1]) + "'");
    r.policy = *policy;
    const auto mode = parse_orthogonality(f[2]);
    if (!mode)
      throw IoError("csv line " + std::to_string(line_no) +
                    ": unknown mode '" + std::string(f[2]) + "'");
    r.mode = *mode;
    r.engine = parse_engine(f[3]);
    r.tau_bps = detail::parse_double_field(f[4], line_no);
    for (int i = 0; i < kSfCount; ++i)
      r.per_sf[i] = detail::parse_double_field(f[5 + i], line_no);
    const bool mc = r.engine == Engine::montecarlo;
    if (mc) {
      r.ci95_bps = detail::parse_double_field(f[11], line_no);
      r.trials = detail::parse_u64_field(f[12], line_no);
      r.seed = detail::parse_u64_field(f[13], line_no);
    } else if (!f[11].empty() || !f[12].empty() || !f[13].empty()) {
      throw IoError("csv line " + std::to_string(line_no) +
                    ": analytic row must leave ci95_bps/trials/seed empty");
    }
    rows.push_back(r);
  }
  return rows;
}

inline std::vector<SweepRow> read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  return parse_csv(f);
}

// ----------------------------------------------------------- comparison ---

// Engine agreement for one (N, policy, mode) cell.
struct CompareEntry {
  int n = 0;
  Policy policy = Policy::sf_distance;
  Orthogonality mode = Orthogonality::imperfect;
  double tau_analytic = 0.0;
  double tau_mc = 0.0;
  double ci95_bps = 0.0;
  double rel_err = 0.0;  // |tau_analytic - tau_mc| / tau_mc
  bool outside_ci = false;
};

struct CompareReport {
  std::vector<CompareEntry> entries;
  std::vector<std::string> unmatched;  // rows lacking an engine partner
  double max_rel_err = 0.0;
};

inline CompareReport compare_report(const std::vector<SweepRow>& rows) {
  CompareReport rep;
  // Pair rows cell by cell, preserving first-appearance order.
  struct Cell {
    int n;
    Policy policy;
    Orthogonality mode;
    const SweepRow* analytic = nullptr;
    const SweepRow* mc = nullptr;
  };
  std::vector<Cell> cells;
  for (const SweepRow& r : rows) {
    Cell* cell = nullptr;
    for (Cell& c : cells)
      if (c.n == r.n && c.policy == r.policy && c.mode == r.mode) {
        cell = &c;
        break;
      }
    if (!cell) {
      cells.push_back({r.n, r.policy, r.mode, nullptr, nullptr});
      cell = &cells.back();
    }
    if (r.engine == Engine::analytic)
      cell->analytic = &r;
    else
      cell->mc = &r;
  }
  for (const Cell& c : cells) {
    const std::string tag = "N=" + std::to_string(c.n) + " " +
                            to_string(c.policy) + " " + to_string(c.mode);
    if (!c.analytic || !c.mc) {
      rep.unmatched.push_back(tag + " (missing " +
                              (c.analytic ? "montecarlo" : "analytic") +
                              " row)");
      continue;
    }
    CompareEntry e;
    e.n = c.n;
    e.policy = c.policy;
    e.mode = c.mode;
    e.tau_analytic = c.analytic->tau_bps;
    e.tau_mc = c.mc->tau_bps;
    e.ci95_bps = c.mc->ci95_bps;
    e.rel_err = e.tau_mc != 0.0
                    ? std::abs(e.tau_analytic - e.tau_mc) / e.tau_mc
                    : (e.tau_analytic == 0.0 ? 0.0 : 1.0);
    e.outside_ci = std::abs(e.tau_analytic - e.tau_mc) > e.ci95_bps;
    rep.entries.push_back(e);
    if (e.rel_err > rep.max_rel_err) rep.max_rel_err = e.rel_err;
  }
  return rep;
}

inline std::string format_compare(const CompareReport& rep) {
  std::string out =
      "N,policy,mode,tau_analytic_bps,tau_mc_bps,ci95_bps,rel_err,outside_ci\n";
  for (const CompareEntry& e : rep.entries) {
    out += std::to_string(e.n);
    out += ',';
    out += to_string(e.policy);
    out += ',';
    out += to_string(e.mode);
    out += ',';
    out += detail::format_double(e.tau_analytic);
    out += ',';
    out += detail::format_double(e.tau_mc);
    out += ',';
    out += detail::format_double(e.ci95_bps);
    out += ',';
    out += detail::format_double(e.rel_err);
    out += ',';
    out += e.outside_ci ? '1' : '0';
    out += '\n';
  }
  for (const std::string& u : rep.unmatched) {
    out += "# unmatched: ";
    out += u;
    out += '\n';
  }
  out += "# max_rel_err=";
  out += detail::format_double(rep.max_rel_err);
  out += '\n';
  return out;
}

}  // namespace loracap
