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

// Domain constants and derived geometry for a single-gateway LoRa uplink
// cell: the per-spreading-factor parameter table, link budget, distance
// thresholds, and the two SF allocation policies.
//
// Everything here is an immutable value type; all operations are pure.

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace loracap {

inline constexpr int kFirstSf = 7;
inline constexpr int kSfCount = 6;  // SF7..SF12

// ---------------------------------------------------------------- errors ---

// Invalid configuration: bad key, bad value, inconsistent geometry.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// ----------------------------------------------------------------- enums ---

enum class Policy {
  sf_random,    // each device picks one of the six SFs uniformly at random
  sf_distance,  // SF determined by the annulus the device falls in
};

enum class Orthogonality {
  perfect,    // co-SF interference only
  imperfect,  // co-SF plus cross-SF interference
};

inline std::string to_string(Policy p) {
  return p == Policy::sf_random ? "sf-random" : "sf-distance";
}

inline std::string to_string(Orthogonality o) {
  return o == Orthogonality::perfect ? "perfect" : "imperfect";
}

inline std::optional<Policy> parse_policy(std::string_view s) {
  if (s == "sf-random") return Policy::sf_random;
  if (s == "sf-distance") return Policy::sf_distance;
  return std::nullopt;
}

inline std::optional<Orthogonality> parse_orthogonality(std::string_view s) {
  if (s == "perfect") return Orthogonality::perfect;
  if (s == "imperfect") return Orthogonality::imperfect;
  return std::nullopt;
}

// ------------------------------------------------------------ model knobs ---

// Resolutions of ambiguities in the underlying interference model. The
// defaults are the variants that agree with brute-force simulation; the
// alternatives are kept selectable for sensitivity analysis.
struct ModelOptions {
  // Success bookkeeping for the per-SF success probability.
  enum class Bookkeeping {
    slot_capture,   // P(the gateway captures some SF-m packet in the slot)
    tagged_device,  // P(one designated SF-m device is captured)
  };

  // Handling of the single-occupant term (exactly one device on the SF) in
  // imperfect-orthogonality mode, where reception and cross-SF rejection
  // compete as the binding condition.
  enum class SingleOccupantRule {
    capped_dominance,          // min(cross-SF term, reception term); exact
                               // with no interferers, asymptotically equal
                               // to the dominance argument for large N
    dominance_only,            // cross-SF term replaces reception outright
    dominance_times_reception, // product of the two (strict independence)
  };

  // Threshold used inside the cross-SF interferer kernel. The exact
  // marginalization uses the cross-SF rejection threshold itself; the
  // co-SF variant is retained because it appears in some derivations.
  enum class CrossSfKernel {
    inter_sf_threshold,  // consistent with the cross-SF SINR condition
    co_sf_threshold,
  };

  Bookkeeping bookkeeping = Bookkeeping::slot_capture;
  SingleOccupantRule single_occupant_rule = SingleOccupantRule::capped_dominance;
  CrossSfKernel cross_sf_kernel = CrossSfKernel::inter_sf_threshold;

  // Co-SF capture threshold: 4.0 exactly by convention. Setting this flag
  // uses the exact 6 dB conversion (10^0.6 ~ 3.981) instead.
  bool q_cosf_exact_db = false;
};

// ------------------------------------------------------------- Scenario ----

// Full experiment configuration. Defaults reproduce the reference cell:
// R = 1 km, P0 = 14 dBm, fc = 868 MHz, BW = 125 kHz, alpha = 4, NF = 6 dB,
// CR = 4/5.
struct Scenario {
  double radius_m = 1000.0;
  int nodes = 1;  // device count N (sweeps override per point)
  double p0_dbm = 14.0;
  double fc_mhz = 868.0;
  double bw_hz = 125e3;
  double alpha = 4.0;
  double nf_db = 6.0;
  int cr_n = 1;  // coding rate 4/(4+n), n in 1..4
  Policy policy = Policy::sf_distance;
  Orthogonality orthogonality = Orthogonality::imperfect;
  ModelOptions model;

  double coding_rate() const { return 4.0 / (4.0 + cr_n); }

  double q_cosf_linear() const {
    return model.q_cosf_exact_db ? std::pow(10.0, 0.6) : 4.0;
  }

  // Throws ConfigError if any invariant is violated.
  void validate() const;
};

// -------------------------------------------------------------- SF table ---

// Per-SF constants. dB/dBm columns are stored exactly as configured;
// conversion to linear units happens at the point of use.
struct SfParams {
  int m = 0;                   // spreading factor, 7..12
  double bitrate_bps = 0.0;
  double sensitivity_dbm = 0.0;
  double q_sf_db = 0.0;        // reception (SNR) threshold
  double q_isf_db = 0.0;       // cross-SF rejection threshold
  double annulus_lo_m = 0.0;   // distance-policy ring, inner radius
  double annulus_hi_m = 0.0;   // distance-policy ring, outer radius
};

// Receiver sensitivities theta_rx for SF7..SF12 (dBm).
inline constexpr std::array<double, kSfCount> kSensitivityDbm = {
    -123.0, -126.0, -129.0, -132.0, -134.5, -137.0};

// Reception thresholds q_SF for SF7..SF12 (dB).
inline constexpr std::array<double, kSfCount> kReceptionThresholdDb = {
    -6.0, -9.0, -12.0, -15.0, -17.5, -20.0};

// Cross-SF rejection thresholds q_iSF for SF7..SF12 (dB).
inline constexpr std::array<double, kSfCount> kInterSfThresholdDb = {
    -7.5, -9.0, -13.5, -15.0, -18.0, -22.5};

// ------------------------------------------------------------ conversions --

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

// ------------------------------------------------------------- operations --

// PHY bit-rate for spreading factor m: m coded bits arrive per symbol and a
// symbol lasts 2^m / BW seconds, so rate = m * CR * BW / 2^m.
inline double bitrate(int m, double coding_rate, double bw_hz) {
  if (m < kFirstSf || m >= kFirstSf + kSfCount)
    throw ConfigError("bitrate: spreading factor must be in 7..12, got " +
                      std::to_string(m));
  if (!(coding_rate > 0.0 && coding_rate <= 1.0) || !(bw_hz > 0.0))
    throw ConfigError("bitrate: invalid coding rate or bandwidth");
  return m * coding_rate * bw_hz / std::ldexp(1.0, m);
}

// Thermal noise floor in dBm: -174 dBm/Hz + noise figure + bandwidth term.
inline double noise_power_dbm(double nf_db, double bw_hz) {
  if (!(bw_hz > 0.0)) throw ConfigError("noise_power_dbm: bandwidth must be > 0");
  return -174.0 + nf_db + 10.0 * std::log10(bw_hz);
}

// Frequency-dependent constant of the deterministic path loss
// A(fc) = (fc^2 * 10^-2.8)^-1 with fc in MHz. Distances are in meters;
// that pairing is what reproduces the reference distance thresholds.
inline double deterministic_loss(double fc_mhz) {
  if (!(fc_mhz > 0.0)) throw ConfigError("deterministic_loss: fc must be > 0");
  return 1.0 / (fc_mhz * fc_mhz * std::pow(10.0, -2.8));
}

// Derived radio constants, all linear.
struct LinkBudget {
  double noise_mw = 0.0;  // AWGN power sigma_n^2
  double a_fc = 0.0;      // deterministic loss A(fc)
  double c = 0.0;         // path-loss constant P0 * A(fc) / sigma_n^2, in m^alpha

  static LinkBudget from(const Scenario& s) {
    LinkBudget lb;
    lb.noise_mw = dbm_to_mw(noise_power_dbm(s.nf_db, s.bw_hz));
    lb.a_fc = deterministic_loss(s.fc_mhz);
    lb.c = dbm_to_mw(s.p0_dbm) * lb.a_fc / lb.noise_mw;
    return lb;
  }
};

// Ring boundaries for the distance policy: l[0] = 0, l[6] = R, and
// l[1]..l[5] are the ranges at which the mean received power crosses each
// receiver sensitivity: l = (P0 * A(fc) / theta_rx)^(1/alpha).
//
// SF m covers (l[m-7], l[m-6]]. Throws ConfigError naming the offending SF
// if an interior threshold lands beyond the cell radius.
inline std::array<double, kSfCount + 1> distance_thresholds(const Scenario& s) {
  const LinkBudget lb = LinkBudget::from(s);
  const double p0_mw = dbm_to_mw(s.p0_dbm);
  std::array<double, kSfCount + 1> l{};
  l[0] = 0.0;
  for (int i = 0; i < kSfCount - 1; ++i) {
    const double theta_mw = dbm_to_mw(kSensitivityDbm[i]);
    l[i + 1] = std::pow(p0_mw * lb.a_fc / theta_mw, 1.0 / s.alpha);
    if (l[i + 1] > s.radius_m)
      throw ConfigError("distance threshold for SF" +
                        std::to_string(kFirstSf + i) + " (" +
                        std::to_string(l[i + 1]) +
                        " m) exceeds the cell radius (" +
                        std::to_string(s.radius_m) +
                        " m); the cell is too small for the rings this link "
                        "budget implies");
  }
  l[kSfCount] = s.radius_m;
  return l;
}

// SF selection probabilities and radial integration regions per policy.
struct AllocationProfile {
  std::array<double, kSfCount> p{};          // selection probability per SF
  std::array<double, kSfCount> region_lo{};  // radial domain, inner edge (m)
  std::array<double, kSfCount> region_hi{};  // radial domain, outer edge (m)
};

inline AllocationProfile allocation_profile(const Scenario& s) {
  AllocationProfile ap;
  if (s.policy == Policy::sf_random) {
    for (int i = 0; i < kSfCount; ++i) {
      ap.p[i] = 1.0 / kSfCount;
      ap.region_lo[i] = 0.0;
      ap.region_hi[i] = s.radius_m;
    }
    return ap;
  }
  const auto l = distance_thresholds(s);
  const double r2 = s.radius_m * s.radius_m;
  for (int i = 0; i < kSfCount; ++i) {
    ap.region_lo[i] = l[i];
    ap.region_hi[i] = l[i + 1];
    ap.p[i] = (l[i + 1] * l[i + 1] - l[i] * l[i]) / r2;
  }
  return ap;
}

// Complete per-SF table for a scenario.
inline std::array<SfParams, kSfCount> sf_table(const Scenario& s) {
  const AllocationProfile ap = allocation_profile(s);
  std::array<SfParams, kSfCount> t{};
  for (int i = 0; i < kSfCount; ++i) {
    t[i].m = kFirstSf + i;
    t[i].bitrate_bps = bitrate(kFirstSf + i, s.coding_rate(), s.bw_hz);
    t[i].sensitivity_dbm = kSensitivityDbm[i];
    t[i].q_sf_db = kReceptionThresholdDb[i];
    t[i].q_isf_db = kInterSfThresholdDb[i];
    t[i].annulus_lo_m = ap.region_lo[i];
    t[i].annulus_hi_m = ap.region_hi[i];
  }
  return t;
}

inline void Scenario::validate() const {
  if (!(radius_m > 0.0)) throw ConfigError("radius_m must be > 0");
  if (nodes < 1) throw ConfigError("nodes must be >= 1");
  if (!(bw_hz > 0.0)) throw ConfigError("bw_hz must be > 0");
  if (!(alpha > 2.0)) throw ConfigError("alpha must be > 2");
  if (!(fc_mhz > 0.0)) throw ConfigError("fc_mhz must be > 0");
  if (cr_n < 1 || cr_n > 4) throw ConfigError("cr_n must be in 1..4");
}

// ---------------------------------------------------------- config files ---

namespace detail {

inline std::string trim(std::string_view v) {
  size_t b = 0, e = v.size();
  while (b < e && std::isspace(static_cast<unsigned char>(v[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(v[e - 1]))) --e;
  return std::string(v.substr(b, e - b));
}

template <typename T>
T parse_number(const std::string& value, const std::string& key, int line) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (in.fail() || !(in >> std::ws).eof())
    throw ConfigError("config line " + std::to_string(line) +
                      ": invalid numeric value '" + value + "' for key '" +
                      key + "'");
  return out;
}

}  // namespace detail

// Parses a plain-text `key = value` configuration stream. `#` starts a
// comment; blank lines are ignored. Unknown keys and malformed values are
// reported with their key name and 1-based line number.
inline Scenario parse_config(std::istream& in,
                             const std::string& source = "<config>") {
  Scenario s;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string text = detail::trim(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ": config line " + std::to_string(line) +
                        ": expected 'key = value', got '" + text + "'");
    const std::string key = detail::trim(text.substr(0, eq));
    const std::string value = detail::trim(text.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(source + ": config line " + std::to_string(line) +
                        ": empty key or value");

    if (key == "radius_m") {
      s.radius_m = detail::parse_number<double>(value, key, line);
    } else if (key == "nodes") {
      s.nodes = detail::parse_number<int>(value, key, line);
    } else if (key == "p0_dbm") {
      s.p0_dbm = detail::parse_number<double>(value, key, line);
    } else if (key == "fc_mhz") {
      s.fc_mhz = detail::parse_number<double>(value, key, line);
    } else if (key == "bw_hz") {
      s.bw_hz = detail::parse_number<double>(value, key, line);
    } else if (key == "alpha") {
      s.alpha = detail::parse_number<double>(value, key, line);
    } else if (key == "nf_db") {
      s.nf_db = detail::parse_number<double>(value, key, line);
    } else if (key == "cr_n") {
      s.cr_n = detail::parse_number<int>(value, key, line);
    } else if (key == "policy") {
      const auto p = parse_policy(value);
      if (!p)
        throw ConfigError(source + ": config line " + std::to_string(line) +
                          ": unknown policy '" + value +
                          "' (expected sf-random or sf-distance)");
      s.policy = *p;
    } else if (key == "orthogonality") {
      const auto o = parse_orthogonality(value);
      if (!o)
        throw ConfigError(source + ": config line " + std::to_string(line) +
                          ": unknown orthogonality '" + value +
                          "' (expected perfect or imperfect)");
      s.orthogonality = *o;
    } else if (key == "bookkeeping") {
      if (value == "slot-capture")
        s.model.bookkeeping = ModelOptions::Bookkeeping::slot_capture;
      else if (value == "tagged-device")
        s.model.bookkeeping = ModelOptions::Bookkeeping::tagged_device;
      else
        throw ConfigError(source + ": config line " + std::to_string(line) +
                          ": unknown bookkeeping '" + value + "'");
    } else if (key == "single_occupant_rule") {
      if (value == "capped-dominance")
        s.model.single_occupant_rule =
            ModelOptions::SingleOccupantRule::capped_dominance;
      else if (value == "dominance-only")
        s.model.single_occupant_rule =
            ModelOptions::SingleOccupantRule::dominance_only;
      else if (value == "dominance-times-reception")
        s.model.single_occupant_rule =
            ModelOptions::SingleOccupantRule::dominance_times_reception;
      else
        throw ConfigError(source + ": config line " + std::to_string(line) +
                          ": unknown single_occupant_rule '" + value + "'");
    } else if (key == "cross_sf_kernel") {
      if (value == "inter-sf")
        s.model.cross_sf_kernel = ModelOptions::CrossSfKernel::inter_sf_threshold;
      else if (value == "co-sf")
        s.model.cross_sf_kernel = ModelOptions::CrossSfKernel::co_sf_threshold;
      else
        throw ConfigError(source + ": config line " + std::to_string(line) +
                          ": unknown cross_sf_kernel '" + value + "'");
    } else if (key == "q_cosf_exact_db") {
      if (value == "true" || value == "1")
        s.model.q_cosf_exact_db = true;
      else if (value == "false" || value == "0")
        s.model.q_cosf_exact_db = false;
      else
        throw ConfigError(source + ": config line " + std::to_string(line) +
                          ": q_cosf_exact_db expects true/false");
    } else {
      throw ConfigError(source + ": config line " + std::to_string(line) +
                        ": unknown key '" + key + "'");
    }
  }
  s.validate();
  return s;
}

}  // namespace loracap
