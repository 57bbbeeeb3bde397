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

// Analytical engine: capture probabilities, per-SF success probabilities
// and throughput by numerical integration of the Rayleigh-fading outage
// expressions.
//
// Model summary. A device at distance r_i transmitting with SF m is
// received when its SNR gamma_i = c*g_i/r_i^alpha (g_i unit-mean
// exponential fading power) clears the reception threshold; it survives a
// collision when its SINR against the aggregate of same-SF interferers
// clears the co-SF capture threshold, and - when the spreading factors are
// not treated as orthogonal - when its SINR against all other-SF
// interferers clears the cross-SF rejection threshold. Marginalizing the
// exponential fading of interferer k at distance r_k turns each SINR
// condition P(gamma_i >= q*(sum gamma_k + 1)) into
//
//   exp(-q r_i^alpha / c) * prod_k 1 / (1 + q (r_i/r_k)^alpha),
//
// and averaging interferer positions over their region collapses the
// product to a power of one radial integral. For alpha = 4 that radial
// integral has the closed-form primitive implemented by primitive_J.
//
// Public per-term operations return the *unnormalized* region integrals
// (the tagged device's own position density 2r/R^2 is left inside, so for
// the distance policy a term is bounded by the annulus mass, not by 1).
// The success mixture normalizes them into conditional capture
// probabilities before weighting; capture_terms exposes those conditional
// values for cross-checks against a conditioned simulator.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "loracap/log_binomial.hpp"
#include "loracap/quadrature.hpp"
#include "loracap/scenario.hpp"

namespace loracap {

// Conditional capture probabilities for one (m, j, N) cell; every field is
// a probability in [0, 1].
struct CaptureTriplet {
  double p_rx = 0.0;     // reception given the device's position law
  double p_cosf = 0.0;   // co-SF capture given j same-SF occupants
  double p_intsf = 0.0;  // cross-SF capture given j occupants out of N
};

// Per-SF success probabilities and the throughput they imply.
struct SuccessProfile {
  std::array<double, kSfCount> per_sf{};
  double throughput_bps = 0.0;
  // Largest amount clamped off any per-SF mixture sum; values beyond 1e-9
  // indicate a modelling inconsistency rather than roundoff.
  double clamp_excess = 0.0;

  static double recombine(const std::array<double, kSfCount>& per_sf,
                          const std::array<double, kSfCount>& rates) {
    double tau = 0.0;
    for (int i = 0; i < kSfCount; ++i) tau += rates[i] * per_sf[i];
    return tau;
  }
};

// Closed-form primitive of the interferer kernel integral for alpha = 4:
// d/dr [ primitive_J(r_i, r, q, R) ] = (2r/R^2) / (1 + q (r_i/r)^4).
// Only the quartic path-loss exponent admits this form; any other alpha
// must use the quadrature fallback.
inline double primitive_J(double r_i, double r, double q, double R,
                          double alpha = 4.0) {
  if (alpha != 4.0)
    throw std::domain_error(
        "primitive_J: closed form requires a quartic path-loss exponent");
  if (!(r_i > 0.0) || !(q > 0.0))
    throw std::domain_error("primitive_J: requires r_i > 0 and q > 0");
  if (r <= 0.0) return 0.0;  // limit of both terms as r -> 0
  const double sq = std::sqrt(q);
  const double ri2 = r_i * r_i;
  return (r / R) * (r / R) -
         (ri2 / (R * R)) * sq * std::atan(r * r / (ri2 * sq));
}

namespace detail {

// Geometry and thresholds of one SF under one scenario, in linear units.
struct SfGeometry {
  double R = 0.0;
  double alpha = 4.0;
  double c = 0.0;        // path-loss constant, m^alpha
  double a = 0.0;        // region inner radius
  double b = 0.0;        // region outer radius
  double mass = 0.0;     // region probability mass (b^2 - a^2)/R^2
  double p = 0.0;        // SF selection probability
  double q_sf = 0.0;     // reception threshold, linear
  double q_isf = 0.0;    // cross-SF rejection threshold, linear
  double q_co = 0.0;     // co-SF capture threshold, linear
  double q_kernel = 0.0; // threshold inside the cross-SF interferer kernel
  Policy policy = Policy::sf_distance;
};

inline SfGeometry make_geometry(const Scenario& s, int m) {
  if (m < kFirstSf || m >= kFirstSf + kSfCount)
    throw ConfigError("spreading factor must be in 7..12, got " +
                      std::to_string(m));
  const int i = m - kFirstSf;
  const AllocationProfile ap = allocation_profile(s);
  SfGeometry g;
  g.R = s.radius_m;
  g.alpha = s.alpha;
  g.c = LinkBudget::from(s).c;
  g.a = ap.region_lo[i];
  g.b = ap.region_hi[i];
  g.mass = (g.b * g.b - g.a * g.a) / (g.R * g.R);
  g.p = ap.p[i];
  g.q_sf = db_to_linear(kReceptionThresholdDb[i]);
  g.q_isf = db_to_linear(kInterSfThresholdDb[i]);
  g.q_co = s.q_cosf_linear();
  g.q_kernel =
      s.model.cross_sf_kernel == ModelOptions::CrossSfKernel::co_sf_threshold
          ? g.q_co
          : g.q_isf;
  g.policy = s.policy;
  return g;
}

// Interferer kernel integral over [lo, hi] against the disc density
// 2r/R^2: closed form for alpha = 4, quadrature otherwise.
inline double kernel_integral(const SfGeometry& g, double r_i, double q,
                              double lo, double hi,
                              const QuadratureSpec& quad) {
  if (hi <= lo) return 0.0;
  if (g.alpha == 4.0)
    return primitive_J(r_i, hi, q, g.R) - primitive_J(r_i, lo, q, g.R);
  return integrate(
      [&](double r_p) {
        const double ratio = std::pow(r_i / r_p, g.alpha);
        return (2.0 * r_p / (g.R * g.R)) / (1.0 + q * ratio);
      },
      lo, hi, quad);
}

// Unnormalized interferer factor of one co-SF interferer at unknown
// position in the SF-m region, seen by a device at r_i.
inline double cosf_factor(const SfGeometry& g, double r_i,
                          const QuadratureSpec& quad) {
  return kernel_integral(g, r_i, g.q_co, g.a, g.b, quad);
}

// Unnormalized interferer factor of one cross-SF interferer: the whole
// disc minus the SF-m region for the distance policy, the whole disc for
// the random policy (positions carry no SF information there).
inline double intsf_factor(const SfGeometry& g, double r_i,
                           const QuadratureSpec& quad) {
  const double whole = kernel_integral(g, r_i, g.q_kernel, 0.0, g.R, quad);
  if (g.policy == Policy::sf_random) return whole;
  return whole - kernel_integral(g, r_i, g.q_kernel, g.a, g.b, quad);
}

enum class InterfererKind { none, co_sf, cross_sf };

// Conditional capture integral: the tagged device's position follows the
// normalized region density, and each of `exponent` interferers
// contributes one normalized kernel factor in [0, 1].
inline double capture_integral_hat(const SfGeometry& g, double q_exp,
                                   InterfererKind kind, int exponent,
                                   const QuadratureSpec& quad) {
  if (g.mass <= 0.0) return 0.0;
  const double co_norm = g.mass;
  const double cross_norm =
      g.policy == Policy::sf_random ? 1.0 : 1.0 - g.mass;
  const auto integrand = [&](double r_i) {
    double v = std::exp(-q_exp * std::pow(r_i, g.alpha) / g.c) *
               (2.0 * r_i / (g.R * g.R)) / g.mass;
    if (exponent > 0) {
      double k = 0.0;
      if (kind == InterfererKind::co_sf) {
        k = cosf_factor(g, r_i, quad) / co_norm;
      } else if (kind == InterfererKind::cross_sf) {
        k = cross_norm > 0.0 ? intsf_factor(g, r_i, quad) / cross_norm : 0.0;
      }
      if (k < 0.0) k = 0.0;
      if (k > 1.0) k = 1.0;
      v *= std::pow(k, exponent);
    }
    return v;
  };
  return integrate(integrand, g.a, g.b, quad);
}

}  // namespace detail

// --------------------------------------------------------- raw integrals ---

// Probability that a device lies in the SF-m region AND its SNR clears the
// reception threshold (unnormalized over the region: bounded by the region
// mass under the distance policy).
inline double p_cap_rx(const Scenario& s, int m,
                       const QuadratureSpec& quad = {}) {
  const auto g = detail::make_geometry(s, m);
  if (g.mass <= 0.0) return 0.0;
  return g.mass *
         detail::capture_integral_hat(g, g.q_sf, detail::InterfererKind::none,
                                      0, quad);
}

// One co-SF interferer's position-averaged kernel factor (unnormalized:
// bounded by the SF-m region mass).
inline double interferer_integral_cosf(const Scenario& s, int m, double r_i,
                                       const QuadratureSpec& quad = {}) {
  return detail::cosf_factor(detail::make_geometry(s, m), r_i, quad);
}

// One cross-SF interferer's position-averaged kernel factor over the
// complement region (distance policy) or the whole disc (random policy).
inline double interferer_integral_intsf(const Scenario& s, int m, double r_i,
                                        const QuadratureSpec& quad = {}) {
  return detail::intsf_factor(detail::make_geometry(s, m), r_i, quad);
}

// Joint probability that a tagged device lies in the SF-m region and beats
// the co-SF capture threshold against j-1 same-SF interferers whose
// positions are averaged over the same region (unnormalized: carries a
// factor mass^j under the distance policy).
inline double p_cap_cosf(const Scenario& s, int m, int j,
                         const QuadratureSpec& quad = {}) {
  if (j < 2) throw std::domain_error("p_cap_cosf: requires j >= 2");
  const auto g = detail::make_geometry(s, m);
  if (g.mass <= 0.0) return 0.0;
  const double hat = detail::capture_integral_hat(
      g, g.q_co, detail::InterfererKind::co_sf, j - 1, quad);
  return std::pow(g.mass, j) * hat;
}

// Joint probability that a tagged device lies in the SF-m region and beats
// the cross-SF rejection threshold against N-j other-SF interferers
// (unnormalized; the exponential always uses the SF's rejection threshold,
// regardless of the kernel-threshold variant).
inline double p_cap_intsf(const Scenario& s, int m, int j, int N,
                          const QuadratureSpec& quad = {}) {
  if (j < 1 || j > N) throw std::domain_error("p_cap_intsf: requires 1 <= j <= N");
  const auto g = detail::make_geometry(s, m);
  if (g.mass <= 0.0) return 0.0;
  const double cross_norm =
      g.policy == Policy::sf_random ? 1.0 : 1.0 - g.mass;
  const double hat = detail::capture_integral_hat(
      g, g.q_isf, detail::InterfererKind::cross_sf, N - j, quad);
  return g.mass * std::pow(cross_norm, N - j) * hat;
}

// ---------------------------------------------------- conditional terms ----

// Conditional capture probabilities for inspection and simulator
// cross-checks. p_cosf uses the same integral family for any j >= 1 (j = 1
// reduces to an SNR test against the co-SF threshold).
inline CaptureTriplet capture_terms(const Scenario& s, int m, int j, int N,
                                    const QuadratureSpec& quad = {}) {
  if (j < 1 || j > N) throw std::domain_error("capture_terms: requires 1 <= j <= N");
  const auto g = detail::make_geometry(s, m);
  CaptureTriplet t;
  if (g.mass <= 0.0) return t;
  t.p_rx = detail::capture_integral_hat(g, g.q_sf,
                                        detail::InterfererKind::none, 0, quad);
  t.p_cosf = detail::capture_integral_hat(
      g, g.q_co, detail::InterfererKind::co_sf, j - 1, quad);
  t.p_intsf = detail::capture_integral_hat(
      g, g.q_isf, detail::InterfererKind::cross_sf, N - j, quad);
  return t;
}

// ------------------------------------------------------- success mixture ---

// Per-SF success probability: binomial mixture over the number of SF-m
// occupants j, each weighted term being the probability that the slot's
// SF-m traffic is captured given j occupants.
//
// Under slot-capture bookkeeping each term carries a multiplicity factor j
// (any one of the j occupants can be the captured one, and the co-SF
// threshold > 1 makes those events disjoint); tagged-device bookkeeping
// omits the factor. Imperfect orthogonality approximates the joint
// co-SF/cross-SF requirement by the binding (smaller) conditional term.
inline double p_success(const Scenario& s, int m, int N, Orthogonality mode,
                        const QuadratureSpec& quad = {},
                        double* clamp_excess = nullptr) {
  if (N < 1) throw std::domain_error("p_success: requires N >= 1");
  const auto g = detail::make_geometry(s, m);
  if (clamp_excess) *clamp_excess = 0.0;
  if (g.mass <= 0.0 || g.p <= 0.0) return 0.0;

  const bool multiplicity =
      s.model.bookkeeping == ModelOptions::Bookkeeping::slot_capture;

  const double rx_hat = detail::capture_integral_hat(
      g, g.q_sf, detail::InterfererKind::none, 0, quad);

  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(N));
  for (int j = 1; j <= N; ++j) {
    const double w = binomial_pmf(N, j, g.p);
    if (w <= 0.0) continue;

    double cap;
    if (mode == Orthogonality::perfect) {
      cap = j == 1
                ? rx_hat
                : detail::capture_integral_hat(
                      g, g.q_co, detail::InterfererKind::co_sf, j - 1, quad);
    } else {
      const double cross = detail::capture_integral_hat(
          g, g.q_isf, detail::InterfererKind::cross_sf, N - j, quad);
      if (j == 1) {
        switch (s.model.single_occupant_rule) {
          case ModelOptions::SingleOccupantRule::capped_dominance:
            cap = std::min(cross, rx_hat);
            break;
          case ModelOptions::SingleOccupantRule::dominance_only:
            cap = cross;
            break;
          case ModelOptions::SingleOccupantRule::dominance_times_reception:
            cap = cross * rx_hat;
            break;
          default:
            cap = std::min(cross, rx_hat);
        }
      } else {
        const double co = detail::capture_integral_hat(
            g, g.q_co, detail::InterfererKind::co_sf, j - 1, quad);
        cap = std::min(cross, co);
      }
    }
    terms.push_back(w * (multiplicity ? static_cast<double>(j) : 1.0) * cap);
  }

  double total = compensated_mixture_sum(std::move(terms));
  if (total > 1.0) {
    if (clamp_excess) *clamp_excess = total - 1.0;
    total = 1.0;
  } else if (total < 0.0) {
    if (clamp_excess) *clamp_excess = -total;
    total = 0.0;
  }
  return total;
}

// Throughput: sum over SFs of bitrate times per-SF success probability.
// The stored throughput_bps is exactly SuccessProfile::recombine applied
// to the stored per_sf vector (same order, same arithmetic).
inline SuccessProfile throughput(const Scenario& s, int N, Orthogonality mode,
                                 const QuadratureSpec& quad = {}) {
  SuccessProfile out;
  std::array<double, kSfCount> rates{};
  for (int i = 0; i < kSfCount; ++i) {
    rates[i] = bitrate(kFirstSf + i, s.coding_rate(), s.bw_hz);
    double excess = 0.0;
    out.per_sf[i] = p_success(s, kFirstSf + i, N, mode, quad, &excess);
    if (excess > out.clamp_excess) out.clamp_excess = excess;
  }
  out.throughput_bps = SuccessProfile::recombine(out.per_sf, rates);
  return out;
}

}  // namespace loracap
