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

// Monte Carlo engine. Each trial draws N device realizations (position,
// fading, spreading factor), evaluates every device's reception, co-SF
// capture and cross-SF rejection conditions directly from the SINR
// definitions - no shared code with the analytical engine - and records,
// per SF, whether at least one device using that SF succeeded.
//
// Determinism: every trial consumes its own counter-based random substream
// keyed by (seed, trial index), and partial results are reduced in fixed
// batch order, so estimates are bit-identical for any worker-pool size.

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "loracap/rng.hpp"
#include "loracap/scenario.hpp"

namespace loracap {

// One device in one trial: distance from the gateway, spreading factor
// index (0 = SF7), and faded SNR gamma = c * g / r^alpha.
struct NodeRealization {
  double r = 0.0;
  int sf = 0;
  double gamma = 0.0;
};

// Per-device condition flags, for property tests that need to look inside
// a trial rather than at the per-SF aggregate.
struct DeviceOutcome {
  bool rx = false;     // SNR cleared the reception threshold
  bool co = false;     // co-SF SINR cleared the capture threshold
  bool cross = false;  // cross-SF SINR cleared the rejection threshold
  bool success = false;
};

// Scenario constants hoisted out of the per-trial loop, in linear units.
struct SimContext {
  double R = 0.0;
  double alpha = 4.0;
  double c = 0.0;
  double q_co = 0.0;
  std::array<double, kSfCount> q_sf{};
  std::array<double, kSfCount> q_isf{};
  std::array<double, kSfCount> lo2{};  // squared region bounds
  std::array<double, kSfCount> hi2{};
  std::array<double, kSfCount> rate_bps{};
  Policy policy = Policy::sf_distance;

  static SimContext from(const Scenario& s) {
    SimContext ctx;
    ctx.R = s.radius_m;
    ctx.alpha = s.alpha;
    ctx.c = LinkBudget::from(s).c;
    ctx.q_co = s.q_cosf_linear();
    const AllocationProfile ap = allocation_profile(s);
    for (int i = 0; i < kSfCount; ++i) {
      ctx.q_sf[i] = db_to_linear(kReceptionThresholdDb[i]);
      ctx.q_isf[i] = db_to_linear(kInterSfThresholdDb[i]);
      ctx.lo2[i] = ap.region_lo[i] * ap.region_lo[i];
      ctx.hi2[i] = ap.region_hi[i] * ap.region_hi[i];
      ctx.rate_bps[i] = bitrate(kFirstSf + i, s.coding_rate(), s.bw_hz);
    }
    ctx.policy = s.policy;
    return ctx;
  }

  double gamma_of(double r, double g) const {
    return c * g / std::pow(r, alpha);
  }

  int sf_of_radius(double r) const {
    const double r2 = r * r;
    for (int i = 0; i < kSfCount; ++i)
      if (r2 <= hi2[i]) return i;
    return kSfCount - 1;  // r == R up to roundoff
  }
};

// Draws the N devices of one trial. Per-device draw order is pinned
// (position, fading, then the SF pick under the random policy) so that
// realizations depend only on (seed, trial index).
inline void sample_trial(const SimContext& ctx, TrialStream& stream, int n,
                         std::vector<NodeRealization>& out) {
  out.clear();
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    NodeRealization node;
    node.r = position_from_uniform(stream.uniform_01(), ctx.R);
    node.gamma = ctx.gamma_of(node.r, stream.exponential());
    if (ctx.policy == Policy::sf_random) {
      const int pick = static_cast<int>(stream.uniform_01() * kSfCount);
      node.sf = pick < kSfCount ? pick : kSfCount - 1;
    } else {
      node.sf = ctx.sf_of_radius(node.r);
    }
    out.push_back(node);
  }
}

// Evaluates every device's conditions. A device succeeds when its SNR
// clears the reception threshold, its SINR against the other same-SF
// devices clears the co-SF capture threshold (trivially true when it is
// alone on its SF), and - under imperfect orthogonality - its SINR
// against all other-SF devices clears its SF's rejection threshold.
inline std::vector<DeviceOutcome> device_outcomes(
    const SimContext& ctx, const std::vector<NodeRealization>& nodes,
    Orthogonality mode) {
  std::array<double, kSfCount> same_sum{};
  std::array<int, kSfCount> same_count{};
  double total = 0.0;
  for (const auto& node : nodes) {
    same_sum[node.sf] += node.gamma;
    same_count[node.sf] += 1;
    total += node.gamma;
  }
  std::vector<DeviceOutcome> out(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) {
    const auto& node = nodes[i];
    DeviceOutcome& d = out[i];
    d.rx = node.gamma >= ctx.q_sf[node.sf];
    d.co = same_count[node.sf] < 2 ||
           node.gamma >= ctx.q_co * (same_sum[node.sf] - node.gamma + 1.0);
    d.cross = mode == Orthogonality::perfect ||
              node.gamma >=
                  ctx.q_isf[node.sf] * (total - same_sum[node.sf] + 1.0);
    d.success = d.rx && d.co && d.cross;
  }
  return out;
}

// Per-SF slot outcome: true when at least one device using that SF
// succeeded this trial.
inline std::array<bool, kSfCount> evaluate_trial(
    const SimContext& ctx, const std::vector<NodeRealization>& nodes,
    Orthogonality mode) {
  std::array<double, kSfCount> same_sum{};
  std::array<int, kSfCount> same_count{};
  double total = 0.0;
  for (const auto& node : nodes) {
    same_sum[node.sf] += node.gamma;
    same_count[node.sf] += 1;
    total += node.gamma;
  }
  std::array<bool, kSfCount> success{};
  for (const auto& node : nodes) {
    const int m = node.sf;
    if (success[m]) continue;
    if (node.gamma < ctx.q_sf[m]) continue;
    if (same_count[m] >= 2 &&
        node.gamma < ctx.q_co * (same_sum[m] - node.gamma + 1.0))
      continue;
    if (mode == Orthogonality::imperfect &&
        node.gamma < ctx.q_isf[m] * (total - same_sum[m] + 1.0))
      continue;
    success[m] = true;
  }
  return success;
}

// Point estimate with sampling uncertainty.
struct ThroughputResult {
  std::array<double, kSfCount> per_sf{};
  std::array<double, kSfCount> per_sf_se{};
  double throughput_bps = 0.0;
  double se_bps = 0.0;
  double ci95_bps = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

namespace detail {

struct BatchPartial {
  std::array<std::uint64_t, kSfCount> success_count{};
  double tau_sum = 0.0;
  double tau_sq_sum = 0.0;
};

constexpr std::uint64_t kBatchTrials = 1024;

}  // namespace detail

// Runs `trials` independent slots and estimates per-SF success
// probabilities and throughput. Results are bit-identical for any
// `workers` >= 1: trials are pre-assigned to fixed batches, each batch is
// accumulated in trial order, and batches are folded in index order.
inline ThroughputResult estimate(const Scenario& s, int n,
                                 std::uint64_t trials, std::uint64_t seed,
                                 Orthogonality mode, int workers = 1) {
  if (n < 1) throw std::domain_error("estimate: requires N >= 1");
  if (trials == 0) throw std::domain_error("estimate: requires trials >= 1");
  if (workers < 1) workers = 1;

  const SimContext ctx = SimContext::from(s);
  const std::uint64_t batch_count =
      (trials + detail::kBatchTrials - 1) / detail::kBatchTrials;
  std::vector<detail::BatchPartial> partials(batch_count);

  const auto run_batch = [&](std::uint64_t batch) {
    detail::BatchPartial acc;
    std::vector<NodeRealization> nodes;
    const std::uint64_t begin = batch * detail::kBatchTrials;
    const std::uint64_t end =
        begin + detail::kBatchTrials < trials ? begin + detail::kBatchTrials
                                              : trials;
    for (std::uint64_t t = begin; t < end; ++t) {
      TrialStream stream(seed, t);
      sample_trial(ctx, stream, n, nodes);
      const auto success = evaluate_trial(ctx, nodes, mode);
      double tau = 0.0;
      for (int i = 0; i < kSfCount; ++i) {
        if (success[i]) {
          acc.success_count[i] += 1;
          tau += ctx.rate_bps[i];
        }
      }
      acc.tau_sum += tau;
      acc.tau_sq_sum += tau * tau;
    }
    partials[batch] = acc;
  };

  if (workers == 1 || batch_count == 1) {
    for (std::uint64_t b = 0; b < batch_count; ++b) run_batch(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    const auto worker = [&] {
      for (;;) {
        const std::uint64_t b = next.fetch_add(1);
        if (b >= batch_count) return;
        run_batch(b);
      }
    };
    const int pool = workers > static_cast<int>(batch_count)
                         ? static_cast<int>(batch_count)
                         : workers;
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(pool));
    for (int w = 0; w < pool; ++w) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }

  detail::BatchPartial total;
  for (const auto& part : partials) {
    for (int i = 0; i < kSfCount; ++i)
      total.success_count[i] += part.success_count[i];
    total.tau_sum += part.tau_sum;
    total.tau_sq_sum += part.tau_sq_sum;
  }

  ThroughputResult res;
  res.trials = trials;
  res.seed = seed;
  const double inv = 1.0 / static_cast<double>(trials);
  for (int i = 0; i < kSfCount; ++i) {
    const double p = static_cast<double>(total.success_count[i]) * inv;
    res.per_sf[i] = p;
    res.per_sf_se[i] = std::sqrt(p * (1.0 - p) * inv);
  }
  res.throughput_bps = total.tau_sum * inv;
  const double var =
      total.tau_sq_sum * inv - res.throughput_bps * res.throughput_bps;
  res.se_bps = std::sqrt((var > 0.0 ? var : 0.0) * inv);
  res.ci95_bps = 1.959963984540054 * res.se_bps;
  return res;
}

// ----------------------------------------------- conditioned term oracle ---

enum class CaptureTerm { reception, co_sf, inter_sf };

struct ConditionedEstimate {
  double p = 0.0;
  double se = 0.0;
  std::uint64_t trials = 0;
};

namespace detail {

// Radius of a device conditioned to lie inside the SF-m region.
inline double radius_in_region(const SimContext& ctx, int sf_index,
                               double u) {
  const double lo2 = ctx.lo2[sf_index];
  const double hi2 = ctx.hi2[sf_index];
  return std::sqrt(lo2 + u * (hi2 - lo2));
}

// Radius conditioned to lie in the disc minus the SF-m region.
inline double radius_in_complement(const SimContext& ctx, int sf_index,
                                   double u) {
  const double lo2 = ctx.lo2[sf_index];
  const double hi2 = ctx.hi2[sf_index];
  const double span = lo2 + (ctx.R * ctx.R - hi2);
  const double t = u * span;
  return t <= lo2 ? std::sqrt(t) : std::sqrt(hi2 + (t - lo2));
}

}  // namespace detail

// Estimates one conditional capture probability by direct simulation of
// the conditioned configuration: the tagged device lies in the SF-m
// region; co-SF interferers (j - 1 of them) share that region; cross-SF
// interferers (N - j of them) lie in the complement under the distance
// policy. Under the random policy every position is drawn from the whole
// disc, since positions carry no SF information there.
inline ConditionedEstimate conditioned_capture(const Scenario& s, int m,
                                               int j, int n, CaptureTerm term,
                                               std::uint64_t trials,
                                               std::uint64_t seed) {
  if (m < kFirstSf || m >= kFirstSf + kSfCount)
    throw std::domain_error("conditioned_capture: SF must be in 7..12");
  if (j < 1 || j > n)
    throw std::domain_error("conditioned_capture: requires 1 <= j <= N");
  if (trials == 0)
    throw std::domain_error("conditioned_capture: requires trials >= 1");

  const SimContext ctx = SimContext::from(s);
  const int sf = m - kFirstSf;
  const bool random_policy = ctx.policy == Policy::sf_random;
  const int interferers =
      term == CaptureTerm::co_sf ? j - 1 : (term == CaptureTerm::inter_sf ? n - j : 0);

  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    TrialStream stream(seed, t);
    const double u_pos = stream.uniform_01();
    const double r_tag = random_policy
                             ? position_from_uniform(u_pos, ctx.R)
                             : detail::radius_in_region(ctx, sf, u_pos);
    const double gamma_tag = ctx.gamma_of(r_tag, stream.exponential());

    double interference = 0.0;
    for (int k = 0; k < interferers; ++k) {
      const double u = stream.uniform_01();
      double r_k;
      if (random_policy) {
        r_k = position_from_uniform(u, ctx.R);
      } else if (term == CaptureTerm::co_sf) {
        r_k = detail::radius_in_region(ctx, sf, u);
      } else {
        r_k = detail::radius_in_complement(ctx, sf, u);
      }
      interference += ctx.gamma_of(r_k, stream.exponential());
    }

    bool ok = false;
    switch (term) {
      case CaptureTerm::reception:
        ok = gamma_tag >= ctx.q_sf[sf];
        break;
      case CaptureTerm::co_sf:
        ok = gamma_tag >= ctx.q_co * (interference + 1.0);
        break;
      case CaptureTerm::inter_sf:
        ok = gamma_tag >= ctx.q_isf[sf] * (interference + 1.0);
        break;
    }
    if (ok) ++hits;
  }

  ConditionedEstimate est;
  est.trials = trials;
  est.p = static_cast<double>(hits) / static_cast<double>(trials);
  est.se = std::sqrt(est.p * (1.0 - est.p) / static_cast<double>(trials));
  return est;
}

}  // namespace loracap
