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

// Counter-based random numbers (Philox 4x32, 10 rounds).
//
// A counter-based generator makes every (seed, trial, draw) triple an
// independent pure function, so Monte Carlo trials can be sharded across
// any number of workers and still reproduce bit-identical streams. The
// block function matches the published reference outputs (see the
// known-answer tests).

#include <array>
#include <cmath>
#include <cstdint>

namespace loracap {

struct Philox4x32 {
  using Counter = std::array<uint32_t, 4>;
  using Key = std::array<uint32_t, 2>;

  static constexpr uint32_t kMul0 = 0xD2511F53u;
  static constexpr uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr uint32_t kWeyl1 = 0xBB67AE85u;
  static constexpr int kRounds = 10;

  static constexpr Counter block(Counter ctr, Key key) {
    for (int round = 0; round < kRounds; ++round) {
      const uint64_t p0 = static_cast<uint64_t>(kMul0) * ctr[0];
      const uint64_t p1 = static_cast<uint64_t>(kMul1) * ctr[2];
      const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
      const uint32_t lo0 = static_cast<uint32_t>(p0);
      const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
      const uint32_t lo1 = static_cast<uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

// One independent substream per (seed, trial index). The seed forms the
// Philox key; the trial index and a per-stream block counter form the
// 128-bit counter. Each block yields four 32-bit words.
class TrialStream {
 public:
  TrialStream(uint64_t seed, uint64_t trial) : seed_(seed), trial_(trial) {}

  uint32_t next_u32() {
    if (word_index_ == 4) refill();
    return block_[word_index_++];
  }

  uint64_t next_u64() {
    const uint64_t lo = next_u32();
    const uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform on the half-open-from-zero interval (0, 1]: 53-bit resolution,
  // never exactly zero, so -log(u) below is always finite.
  double uniform_01() {
    const uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

  // Unit-mean exponential via inversion.
  double exponential() { return -std::log(uniform_01()); }

 private:
  void refill() {
    const Philox4x32::Counter ctr = {
        static_cast<uint32_t>(trial_), static_cast<uint32_t>(trial_ >> 32),
        static_cast<uint32_t>(block_index_),
        static_cast<uint32_t>(block_index_ >> 32)};
    const Philox4x32::Key key = {static_cast<uint32_t>(seed_),
                                 static_cast<uint32_t>(seed_ >> 32)};
    block_ = Philox4x32::block(ctr, key);
    ++block_index_;
    word_index_ = 0;
  }

  uint64_t seed_;
  uint64_t trial_;
  uint64_t block_index_ = 0;
  Philox4x32::Counter block_{};
  int word_index_ = 4;  // force refill on first draw
};

// Inverse CDF of the uniform-disc radial density 2r/R^2: r = R * sqrt(u).
inline double position_from_uniform(double u, double radius) {
  return radius * std::sqrt(u);
}

}  // namespace loracap
