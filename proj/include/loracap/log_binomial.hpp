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

// Log-domain binomial weights and compensated mixture summation.
//
// Raw binomial coefficients overflow double around N = 1030; the success
// mixtures here must stay usable to N = 10^4, so the weights are built
// from log-gamma and exponentiated individually (each final weight is a
// probability, hence representable). Mixture sums accumulate largest
// weight first with Neumaier compensation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace loracap {

// log(n choose k) for 0 <= k <= n.
inline double log_choose(int64_t n, int64_t k) {
  if (k < 0 || k > n) throw std::domain_error("log_choose: k outside 0..n");
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

// P(Binomial(n, p) = k), evaluated in the log domain.
inline double binomial_pmf(int64_t n, int64_t k, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("binomial_pmf: p outside [0, 1]");
  if (k < 0 || k > n) return 0.0;
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const double lw = log_choose(n, k) + static_cast<double>(k) * std::log(p) +
                    static_cast<double>(n - k) * std::log1p(-p);
  return std::exp(lw);
}

// All weights P(Binomial(n, p) = k) for k = 0..n.
inline std::vector<double> binomial_weights(int64_t n, double p) {
  std::vector<double> w(static_cast<size_t>(n) + 1);
  for (int64_t k = 0; k <= n; ++k) w[static_cast<size_t>(k)] = binomial_pmf(n, k, p);
  return w;
}

// Neumaier-compensated sum of term[i], accumulated in descending |term|
// order. Descending order keeps the running sum's exponent stable so the
// compensation absorbs the tail of tiny terms exactly.
inline double compensated_mixture_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end(),
            [](double x, double y) { return std::fabs(x) > std::fabs(y); });
  double sum = 0.0, comp = 0.0;
  for (double t : terms) {
    const double next = sum + t;
    if (std::fabs(sum) >= std::fabs(t))
      comp += (sum - next) + t;
    else
      comp += (t - next) + sum;
    sum = next;
  }
  return sum + comp;
}

}  // namespace loracap
