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

#include "loracap/log_binomial.hpp"

#include <cmath>

#include <catch2/catch_amalgamated.hpp>

using namespace loracap;

TEST_CASE("log_choose matches exact small coefficients") {
  REQUIRE(std::exp(log_choose(5, 2)) == Catch::Approx(10.0).epsilon(1e-12));
  REQUIRE(std::exp(log_choose(10, 3)) == Catch::Approx(120.0).epsilon(1e-12));
  REQUIRE(std::exp(log_choose(52, 5)) ==
          Catch::Approx(2598960.0).epsilon(1e-10));
  REQUIRE(log_choose(7, 0) == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(log_choose(7, 7) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("log_choose rejects out-of-domain arguments") {
  REQUIRE_THROWS_AS(log_choose(5, -1), std::domain_error);
  REQUIRE_THROWS_AS(log_choose(5, 6), std::domain_error);
  REQUIRE_THROWS_AS(log_choose(-1, 0), std::domain_error);
}

TEST_CASE("log_choose survives counts that overflow raw coefficients") {
  // C(10000, 5000) ~ 10^3008: far beyond double range, fine in logs.
  const double lc = log_choose(10000, 5000);
  REQUIRE(std::isfinite(lc));
  REQUIRE(lc == Catch::Approx(3008.0 * std::log(10.0)).epsilon(1e-3));
}

TEST_CASE("binomial_pmf matches the direct formula for small n") {
  // C(5,2) 0.3^2 0.7^3 = 10 * 0.09 * 0.343
  REQUIRE(binomial_pmf(5, 2, 0.3) ==
          Catch::Approx(0.3087).epsilon(1e-12));
  REQUIRE(binomial_pmf(1, 1, 0.25) == Catch::Approx(0.25).epsilon(1e-12));
  REQUIRE(binomial_pmf(1, 0, 0.25) == Catch::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("binomial_pmf degenerate success probabilities") {
  REQUIRE(binomial_pmf(8, 0, 0.0) == 1.0);
  REQUIRE(binomial_pmf(8, 3, 0.0) == 0.0);
  REQUIRE(binomial_pmf(8, 8, 1.0) == 1.0);
  REQUIRE(binomial_pmf(8, 5, 1.0) == 0.0);
}

TEST_CASE("binomial weights sum to one, small and large n") {
  for (const auto& [n, p] : {std::pair<int, double>{50, 0.2},
                             {200, 1.0 / 6.0},
                             {10000, 0.01}}) {
    const auto w = binomial_weights(n, p);
    REQUIRE(w.size() == static_cast<size_t>(n) + 1);
    const double total = compensated_mixture_sum(w);
    CAPTURE(n, p);
    REQUIRE(total == Catch::Approx(1.0).epsilon(1e-9));
    for (double x : w) {
      REQUIRE(x >= 0.0);
      REQUIRE(std::isfinite(x));
    }
  }
}

TEST_CASE("binomial weights agree with binomial_pmf termwise") {
  const auto w = binomial_weights(20, 0.37);
  for (int k = 0; k <= 20; ++k)
    REQUIRE(w[static_cast<size_t>(k)] == binomial_pmf(20, k, 0.37));
}

TEST_CASE("compensated sum recovers cancellation-prone mixtures") {
  // A naive left-to-right sum of these loses the 1.0 entirely.
  REQUIRE(compensated_mixture_sum({1e16, 1.0, -1e16}) == 1.0);
  // Many tiny terms against one large one.
  std::vector<double> terms(1000, 1e-16);
  terms.push_back(1.0);
  REQUIRE(compensated_mixture_sum(std::move(terms)) ==
          Catch::Approx(1.0 + 1000e-16).epsilon(1e-15));
  REQUIRE(compensated_mixture_sum({}) == 0.0);
}
