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

#include "loracap/quadrature.hpp"

#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "oracle.hpp"

using namespace loracap;

TEST_CASE("polynomials are integrated to machine precision") {
  // The 15-point Kronrod rule is exact for polynomials well past degree 13,
  // so a single panel suffices.
  const auto quintic = [](double x) { return x * x * x * x * x; };
  REQUIRE(integrate(quintic, 0.0, 2.0) ==
          Catch::Approx(64.0 / 6.0).epsilon(1e-14));
  const auto deg13 = [](double x) { return std::pow(x, 13); };
  REQUIRE(integrate(deg13, -1.0, 3.0) ==
          Catch::Approx((std::pow(3.0, 14.0) - 1.0) / 14.0).epsilon(1e-14));
}

TEST_CASE("smooth transcendental integrands") {
  REQUIRE(integrate([](double x) { return std::exp(x); }, 0.0, 1.0) ==
          Catch::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  REQUIRE(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
          Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("narrow Gaussian needs adaptive refinement") {
  const double k = 1000.0;
  const double c = 0.3;
  const auto f = [&](double x) { return std::exp(-k * (x - c) * (x - c)); };
  const double sk = std::sqrt(k);
  const double exact = 0.5 * std::sqrt(M_PI / k) *
                       (std::erf(sk * (1.0 - c)) + std::erf(sk * c));
  REQUIRE(integrate(f, 0.0, 1.0) == Catch::Approx(exact).epsilon(1e-10));
}

TEST_CASE("degenerate and reversed intervals") {
  const auto f = [](double x) { return std::cos(x); };
  REQUIRE(integrate(f, 1.5, 1.5) == 0.0);
  const double fwd = integrate(f, 0.0, 1.0);
  REQUIRE(integrate(f, 1.0, 0.0) == -fwd);
}

TEST_CASE("fixed rule equals a single panel") {
  QuadratureSpec fixed;
  fixed.rule = QuadratureSpec::Rule::fixed;
  const auto f = [](double x) { return std::exp(-x * x); };
  const auto panel = detail::gk15_panel(f, 0.0, 2.0);
  REQUIRE(integrate(f, 0.0, 2.0, fixed) == panel.k15);
}

TEST_CASE("exhausted subdivision budget raises with a residual") {
  QuadratureSpec strict;
  strict.abs_tol = 1e-16;
  strict.rel_tol = 1e-16;
  strict.max_subdivisions = 2;
  const auto wiggly = [](double x) { return std::sin(1000.0 * x); };
  try {
    integrate(wiggly, 0.0, 50.0, strict);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    REQUIRE(e.residual > 0.0);
    REQUIRE(std::string(e.what()).find("subdivision") != std::string::npos);
  }
}

TEST_CASE("agrees with the Simpson oracle on the physics kernel") {
  // Same interferer-suppression kernel the analytic engine integrates.
  const double R = 1000.0;
  const double q = 4.0;
  for (double r_i : {80.0, 300.0, 452.0, 900.0}) {
    const auto f = [&](double r_p) {
      return (2.0 * r_p / (R * R)) /
             (1.0 + q * (r_i / r_p) * (r_i / r_p) * (r_i / r_p) * (r_i / r_p));
    };
    const double mine = integrate(f, 100.0, R);
    const double ref = oracle::kernel_integral(r_i, q, 100.0, R, R, 4.0);
    CAPTURE(r_i);
    REQUIRE(mine == Catch::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("adaptive refinement is deterministic") {
  const auto f = [](double x) { return std::exp(-5.0 * x) * std::sin(3.0 * x); };
  const double a = integrate(f, 0.0, 10.0);
  const double b = integrate(f, 0.0, 10.0);
  REQUIRE(a == b);  // bitwise: same panel splitting order both times
}
