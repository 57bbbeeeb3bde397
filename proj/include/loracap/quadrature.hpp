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

// Adaptive Gauss-Kronrod (G7,K15) quadrature on a finite interval.
//
// The capture-probability integrands in this project are smooth, positive
// and defined on bounded radial intervals; a bisecting 15-point Kronrod
// scheme resolves them to near machine precision in a handful of panels.
// Subdivision is deterministic (always split the worst panel, ties broken
// by position), so results are bit-stable across runs and thread counts.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace loracap {

struct QuadratureSpec {
  enum class Rule {
    adaptive,  // bisect until the error estimate meets tolerance
    fixed,     // single (G7,K15) panel, no subdivision
  };
  Rule rule = Rule::adaptive;
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 64;
};

// Raised when the error estimate still exceeds tolerance after the
// subdivision budget is spent. Carries the residual estimate.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double residual_estimate)
      : std::runtime_error(what), residual(residual_estimate) {}
  double residual;
};

namespace detail {

// Nodes of the 15-point Kronrod extension of 7-point Gauss-Legendre on
// [-1, 1] (positive half; the rule is symmetric), with Kronrod weights and
// the embedded Gauss weights on the shared nodes.
inline constexpr int kGkPairs = 8;
inline constexpr double kGkNode[kGkPairs] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993944,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
inline constexpr double kKronrodWeight[kGkPairs] = {
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.0630920926299786,
    0.0229353220105292,
};
inline constexpr double kGaussWeight[kGkPairs] = {
    0.4179591836734694,  // node 0.0
    0.0,
    0.3818300505051189,  // node 0.4058...
    0.0,
    0.2797053914892767,  // node 0.7415...
    0.0,
    0.1294849661688697,  // node 0.9491...
    0.0,
};

struct PanelResult {
  double k15 = 0.0;  // 15-point estimate
  double err = 0.0;  // scaled |K15 - G7| error heuristic
};

template <class F>
PanelResult gk15_panel(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double f0 = f(mid);
  double k15 = kKronrodWeight[0] * f0;
  double g7 = kGaussWeight[0] * f0;
  for (int i = 1; i < kGkPairs; ++i) {
    const double dx = half * kGkNode[i];
    const double fsum = f(mid - dx) + f(mid + dx);
    k15 += kKronrodWeight[i] * fsum;
    g7 += kGaussWeight[i] * fsum;
  }
  k15 *= half;
  g7 *= half;

  PanelResult r;
  r.k15 = k15;
  // Standard scaled error heuristic: (200|K-G|)^1.5, capped by |K-G| scale.
  const double diff = std::fabs(k15 - g7);
  r.err = diff > 0.0 ? std::min(diff * 200.0 * std::sqrt(diff * 200.0), diff * 200.0)
                     : 0.0;
  return r;
}

}  // namespace detail

// Integrates f over [a, b]. Throws QuadratureError when the adaptive
// subdivision budget is exhausted with the tolerance unmet.
template <class F>
double integrate(const F& f, double a, double b,
                 const QuadratureSpec& spec = {}) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  struct Panel {
    double a, b, value, err;
  };
  std::vector<Panel> panels;
  {
    const auto r = detail::gk15_panel(f, a, b);
    panels.push_back({a, b, r.k15, r.err});
  }
  if (spec.rule == QuadratureSpec::Rule::fixed) return sign * panels[0].value;

  for (int split = 0; split < spec.max_subdivisions; ++split) {
    double total = 0.0, err = 0.0;
    for (const auto& p : panels) {
      total += p.value;
      err += p.err;
    }
    if (err <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(total)))
      return sign * total;

    // Split the panel with the largest error estimate; on ties prefer the
    // leftmost so the refinement pattern is reproducible.
    size_t worst = 0;
    for (size_t i = 1; i < panels.size(); ++i)
      if (panels[i].err > panels[worst].err) worst = i;

    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (!(p.a < mid && mid < p.b)) {
      // Interval has collapsed to machine precision; cannot refine further.
      break;
    }
    const auto left = detail::gk15_panel(f, p.a, mid);
    const auto right = detail::gk15_panel(f, mid, p.b);
    panels[worst] = {p.a, mid, left.k15, left.err};
    panels.push_back({mid, p.b, right.k15, right.err});
  }

  double total = 0.0, err = 0.0;
  for (const auto& p : panels) {
    total += p.value;
    err += p.err;
  }
  if (err <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(total)))
    return sign * total;
  throw QuadratureError(
      "quadrature did not converge after " +
          std::to_string(spec.max_subdivisions) +
          " subdivisions (residual estimate " + std::to_string(err) + ")",
      err);
}

}  // namespace loracap
