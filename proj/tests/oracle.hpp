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

// Reference implementations used only by the tests. Deliberately built on
// composite Simpson integration instead of the library's Gauss-Kronrod
// rule and closed forms, so agreement between the two sides is a genuine
// cross-check rather than the same code evaluated twice.

#include <cmath>
#include <functional>

namespace oracle {

// Composite Simpson rule with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n = 8192) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Position-averaged interference suppression of one interferer somewhere
// in [lo, hi] of a disc of radius R, as seen by a device at r_i with
// capture threshold q and path-loss exponent alpha:
//   integral of (2 r_p / R^2) / (1 + q (r_i / r_p)^alpha) d r_p.
inline double kernel_integral(double r_i, double q, double lo, double hi,
                              double R, double alpha, int n = 8192) {
  if (hi <= lo) return 0.0;
  return simpson(
      [&](double r_p) {
        if (r_p <= 0.0) return 0.0;
        return (2.0 * r_p / (R * R)) / (1.0 + q * std::pow(r_i / r_p, alpha));
      },
      lo, hi, n);
}

}  // namespace oracle
