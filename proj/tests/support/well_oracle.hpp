// Copyright 2026 The qbind Authors
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

#include <cmath>
#include <vector>

namespace qbind::testing {

// Step-well levels from a dense energy grid. Scans the pole-free form
// g(E) = sin(ka)√(V0 − E) + cos(ka)√E, which is continuous on [0, V0] and
// shares its zeros with the tangent equation, then bisects in E.
inline std::vector<double> well_levels_oracle(double a, double v0, double mass,
                                              int points = 400000) {
  constexpr double hbar = 1.054571817e-34;
  const auto g = [&](double e) {
    const double k = std::sqrt(2.0 * mass * e) / hbar;
    return std::sin(k * a) * std::sqrt(v0 - e) + std::cos(k * a) * std::sqrt(e);
  };
  std::vector<double> out;
  double prev_e = 0.0;
  double prev_g = g(0.0);
  for (int i = 1; i <= points; ++i) {
    const double e = v0 * static_cast<double>(i) / points;
    const double ge = g(e);
    if ((prev_g > 0.0) != (ge > 0.0) && prev_e > 0.0) {
      double lo = prev_e, hi = e;
      const bool lo_pos = prev_g > 0.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if ((g(mid) > 0.0) == lo_pos) lo = mid; else hi = mid;
      }
      const double root = 0.5 * (lo + hi);
      if (root < v0) out.push_back(root);
    }
    prev_e = e;
    prev_g = ge;
  }
  return out;
}

}  // namespace qbind::testing
