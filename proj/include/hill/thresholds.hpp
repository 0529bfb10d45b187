// Copyright 2026 The hillmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HILL_THRESHOLDS_HPP_
#define HILL_THRESHOLDS_HPP_

#include <string>
#include <vector>

#include "hill/error.hpp"

namespace hill {

// Exploration thresholds u_1..u_T: at slot t >= 1 an agent explores iff its
// best known reward is below u_t. Slot 0 always explores.
struct ThresholdSequence {
  int horizon = 0;
  // The single slot whose end allows sharing; horizon - 1 for centralized
  // sharing, horizon for a purely private (single-agent) sequence.
  int comm_slot = 0;
  std::vector<double> values;     // values[t - 1] = u_t
  std::vector<double> residuals;  // defining-equation residual per entry
  int iterations = 0;
  std::vector<std::string> diagnostics;

  double at(int t) const {
    if (t < 1 || t > horizon) throw DomainError("threshold index outside [1, T]");
    return values[static_cast<std::size_t>(t - 1)];
  }

  double max_abs_residual() const {
    double m = 0.0;
    for (double r : residuals) m = r < 0 ? (-r > m ? -r : m) : (r > m ? r : m);
    return m;
  }
};

}  // namespace hill

#endif  // HILL_THRESHOLDS_HPP_
