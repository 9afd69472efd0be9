// Copyright 2026 The onoff Authors
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


// Likelihood-ratio significance for on/off counts.
//
//   lambda = max L(s = 0) / max L,   S = sign(s_hat) sqrt(-2 ln lambda)
//
// s_hat = n_on - n_off / tau. In the unclamped convention the free fit may
// take s_hat < 0, so background-like fluctuations give negative S. The clamped
// convention restricts the free fit to s >= 0, which makes lambda = 1 there.

#ifndef ONOFF_SIGNIFICANCE_H_
#define ONOFF_SIGNIFICANCE_H_

#include <string_view>

#include "onoff/likelihoods.h"
#include "onoff/profiler.h"

namespace onoff {

enum class BoundaryMode { kUnclamped, kClamped };

std::string_view ToString(BoundaryMode mode);

struct SignificanceResult {
  double lambda = 1.0;      // floored at the smallest normal double
  double log_lambda = 0.0;  // exact, use for -2 ln lambda
  double s_value = 0.0;
  double s_hat = 0.0;  // free-fit signal
  ProfileSolution null_fit;
  ProfileSolution free_fit;
};

// Two-Poisson likelihood; sigma is ignored.
SignificanceResult LimaSignificance(
    const OnOffObservation& obs, BoundaryMode mode = BoundaryMode::kUnclamped);

// With Gaussian zone efficiencies. Requires sigma > 0. The free fit is the
// closed-form optimum at alpha_on = alpha_off = 1; the null fit is the
// alpha_on scan at s = 0.
SignificanceResult OnOffSysSignificance(
    const OnOffObservation& obs, BoundaryMode mode = BoundaryMode::kUnclamped,
    const ScanSettings& scan = {});

// Closed form of the two-Poisson significance, unclamped and signed.
double LimaClosedForm(std::int64_t n_on, std::int64_t n_off, double tau);

}  // namespace onoff

#endif  // ONOFF_SIGNIFICANCE_H_
