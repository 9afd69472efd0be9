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


// Toy experiments for on/off measurements with Gaussian zone efficiencies.
//
// Each trial draws alpha_on, alpha_off ~ Gaussian(1, sigma) truncated at zero
// by redraw, then n_on ~ Poisson(alpha_on b + s), n_off ~ Poisson(alpha_off tau b).
// Every quantity comes from its own counter-based stream keyed by
// (seed, trial), so results do not depend on thread count or schedule.

#ifndef ONOFF_TOYMC_H_
#define ONOFF_TOYMC_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <string_view>
#include <vector>

#include "onoff/interval.h"
#include "onoff/likelihoods.h"
#include "onoff/significance.h"

namespace onoff {

struct ToyConfig {
  double s_true = 0.0;
  double b_true = 90.0;
  double tau = 3.0;
  double sigma = 0.03;
  std::int64_t n_trials = 1000;
  std::uint64_t seed = 1;

  void Validate() const;
};

struct ToyDraw {
  OnOffObservation obs;
  double alpha_on = 1.0;
  double alpha_off = 1.0;
  int redraws = 0;  // rejected negative efficiency draws
};

ToyDraw GenerateOnOff(const ToyConfig& cfg, std::int64_t trial);

enum class SignificanceMethod { kLima, kOnOffSys };

std::string_view ToString(SignificanceMethod m);
std::optional<SignificanceMethod> ParseSignificanceMethod(std::string_view tag);

struct StudyOptions {
  unsigned threads = 1;
  BoundaryMode boundary = BoundaryMode::kUnclamped;
  // Grid points for Bayesian coverage runs; 0 keeps the library default.
  std::size_t bayes_grid_points = 0;
};

inline constexpr int kHistogramBins = 81;
inline constexpr double kHistogramLow = -6.0;
inline constexpr double kHistogramHigh = 6.0;

struct SignificanceSummary {
  SignificanceMethod method = SignificanceMethod::kLima;
  std::int64_t n_trials = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double ks_distance = 0.0;  // sup |F_n - Phi|
  std::vector<std::int64_t> histogram;  // kHistogramBins over [low, high)
  std::int64_t underflow = 0;
  std::int64_t overflow = 0;
  std::int64_t redraws = 0;
  std::int64_t profiler_boundary = 0;

  double BinLow(int i) const;
};

SignificanceSummary SignificanceStudy(const ToyConfig& cfg,
                                      SignificanceMethod method,
                                      const StudyOptions& opts = {});

struct CoverageSummary {
  Method method = Method::kFc;
  double cl = 0.9;
  std::int64_t n_trials = 0;
  std::int64_t covered = 0;
  double coverage = 0.0;
  double wilson_low = 0.0;   // 1-sigma Wilson score band
  double wilson_high = 0.0;
  std::int64_t redraws = 0;
};

// Supported methods: fc and bayes-poisson (known background b_true, only
// n_on used), bayes-onoff and bayes-onoff-sys.
CoverageSummary CoverageStudy(const ToyConfig& cfg, Method method, double cl,
                              const StudyOptions& opts = {});

// Wilson score interval for k successes in n trials at z standard deviations.
std::pair<double, double> WilsonInterval(std::int64_t k, std::int64_t n,
                                         double z = 1.0);

}  // namespace onoff

#endif  // ONOFF_TOYMC_H_
