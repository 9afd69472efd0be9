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

// Bayesian intervals with a uniform prior on the physical region s >= 0.
//
// The posterior is tabulated on a uniform grid. Grid cells are accumulated in
// decreasing order of posterior density (ties: smaller s first) until the
// enclosed mass reaches the credibility level; the interval is the span of
// the accepted grid points.

#ifndef ONOFF_BAYES_H_
#define ONOFF_BAYES_H_

#include <functional>
#include <optional>

#include "onoff/interval.h"
#include "onoff/likelihoods.h"
#include "onoff/profiler.h"

namespace onoff {

struct ScanGrid {
  double s_min = 0.0;
  double s_max = 1.0;
  double step = 1e-3;

  void Validate() const;
  std::size_t Points() const;
  double At(std::size_t i) const { return s_min + step * static_cast<double>(i); }
};

inline constexpr std::size_t kDefaultGridPoints = 4000;

// [0, n + b + 10 sqrt(n + b + 1) + 20] with `points` points.
ScanGrid DefaultSignalGrid(std::int64_t n_obs, double b,
                           std::size_t points = kDefaultGridPoints);

struct BayesOptions {
  std::optional<ScanGrid> grid;  // default grid when empty
  std::size_t grid_points = kDefaultGridPoints;  // for the default grid
  bool auto_extend = true;       // double the range once if the tail is heavy
  unsigned threads = 1;          // 0 = hardware concurrency
  ScanSettings scan;             // for the systematics profilers
};

using LogLikelihoodInSignal = std::function<double(double)>;

// Ordered integration of exp(loglike) over the grid.
IntervalResult CredibleInterval(const LogLikelihoodInSignal& loglike,
                                const ScanGrid& grid, double cl,
                                unsigned threads = 1);

IntervalResult BayesUpperLimitPoisson(const CountingObservation& obs,
                                      const KnownBackgroundModel& model,
                                      double cl, const BayesOptions& opts = {});

// Profile over b'. With sigma_b == 0 this is BayesUpperLimitPoisson.
IntervalResult BayesLimitProfileKnownBkg(const CountingObservation& obs,
                                         const KnownBackgroundModel& model,
                                         double cl,
                                         const BayesOptions& opts = {});

IntervalResult BayesLimitOnOff(const OnOffObservation& obs, double cl,
                               const BayesOptions& opts = {});

IntervalResult BayesLimitOnOffSys(const OnOffObservation& obs, double cl,
                                  const BayesOptions& opts = {});

// Flux posteriors. The profile likelihood levels off at large f (s_sim' can
// shrink to keep the signal count fixed), so a uniform prior on all f >= 0
// is improper; the prior here is uniform on the grid range instead. The
// default grid is the count grid converted at the nominal calibration.
IntervalResult BayesLimitFlux(const CountingObservation& obs,
                              const KnownBackgroundModel& model,
                              const FluxCalibration& calib, double cl,
                              const BayesOptions& opts = {});
IntervalResult BayesLimitFlux(const OnOffObservation& obs,
                              const FluxCalibration& calib, double cl,
                              const BayesOptions& opts = {});

// Profile-likelihood-ratio interval: the set of s >= 0 with
// -2 ln[L_p(s) / L_p(s_hat)] below the chi-square(1) quantile at cl.
// Requires sigma_b > 0. Throws NumericalError if a crossing cannot be
// bracketed.
IntervalResult Chi2ApproxLimit(const CountingObservation& obs,
                               const KnownBackgroundModel& model, double cl);

}  // namespace onoff

#endif  // ONOFF_BAYES_H_
