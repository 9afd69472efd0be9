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

// Profiling of nuisance parameters at fixed signal (or flux).
//
// The known-background and plain on/off cases have closed-form maximizers
// (roots of one quadratic). With zone systematics the maximum is found along
// the one-parameter curve on which every stationarity condition but one
// holds: the efficiencies satisfy
//
//   alpha_on (1 - alpha_on) + alpha_off (1 - alpha_off) = 0
//
// and the background solves its own stationarity equation. The remaining
// parameter is scanned over 1 +- 3 sigma, refined by golden section, and the
// scan is widened once to 1 +- 5 sigma if the maximum lands on its edge. The
// curve can have a second mode far from 1, so the whole range admitted by the
// identity, (0, (1+sqrt2)/2], is also scanned and the better point kept.
// Negative solutions are replaced by zero and recorded in ClampFlags.

#ifndef ONOFF_PROFILER_H_
#define ONOFF_PROFILER_H_

#include <array>

#include "onoff/likelihoods.h"
#include "onoff/numerics.h"

namespace onoff {

struct ClampFlags {
  bool b = false;
  bool alpha_on = false;
  bool alpha_off = false;
  bool s_sim = false;

  bool any() const { return b || alpha_on || alpha_off || s_sim; }
};

struct ProfileSolution {
  // For on/off profiles the fitted background is stored in b_prime.
  NuisanceState nuisance;
  double log_like = kNegInf;
  int scan_points = 0;
  ClampFlags clamped;
  bool widened = false;           // scan was retried over 1 +- 5 sigma
  bool full_range = false;        // the full-range scan gave the maximum
  bool at_scan_boundary = false;  // maximum still on the scan edge
};

struct ScanSettings {
  int points = 601;
  double half_width_sigmas = 3.0;
  double widened_half_width_sigmas = 5.0;
  bool full_range_fallback = true;
  double refine_tolerance = 1e-10;  // in units of sigma
};

// argmax over b' >= 0 of LogKnownBkgSys at fixed s. Requires sigma_b > 0.
ProfileSolution ProfileBKnownBkg(const CountingObservation& obs, double s,
                                 const KnownBackgroundModel& model);

// argmax over b >= 0 of LogOnOff at fixed s:
// (1 + tau) b^2 - (n_on + n_off - s (1 + tau)) b - n_off s = 0.
ProfileSolution ProfileBOnOff(const OnOffObservation& obs, double s);

// argmax over (b, alpha_on, alpha_off) of LogOnOffSys at fixed s, scanning
// alpha_on. Requires sigma > 0.
ProfileSolution ProfileOnOffSys(const OnOffObservation& obs, double s,
                                const ScanSettings& settings = {});

// argmax over (b', s_sim') of LogFluxKnownBkg at fixed f. The objective is
// jointly concave, so the maximum is the best of the interior stationary
// point and the three boundary candidates.
ProfileSolution ProfileFluxKnownBkg(const CountingObservation& obs, double f,
                                    const KnownBackgroundModel& model,
                                    const FluxCalibration& calib);

// argmax over (b, alpha_on, alpha_off, s_sim') of LogFluxOnOffSys at fixed f,
// scanning alpha_off. Requires sigma > 0 and sigma_sim > 0.
ProfileSolution ProfileFluxOnOffSys(const OnOffObservation& obs, double f,
                                    const FluxCalibration& calib,
                                    const ScanSettings& settings = {});

// alpha_on (1 - alpha_on) + alpha_off (1 - alpha_off).
double AlphaIdentityResidual(const NuisanceState& nuis);

// The four first-derivative conditions of LogFluxOnOffSys, in the order
// d/ds_sim', d/db, d/dalpha_on, d/dalpha_off. The background is taken from
// nuis.b_prime.
std::array<double, 4> FluxOnOffSysGradient(const OnOffObservation& obs,
                                           const NuisanceState& nuis, double f,
                                           const FluxCalibration& calib);

}  // namespace onoff

#endif  // ONOFF_PROFILER_H_
