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


#include "onoff/significance.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace onoff {
namespace {

// Only rounding can push lambda above one.
SignificanceResult Finish(double ll_null, double ll_free, double s_hat) {
  SignificanceResult r;
  r.s_hat = s_hat;
  const double t = std::max(0.0, -2.0 * (ll_null - ll_free));
  r.log_lambda = -0.5 * t;
  // Past S ~ 37.6 the ratio is below the normal range of double.
  r.lambda = std::max(std::exp(r.log_lambda),
                      std::numeric_limits<double>::min());
  const double mag = std::sqrt(t);
  r.s_value = s_hat > 0.0 ? mag : (s_hat < 0.0 ? -mag : 0.0);
  return r;
}

}  // namespace

std::string_view ToString(BoundaryMode mode) {
  return mode == BoundaryMode::kClamped ? "clamped" : "unclamped";
}

SignificanceResult LimaSignificance(const OnOffObservation& obs,
                                    BoundaryMode mode) {
  OnOffObservation plain = obs;
  plain.sigma = 0.0;
  plain.Validate();
  const double n_on = static_cast<double>(obs.n_obs);
  const double n_off = static_cast<double>(obs.n_bg);

  ProfileSolution null_fit;
  null_fit.nuisance.b_prime = (n_on + n_off) / (1.0 + obs.tau);
  null_fit.log_like = LogOnOff(plain, 0.0, null_fit.nuisance.b_prime);

  const double b_hat = n_off / obs.tau;
  const double s_hat = n_on - b_hat;
  if (obs.n_obs == 0 && obs.n_bg == 0) {
    SignificanceResult r;
    r.null_fit = null_fit;
    r.free_fit = null_fit;
    return r;
  }
  if (mode == BoundaryMode::kClamped && s_hat <= 0.0) {
    SignificanceResult r = Finish(null_fit.log_like, null_fit.log_like, 0.0);
    r.s_hat = 0.0;
    r.null_fit = null_fit;
    r.free_fit = null_fit;
    return r;
  }
  ProfileSolution free_fit;
  free_fit.nuisance.b_prime = b_hat;
  // The on-zone mean is n_on for either sign of s_hat.
  free_fit.log_like = LogPoisson(obs.n_obs, n_on) + LogPoisson(obs.n_bg, n_off);
  SignificanceResult r = Finish(null_fit.log_like, free_fit.log_like, s_hat);
  r.null_fit = null_fit;
  r.free_fit = free_fit;
  return r;
}

SignificanceResult OnOffSysSignificance(const OnOffObservation& obs,
                                        BoundaryMode mode,
                                        const ScanSettings& scan) {
  obs.Validate();
  if (!(obs.sigma > 0.0)) {
    throw std::domain_error("OnOffSysSignificance: sigma must be positive");
  }
  const double n_on = static_cast<double>(obs.n_obs);
  const double n_off = static_cast<double>(obs.n_bg);
  const ProfileSolution null_fit = ProfileOnOffSys(obs, 0.0, scan);

  const double b_hat = n_off / obs.tau;
  const double s_hat = n_on - b_hat;
  if ((obs.n_obs == 0 && obs.n_bg == 0) ||
      (mode == BoundaryMode::kClamped && s_hat <= 0.0)) {
    SignificanceResult r = Finish(null_fit.log_like, null_fit.log_like, 0.0);
    r.null_fit = null_fit;
    r.free_fit = null_fit;
    return r;
  }
  ProfileSolution free_fit;
  free_fit.nuisance.b_prime = b_hat;
  free_fit.log_like = LogPoisson(obs.n_obs, n_on) + LogPoisson(obs.n_bg, n_off) +
                      2.0 * LogGaussian(1.0, 1.0, obs.sigma);
  SignificanceResult r = Finish(null_fit.log_like, free_fit.log_like, s_hat);
  r.null_fit = null_fit;
  r.free_fit = free_fit;
  return r;
}

double LimaClosedForm(std::int64_t n_on, std::int64_t n_off, double tau) {
  if (!(tau > 0.0)) throw std::domain_error("LimaClosedForm: tau must be positive");
  if (n_on < 0 || n_off < 0) throw std::domain_error("LimaClosedForm: negative count");
  const double a = 1.0 / tau;
  const double on = static_cast<double>(n_on);
  const double off = static_cast<double>(n_off);
  const double total = on + off;
  if (total == 0.0) return 0.0;
  double t = 0.0;
  if (on > 0.0) t += on * std::log((1.0 + a) / a * on / total);
  if (off > 0.0) t += off * std::log((1.0 + a) * off / total);
  const double mag = std::sqrt(std::max(0.0, 2.0 * t));
  const double excess = on - a * off;
  return excess > 0.0 ? mag : (excess < 0.0 ? -mag : 0.0);
}

}  // namespace onoff
