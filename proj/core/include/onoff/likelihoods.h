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

// Log-likelihoods for Poisson counting experiments.
//
// Two background pictures are supported. In the known-background picture the
// expected background b is given with an absolute Gaussian uncertainty sigma_b
// and the true background b' is a nuisance parameter. In the on/off picture
// the background is measured in an off zone whose exposure is tau times the
// on zone; the efficiencies of both zones (alpha_on, alpha_off) carry a
// relative Gaussian uncertainty sigma around 1.
//
// Signal may be expressed either as a count s or as a flux f, converted with
// a simulated reference: s = f * s_sim' / f_sim.
//
// All functions are pure. Gaussian nuisance densities are evaluated on the
// whole real line; clamping to the physical region is left to the profiler.

#ifndef ONOFF_LIKELIHOODS_H_
#define ONOFF_LIKELIHOODS_H_

#include <cstdint>

namespace onoff {

struct CountingObservation {
  std::int64_t n_obs = 0;

  void Validate() const;
};

struct KnownBackgroundModel {
  double b = 0.0;        // expected background counts
  double sigma_b = 0.0;  // absolute uncertainty, in counts

  void Validate() const;
};

struct OnOffObservation {
  std::int64_t n_obs = 0;  // on-zone count
  std::int64_t n_bg = 0;   // off-zone count
  double tau = 1.0;        // off/on exposure ratio
  double sigma = 0.0;      // relative zone-efficiency uncertainty

  void Validate() const;
  // Background estimate n_bg / tau.
  double BackgroundEstimate() const { return static_cast<double>(n_bg) / tau; }
};

struct NuisanceState {
  double b_prime = 0.0;
  double alpha_on = 1.0;
  double alpha_off = 1.0;
  double s_sim_prime = 0.0;
};

struct FluxCalibration {
  double f_sim = 1.0;
  double s_sim = 1.0;
  double sigma_sim = 0.0;

  void Validate() const;
  // Signal counts per unit flux at the nominal calibration.
  double CountsPerFlux() const { return s_sim / f_sim; }
};

// ln Poisson(n | mean). Poisson(0 | 0) = 1; Poisson(n > 0 | 0) = 0.
// Throws std::domain_error for a negative mean.
double LogPoisson(std::int64_t n, double mean);

// ln Poisson(n_obs | s + b).
double LogPoissonKnownBkg(const CountingObservation& obs, double s,
                          const KnownBackgroundModel& model);

// ln[Poisson(n_obs | s + b') Gaussian(b' | b, sigma_b)]. Requires sigma_b > 0.
double LogKnownBkgSys(const CountingObservation& obs, const NuisanceState& nuis,
                      double s, const KnownBackgroundModel& model);

// Result of integrating the known-background likelihood over b' >= 0.
struct MarginalEvaluation {
  double log_value = 0.0;
  double relative_error = 0.0;  // quadrature error estimate / integral
  double lower = 0.0;           // integration window actually used
  double upper = 0.0;
  bool converged = true;
};

// ln of the integral over b' in [0, inf) of Poisson(n | s + b') Gaussian(b').
// The window is centred on the integrand's peak and spans +-10 sigma_b,
// outside of which the integrand is below exp(-50) of its peak. With
// sigma_b == 0 this is LogPoissonKnownBkg.
MarginalEvaluation EvaluateMarginalKnownBkg(const CountingObservation& obs,
                                            double s,
                                            const KnownBackgroundModel& model);

// As above; throws NumericalError (carrying the error estimate) when the
// quadrature does not converge.
double LogMarginalKnownBkg(const CountingObservation& obs, double s,
                           const KnownBackgroundModel& model);

// ln[Poisson(n_obs | b + s) Poisson(n_bg | tau b)].
double LogOnOff(const OnOffObservation& obs, double s, double b);

// ln[Poisson(n_obs | alpha_on b + s) G(alpha_on | 1, sigma)
//    Poisson(n_bg | alpha_off tau b) G(alpha_off | 1, sigma)].
double LogOnOffSys(const OnOffObservation& obs, const NuisanceState& nuis,
                   double s, double b);

// ln[Poisson(n_obs | f s_sim'/f_sim + b') G(b' | b, sigma_b)
//    G(s_sim' | s_sim, sigma_sim)].
double LogFluxKnownBkg(const CountingObservation& obs,
                       const NuisanceState& nuis, double f,
                       const KnownBackgroundModel& model,
                       const FluxCalibration& calib);

// LogOnOffSys with signal f s_sim'/f_sim, times G(s_sim' | s_sim, sigma_sim).
double LogFluxOnOffSys(const OnOffObservation& obs, const NuisanceState& nuis,
                       double f, double b, const FluxCalibration& calib);

}  // namespace onoff

#endif  // ONOFF_LIKELIHOODS_H_
