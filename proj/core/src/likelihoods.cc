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

#include "onoff/likelihoods.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "onoff/errors.h"
#include "onoff/numerics.h"

namespace onoff {
namespace {

constexpr double kMarginalWindowSigmas = 10.0;
constexpr double kMarginalRelTolerance = 1e-10;

// ln of the marginal integrand without the constant Gaussian normalization,
// i.e. n ln(s + b') - (s + b') - (b' - b)^2 / (2 sigma^2) - ln n!.
double MarginalExponent(std::int64_t n, double s, double b_prime,
                        const KnownBackgroundModel& model) {
  const double z = (b_prime - model.b) / model.sigma_b;
  return LogPoisson(n, s + b_prime) - 0.5 * z * z;
}

// Maximizer over b' >= 0 of the (concave) marginal integrand exponent.
double MarginalPeak(std::int64_t n, double s, const KnownBackgroundModel& m) {
  const double var = m.sigma_b * m.sigma_b;
  const auto roots = SolveQuadratic(
      1.0, var + s - m.b, -(var * (static_cast<double>(n) - s) + m.b * s));
  double best = 0.0;
  double best_value = MarginalExponent(n, s, 0.0, m);
  for (double r : roots.values()) {
    if (r <= 0.0) continue;
    const double v = MarginalExponent(n, s, r, m);
    if (v > best_value) {
      best = r;
      best_value = v;
    }
  }
  return best;
}

}  // namespace

void CountingObservation::Validate() const {
  if (n_obs < 0) throw std::invalid_argument("n_obs must be non-negative");
}

void KnownBackgroundModel::Validate() const {
  if (!(b >= 0.0)) throw std::invalid_argument("b must be non-negative");
  if (!(sigma_b >= 0.0)) {
    throw std::invalid_argument("sigma_b must be non-negative");
  }
}

void OnOffObservation::Validate() const {
  if (n_obs < 0) throw std::invalid_argument("n_obs must be non-negative");
  if (n_bg < 0) throw std::invalid_argument("n_bg must be non-negative");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
}

void FluxCalibration::Validate() const {
  if (!(f_sim > 0.0)) throw std::invalid_argument("f_sim must be positive");
  if (!(s_sim > 0.0)) throw std::invalid_argument("s_sim must be positive");
  if (!(sigma_sim >= 0.0)) {
    throw std::invalid_argument("sigma_sim must be non-negative");
  }
}

double LogPoisson(std::int64_t n, double mean) {
  if (!(mean >= 0.0)) {
    throw std::domain_error("LogPoisson: negative or undefined mean");
  }
  if (n < 0) throw std::domain_error("LogPoisson: negative count");
  if (mean == 0.0) return n == 0 ? 0.0 : kNegInf;
  if (std::isinf(mean)) return kNegInf;
  return static_cast<double>(n) * std::log(mean) - mean - LogFactorial(n);
}

double LogPoissonKnownBkg(const CountingObservation& obs, double s,
                          const KnownBackgroundModel& model) {
  obs.Validate();
  return LogPoisson(obs.n_obs, s + model.b);
}

double LogKnownBkgSys(const CountingObservation& obs, const NuisanceState& nuis,
                      double s, const KnownBackgroundModel& model) {
  obs.Validate();
  if (!(model.sigma_b > 0.0)) {
    throw std::domain_error(
        "LogKnownBkgSys: sigma_b must be positive (use LogPoissonKnownBkg)");
  }
  return LogPoisson(obs.n_obs, s + nuis.b_prime) +
         LogGaussian(nuis.b_prime, model.b, model.sigma_b);
}

MarginalEvaluation EvaluateMarginalKnownBkg(const CountingObservation& obs,
                                            double s,
                                            const KnownBackgroundModel& model) {
  obs.Validate();
  model.Validate();
  MarginalEvaluation out;
  if (model.sigma_b == 0.0) {
    out.log_value = LogPoisson(obs.n_obs, s + model.b);
    out.lower = out.upper = model.b;
    return out;
  }
  if (!(s >= 0.0)) {
    throw std::domain_error("LogMarginalKnownBkg: signal must be non-negative");
  }
  const std::int64_t n = obs.n_obs;
  const double peak = MarginalPeak(n, s, model);
  const double peak_value = MarginalExponent(n, s, peak, model);
  const double lo = std::max(0.0, peak - kMarginalWindowSigmas * model.sigma_b);
  const double hi = peak + kMarginalWindowSigmas * model.sigma_b;
  out.lower = lo;
  out.upper = hi;
  if (std::isinf(peak_value)) {
    out.log_value = kNegInf;
    return out;
  }

  // Curvature-based width of the peak. The quadrature runs in units of this
  // width so that a narrow background prior does not leave the integrator
  // working on an interval that is tiny next to its abscissae.
  const double mean = s + peak;
  const double curvature =
      (mean > 0.0 ? static_cast<double>(n) / (mean * mean) : 0.0) +
      1.0 / (model.sigma_b * model.sigma_b);
  const double width = 1.0 / std::sqrt(curvature);
  // The offset from b is formed without going through b' so that z stays
  // smooth in u when sigma_b is far below the spacing of doubles near b.
  const double offset = peak - model.b;
  auto integrand = [&](double u) {
    const double z = (offset + width * u) / model.sigma_b;
    return std::exp(LogPoisson(n, s + peak + width * u) - 0.5 * z * z -
                    peak_value);
  };
  const double u_lo = (lo - peak) / width;
  const double u_hi = (hi - peak) / width;
  std::vector<double> breaks = {u_lo};
  for (double x : {-6.0, 0.0, 6.0}) {
    if (x > breaks.back() && x < u_hi) breaks.push_back(x);
  }
  breaks.push_back(u_hi);

  double total = 0.0;
  double error = 0.0;
  bool converged = true;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const auto piece =
        IntegrateAdaptive(integrand, breaks[i], breaks[i + 1],
                          kMarginalRelTolerance);
    total += piece.value;
    error += piece.error_estimate;
    converged = converged && piece.converged;
  }
  total *= width;
  error *= width;
  out.relative_error = total > 0.0 ? error / total : error;
  // Per-piece convergence can fail on pieces that carry no mass; judge the
  // sum instead.
  out.converged = converged || out.relative_error <= kMarginalRelTolerance;
  out.log_value = peak_value + std::log(total) -
                  std::log(model.sigma_b) - 0.5 * std::log(2.0 * std::numbers::pi);
  return out;
}

double LogMarginalKnownBkg(const CountingObservation& obs, double s,
                           const KnownBackgroundModel& model) {
  const auto eval = EvaluateMarginalKnownBkg(obs, s, model);
  if (!eval.converged) {
    std::ostringstream msg;
    msg << "LogMarginalKnownBkg: quadrature did not converge (relative error "
        << eval.relative_error << " over [" << eval.lower << ", " << eval.upper
        << "])";
    throw NumericalError(msg.str());
  }
  return eval.log_value;
}

double LogOnOff(const OnOffObservation& obs, double s, double b) {
  obs.Validate();
  if (!(b >= 0.0)) throw std::domain_error("LogOnOff: negative background");
  return LogPoisson(obs.n_obs, b + s) + LogPoisson(obs.n_bg, obs.tau * b);
}

double LogOnOffSys(const OnOffObservation& obs, const NuisanceState& nuis,
                   double s, double b) {
  obs.Validate();
  if (!(obs.sigma > 0.0)) {
    throw std::domain_error("LogOnOffSys: sigma must be positive");
  }
  return LogPoisson(obs.n_obs, nuis.alpha_on * b + s) +
         LogGaussian(nuis.alpha_on, 1.0, obs.sigma) +
         LogPoisson(obs.n_bg, nuis.alpha_off * obs.tau * b) +
         LogGaussian(nuis.alpha_off, 1.0, obs.sigma);
}

double LogFluxKnownBkg(const CountingObservation& obs,
                       const NuisanceState& nuis, double f,
                       const KnownBackgroundModel& model,
                       const FluxCalibration& calib) {
  obs.Validate();
  calib.Validate();
  if (!(model.sigma_b > 0.0)) {
    throw std::domain_error("LogFluxKnownBkg: sigma_b must be positive");
  }
  const double signal = f * nuis.s_sim_prime / calib.f_sim;
  return LogPoisson(obs.n_obs, signal + nuis.b_prime) +
         LogGaussian(nuis.b_prime, model.b, model.sigma_b) +
         LogGaussian(nuis.s_sim_prime, calib.s_sim, calib.sigma_sim);
}

double LogFluxOnOffSys(const OnOffObservation& obs, const NuisanceState& nuis,
                       double f, double b, const FluxCalibration& calib) {
  calib.Validate();
  const double signal = f * nuis.s_sim_prime / calib.f_sim;
  return LogOnOffSys(obs, nuis, signal, b) +
         LogGaussian(nuis.s_sim_prime, calib.s_sim, calib.sigma_sim);
}

}  // namespace onoff
