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

#include "onoff/profiler.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace onoff {
namespace {

// Smallest efficiency admitted in the scans; the background equations divide
// by the scanned efficiency.
constexpr double kMinAlpha = 1e-9;
// Largest efficiency with a real partner under the identity.
const double kMaxAlpha = 0.5 * (1.0 + std::numbers::sqrt2);

// n ln(mu) - mu, with the zero-mean convention of LogPoisson.
double PoissonKernel(std::int64_t n, double mu) {
  if (mu <= 0.0) return n == 0 ? 0.0 : kNegInf;
  return static_cast<double>(n) * std::log(mu) - mu;
}

// The two solutions of x (1 - x) = -y (1 - y) for x given y.
QuadraticRoots IdentityPartner(double y) {
  return SolveQuadratic(1.0, -1.0, -y * (1.0 - y));
}

// Largest non-negative root of a x^2 + b x + c, or zero (clamped) when both
// roots are negative or there is none.
double NonNegativeRoot(double a, double b, double c, bool* clamped) {
  const auto r = SolveQuadratic(a, b, c);
  if (r.count > 0 && r.hi > 0.0) return r.hi;
  *clamped = true;
  return 0.0;
}

struct CurvePoint {
  NuisanceState nuis;
  double kernel = kNegInf;
  ClampFlags clamped;
};

// Maximize a one-parameter family of candidate points over
// [1 - k sigma, 1 + k sigma], widening once if the maximum is on the edge,
// then compare against a scan of the whole admissible range since the curve
// can have a second, higher mode far from 1. `eval` maps the scanned
// efficiency to its curve point. `polish`, when given, may improve the
// refined point.
template <typename Eval>
ProfileSolution ScanCurve(double sigma, const ScanSettings& settings,
                          const Eval& eval,
                          CurvePoint (*polish)(const Eval&, double lo,
                                               double hi,
                                               const CurvePoint&) = nullptr) {
  int evaluations = 0;
  struct RangeBest {
    CurvePoint point;
    bool boundary = false;
  };
  auto scan = [&](double lo, double hi) {
    const int n = std::max(settings.points, 3);
    const double step = (hi - lo) / static_cast<double>(n - 1);

    int best_i = -1;
    CurvePoint grid_best;
    for (int i = 0; i < n; ++i) {
      const double x = lo + step * static_cast<double>(i);
      CurvePoint p = eval(x);
      ++evaluations;
      if (best_i < 0 || p.kernel > grid_best.kernel) {
        best_i = i;
        grid_best = p;
      }
    }
    double bx = lo + step * static_cast<double>(best_i);
    CurvePoint bp = grid_best;

    if (std::isfinite(grid_best.kernel)) {
      const double a = std::max(lo, bx - step);
      const double b = std::min(hi, bx + step);
      const auto refined = GoldenSectionMaximize(
          [&](double x) { return eval(x).kernel; }, a, b,
          settings.refine_tolerance * std::max(sigma, 1e-300));
      evaluations += refined.evaluations;
      if (refined.value > bp.kernel) {
        bx = refined.x;
        bp = eval(bx);
      }
      if (polish != nullptr) {
        CurvePoint polished = polish(eval, a, b, bp);
        ++evaluations;
        if (polished.kernel >= bp.kernel) bp = polished;
      }
    }

    RangeBest out;
    out.point = bp;
    const double edge_tol = 0.5 * step;
    const bool at_lo = best_i == 0 && bx - lo < edge_tol;
    const bool at_hi = best_i == n - 1 && hi - bx < edge_tol;
    // Both identity branches meet at kMaxAlpha, so that end is not an edge
    // of the curve.
    out.boundary = at_lo || (at_hi && hi < kMaxAlpha);
    return out;
  };
  auto around_one = [&](double k) {
    return scan(std::max(kMinAlpha, 1.0 - k * sigma),
                std::min(kMaxAlpha, 1.0 + k * sigma));
  };

  ProfileSolution out;
  RangeBest best = around_one(settings.half_width_sigmas);
  if (best.boundary) {
    out.widened = true;
    best = around_one(settings.widened_half_width_sigmas);
  }
  if (settings.full_range_fallback) {
    const RangeBest whole = scan(kMinAlpha, kMaxAlpha);
    if (whole.point.kernel > best.point.kernel) {
      best = whole;
      out.full_range = true;
    }
  }

  out.nuisance = best.point.nuis;
  out.clamped = best.point.clamped;
  out.scan_points = evaluations;
  out.at_scan_boundary = best.boundary;
  return out;
}

// Curve for the on/off likelihood with zone systematics at signal s,
// parametrized by alpha_on.
struct OnOffSysCurve {
  const OnOffObservation* obs;
  double s;

  CurvePoint operator()(double alpha_on) const {
    CurvePoint best;
    const auto partners = IdentityPartner(alpha_on);
    if (partners.count == 0) return best;
    const double var2 = 2.0 * obs->sigma * obs->sigma;
    const double n_on = static_cast<double>(obs->n_obs);
    const double n_off = static_cast<double>(obs->n_bg);
    for (double alpha_off : {partners.hi, partners.lo}) {
      CurvePoint p;
      if (alpha_off < 0.0) {
        alpha_off = 0.0;
        p.clamped.alpha_off = true;
      }
      const double a = alpha_on + alpha_off * obs->tau;
      const double ratio = s / alpha_on;
      const double b = NonNegativeRoot(a, -(n_on + n_off - ratio * a),
                                       -ratio * n_off, &p.clamped.b);
      p.nuis.b_prime = b;
      p.nuis.alpha_on = alpha_on;
      p.nuis.alpha_off = alpha_off;
      const double d_on = alpha_on - 1.0;
      const double d_off = alpha_off - 1.0;
      p.kernel = PoissonKernel(obs->n_obs, alpha_on * b + s) +
                 PoissonKernel(obs->n_bg, alpha_off * obs->tau * b) -
                 (d_on * d_on + d_off * d_off) / var2;
      if (p.kernel > best.kernel) best = p;
    }
    return best;
  }
};

// Conditional maximizer over s_sim' >= 0 of the flux likelihood given the
// background part a = alpha_on b of the on-zone mean.
double FluxSimProfile(std::int64_t n, double a, double f,
                      const FluxCalibration& calib, bool* clamped) {
  const double k = f / calib.f_sim;
  if (k == 0.0) return calib.s_sim;
  const double var = calib.sigma_sim * calib.sigma_sim;
  // (s' - s_sim)(a + k s') + k var (a + k s') - k var n = 0
  const double qa = k;
  const double qb = a - k * calib.s_sim + k * k * var;
  const double qc = a * (k * var - calib.s_sim) - k * var * static_cast<double>(n);
  return NonNegativeRoot(qa, qb, qc, clamped);
}

// Curve for the flux on/off likelihood at flux f, parametrized by alpha_off.
struct FluxOnOffSysCurve {
  const OnOffObservation* obs;
  const FluxCalibration* calib;
  double f;

  CurvePoint operator()(double alpha_off) const {
    CurvePoint best;
    const double var = obs->sigma * obs->sigma;
    const double var_sim = calib->sigma_sim * calib->sigma_sim;
    const double n_off = static_cast<double>(obs->n_bg);
    ClampFlags base;
    double b = (n_off / alpha_off - (alpha_off - 1.0) / var) / obs->tau;
    if (b < 0.0) {
      b = 0.0;
      base.b = true;
    }
    const auto partners = IdentityPartner(alpha_off);
    if (partners.count == 0) return best;
    for (double alpha_on : {partners.hi, partners.lo}) {
      CurvePoint p;
      p.clamped = base;
      if (alpha_on < 0.0) {
        alpha_on = 0.0;
        p.clamped.alpha_on = true;
      }
      const double a = alpha_on * b;
      const double s_sim =
          FluxSimProfile(obs->n_obs, a, f, *calib, &p.clamped.s_sim);
      p.nuis.b_prime = b;
      p.nuis.alpha_on = alpha_on;
      p.nuis.alpha_off = alpha_off;
      p.nuis.s_sim_prime = s_sim;
      const double d_on = alpha_on - 1.0;
      const double d_off = alpha_off - 1.0;
      const double d_sim = s_sim - calib->s_sim;
      p.kernel = PoissonKernel(obs->n_obs, a + f * s_sim / calib->f_sim) +
                 PoissonKernel(obs->n_bg, alpha_off * obs->tau * b) -
                 (d_on * d_on + d_off * d_off) / (2.0 * var) -
                 d_sim * d_sim / (2.0 * var_sim);
      if (p.kernel > best.kernel) best = p;
    }
    return best;
  }
};

// Along the flux curve three of the four stationarity conditions hold by
// construction; locate the root of the alpha_on condition directly, which
// pins the optimum far more tightly than comparing likelihood values.
CurvePoint PolishFluxCurve(const FluxOnOffSysCurve& eval, double lo, double hi,
                           const CurvePoint& current) {
  auto residual = [&](double alpha_off) {
    const CurvePoint p = eval(alpha_off);
    if (p.clamped.any() || !std::isfinite(p.kernel)) return std::nan("");
    return FluxOnOffSysGradient(*eval.obs, p.nuis, eval.f, *eval.calib)[2];
  };
  double a = lo;
  double b = hi;
  double ra = residual(a);
  double rb = residual(b);
  if (!std::isfinite(ra) || !std::isfinite(rb) || ra * rb > 0.0) {
    return current;
  }
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a));
       ++it) {
    const double m = 0.5 * (a + b);
    const double rm = residual(m);
    if (!std::isfinite(rm)) return current;
    if (rm == 0.0) {
      a = b = m;
      break;
    }
    if ((rm > 0.0) == (ra > 0.0)) {
      a = m;
      ra = rm;
    } else {
      b = m;
    }
  }
  return eval(0.5 * (a + b));
}

}  // namespace

ProfileSolution ProfileBKnownBkg(const CountingObservation& obs, double s,
                                 const KnownBackgroundModel& model) {
  obs.Validate();
  model.Validate();
  if (!(model.sigma_b > 0.0)) {
    throw std::domain_error("ProfileBKnownBkg: sigma_b must be positive");
  }
  const double var = model.sigma_b * model.sigma_b;
  const double n = static_cast<double>(obs.n_obs);
  // b'^2 + (sigma^2 + s - b) b' - (sigma^2 (n - s) + b s) = 0
  const auto roots = SolveQuadratic(1.0, var + s - model.b,
                                    -(var * (n - s) + model.b * s));
  ProfileSolution out;
  out.nuisance.b_prime = 0.0;
  out.log_like = LogKnownBkgSys(obs, out.nuisance, s, model);
  out.clamped.b = true;
  for (double r : roots.values()) {
    if (r < 0.0 || s + r < 0.0) continue;
    NuisanceState cand;
    cand.b_prime = r;
    const double ll = LogKnownBkgSys(obs, cand, s, model);
    if (ll > out.log_like || (r == 0.0 && ll == out.log_like)) {
      out.nuisance = cand;
      out.log_like = ll;
      out.clamped.b = false;
    }
  }
  out.scan_points = roots.count + 1;
  return out;
}

ProfileSolution ProfileBOnOff(const OnOffObservation& obs, double s) {
  obs.Validate();
  const double t1 = 1.0 + obs.tau;
  const double n_on = static_cast<double>(obs.n_obs);
  const double n_off = static_cast<double>(obs.n_bg);
  ProfileSolution out;
  out.nuisance.b_prime =
      NonNegativeRoot(t1, -(n_on + n_off - s * t1), -n_off * s, &out.clamped.b);
  out.log_like = LogOnOff(obs, s, out.nuisance.b_prime);
  out.scan_points = 1;
  return out;
}

ProfileSolution ProfileOnOffSys(const OnOffObservation& obs, double s,
                                const ScanSettings& settings) {
  obs.Validate();
  if (!(obs.sigma > 0.0)) {
    throw std::domain_error("ProfileOnOffSys: sigma must be positive");
  }
  if (!(s >= 0.0)) throw std::domain_error("ProfileOnOffSys: negative signal");
  const OnOffSysCurve curve{&obs, s};
  ProfileSolution out = ScanCurve(obs.sigma, settings, curve);
  out.log_like = LogOnOffSys(obs, out.nuisance, s, out.nuisance.b_prime);
  return out;
}

ProfileSolution ProfileFluxKnownBkg(const CountingObservation& obs, double f,
                                    const KnownBackgroundModel& model,
                                    const FluxCalibration& calib) {
  obs.Validate();
  model.Validate();
  calib.Validate();
  if (!(model.sigma_b > 0.0) || !(calib.sigma_sim > 0.0)) {
    throw std::domain_error(
        "ProfileFluxKnownBkg: sigma_b and sigma_sim must be positive");
  }
  if (!(f >= 0.0)) throw std::domain_error("ProfileFluxKnownBkg: negative flux");
  const double k = f / calib.f_sim;
  const double var_b = model.sigma_b * model.sigma_b;
  const double var_sim = calib.sigma_sim * calib.sigma_sim;
  const double n = static_cast<double>(obs.n_obs);

  struct Candidate {
    double b_prime;
    double s_sim;
    ClampFlags clamped;
  };
  std::vector<Candidate> candidates;

  // Interior: both stationarity conditions share (n / mu - 1), which makes
  // s_sim' linear in b': s_sim' = s_sim + c (b' - b).
  const double c = k * var_sim / var_b;
  const double m0 = k * (calib.s_sim - c * model.b);
  const double m1 = 1.0 + k * c;
  const auto interior = SolveQuadratic(
      m1, m1 * (var_b - model.b) + m0, m0 * (var_b - model.b) - n * var_b);
  for (double bp : interior.values()) {
    const double sp = calib.s_sim + c * (bp - model.b);
    if (bp >= 0.0 && sp >= 0.0 && m0 + m1 * bp > 0.0) {
      candidates.push_back({bp, sp, {}});
    }
  }
  // b' = 0 with s_sim' profiled.
  {
    Candidate cand{0.0, 0.0, {}};
    cand.clamped.b = true;
    cand.s_sim = FluxSimProfile(obs.n_obs, 0.0, f, calib, &cand.clamped.s_sim);
    candidates.push_back(cand);
  }
  // s_sim' = 0 with b' profiled.
  {
    Candidate cand{0.0, 0.0, {}};
    cand.clamped.s_sim = true;
    cand.b_prime =
        NonNegativeRoot(1.0, var_b - model.b, -var_b * n, &cand.clamped.b);
    candidates.push_back(cand);
  }
  candidates.push_back({0.0, 0.0, {true, false, false, true}});

  ProfileSolution out;
  for (const auto& cand : candidates) {
    NuisanceState nuis;
    nuis.b_prime = cand.b_prime;
    nuis.s_sim_prime = cand.s_sim;
    const double ll = LogFluxKnownBkg(obs, nuis, f, model, calib);
    if (ll > out.log_like) {
      out.log_like = ll;
      out.nuisance = nuis;
      out.clamped = cand.clamped;
    }
  }
  out.scan_points = static_cast<int>(candidates.size());
  return out;
}

ProfileSolution ProfileFluxOnOffSys(const OnOffObservation& obs, double f,
                                    const FluxCalibration& calib,
                                    const ScanSettings& settings) {
  obs.Validate();
  calib.Validate();
  if (!(obs.sigma > 0.0) || !(calib.sigma_sim > 0.0)) {
    throw std::domain_error(
        "ProfileFluxOnOffSys: sigma and sigma_sim must be positive");
  }
  if (!(f >= 0.0)) throw std::domain_error("ProfileFluxOnOffSys: negative flux");
  const FluxOnOffSysCurve curve{&obs, &calib, f};
  ProfileSolution out =
      ScanCurve<FluxOnOffSysCurve>(obs.sigma, settings, curve, &PolishFluxCurve);
  out.log_like =
      LogFluxOnOffSys(obs, out.nuisance, f, out.nuisance.b_prime, calib);
  return out;
}

double AlphaIdentityResidual(const NuisanceState& nuis) {
  return nuis.alpha_on * (1.0 - nuis.alpha_on) +
         nuis.alpha_off * (1.0 - nuis.alpha_off);
}

std::array<double, 4> FluxOnOffSysGradient(const OnOffObservation& obs,
                                           const NuisanceState& nuis, double f,
                                           const FluxCalibration& calib) {
  const double b = nuis.b_prime;
  const double k = f / calib.f_sim;
  const double mu_on = nuis.alpha_on * b + k * nuis.s_sim_prime;
  const double mu_off = nuis.alpha_off * obs.tau * b;
  const double r_on = static_cast<double>(obs.n_obs) / mu_on - 1.0;
  const double r_off = static_cast<double>(obs.n_bg) / mu_off - 1.0;
  const double var = obs.sigma * obs.sigma;
  const double var_sim = calib.sigma_sim * calib.sigma_sim;
  return {
      r_on * k - (nuis.s_sim_prime - calib.s_sim) / var_sim,
      r_on * nuis.alpha_on + r_off * obs.tau * nuis.alpha_off,
      r_on * b - (nuis.alpha_on - 1.0) / var,
      r_off * obs.tau * b - (nuis.alpha_off - 1.0) / var,
  };
}

}  // namespace onoff
