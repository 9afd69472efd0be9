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

#include "onoff/bayes.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "onoff/errors.h"
#include "onoff/parallel.h"

namespace onoff {
namespace {

constexpr double kTailMassLimit = 1e-4;

struct ProfilerCounters {
  std::atomic<int> boundary{0};
  std::atomic<int> widened{0};

  void Record(const ProfileSolution& p) {
    if (p.at_scan_boundary) ++boundary;
    if (p.widened) ++widened;
  }
  void Apply(IntervalResult& r) const {
    r.diagnostics.profiler_boundary_points = boundary.load();
    r.diagnostics.profiler_widened_points = widened.load();
    if (boundary.load() > 0) r.diagnostics.Flag(kFlagProfilerBoundary);
  }
};

bool TailIsHeavy(const IntervalResult& r) {
  return r.diagnostics.HasFlag(kFlagTailMass) ||
         r.diagnostics.HasFlag(kFlagTopCellMass);
}

IntervalResult IntervalOnGrid(const LogLikelihoodInSignal& loglike,
                              const ScanGrid& grid, double cl, unsigned threads,
                              bool check_tail);

// `bounded` treats the grid range as the prior support: nothing lies beyond
// it, so the grid is never extended and the tail is not checked.
IntervalResult RunOnGrid(const LogLikelihoodInSignal& loglike,
                         const ScanGrid& grid, double cl,
                         const BayesOptions& opts, Method method,
                         bool bounded = false) {
  IntervalResult r = IntervalOnGrid(loglike, grid, cl, opts.threads, !bounded);
  if (!bounded && opts.auto_extend && TailIsHeavy(r)) {
    ScanGrid wider = grid;
    wider.s_max = grid.s_min + 2.0 * (grid.s_max - grid.s_min);
    r = CredibleInterval(loglike, wider, cl, opts.threads);
    r.diagnostics.extended = true;
  }
  r.method = method;
  return r;
}

ScanGrid GridWithPoints(double s_max, std::size_t points) {
  ScanGrid g;
  g.s_min = 0.0;
  g.s_max = s_max;
  g.step = s_max / static_cast<double>(points - 1);
  return g;
}

void CheckLevel(double cl) {
  if (!(cl > 0.0 && cl < 1.0)) {
    throw std::invalid_argument("confidence level must lie in (0, 1)");
  }
}

}  // namespace

void ScanGrid::Validate() const {
  if (!(s_min <= s_max)) throw std::invalid_argument("grid: s_min > s_max");
  if (!(step > 0.0)) throw std::invalid_argument("grid: step must be positive");
  if ((s_max - s_min) / step > 1e7) {
    throw std::invalid_argument("grid: more than 1e7 steps");
  }
}

std::size_t ScanGrid::Points() const {
  return static_cast<std::size_t>(std::floor((s_max - s_min) / step + 1e-9)) +
         1;
}

ScanGrid DefaultSignalGrid(std::int64_t n_obs, double b, std::size_t points) {
  if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
  const double n = static_cast<double>(n_obs);
  const double s_max = n + b + 10.0 * std::sqrt(n + b + 1.0) + 20.0;
  return GridWithPoints(s_max, points);
}

IntervalResult CredibleInterval(const LogLikelihoodInSignal& loglike,
                                const ScanGrid& grid, double cl,
                                unsigned threads) {
  return IntervalOnGrid(loglike, grid, cl, threads, true);
}

namespace {

IntervalResult IntervalOnGrid(const LogLikelihoodInSignal& loglike,
                              const ScanGrid& grid, double cl, unsigned threads,
                              bool check_tail) {
  grid.Validate();
  CheckLevel(cl);
  const std::size_t n = grid.Points();
  std::vector<double> ll(n);
  ParallelFor(n, threads, [&](std::size_t i) { ll[i] = loglike(grid.At(i)); });

  const double peak = *std::max_element(ll.begin(), ll.end());
  if (!std::isfinite(peak)) {
    throw NumericalError("CredibleInterval: log-likelihood not finite anywhere");
  }
  // Cell masses; the two end cells are half-width.
  std::vector<double> mass(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double width =
        (n > 1 && (i == 0 || i + 1 == n)) ? 0.5 * grid.step : grid.step;
    mass[i] = std::exp(ll[i] - peak) * width;
  }
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ll[a] > ll[b];
  });

  const double target = cl * total;
  double acc = 0.0;
  std::size_t lo = n;
  std::size_t hi = 0;
  std::size_t taken = 0;
  for (std::size_t idx : order) {
    acc += mass[idx];
    lo = std::min(lo, idx);
    hi = std::max(hi, idx);
    ++taken;
    if (acc >= target) break;
  }

  IntervalResult r;
  r.cl = cl;
  r.lower = grid.At(lo);
  r.upper = grid.At(hi);
  r.achieved_mass = std::min(1.0, acc / total);
  auto& d = r.diagnostics;
  d.grid_points = n;
  d.grid_step = grid.step;
  d.grid_max = grid.At(n - 1);
  d.top_cell_fraction = mass[n - 1] / total;
  if (n > 1) {
    const double slope = (ll[n - 1] - ll[n - 2]) / grid.step;
    const double density = std::exp(ll[n - 1] - peak);
    d.tail_mass = slope < 0.0 ? density / (-slope) / total
                              : (density > 0.0 ? 1.0 : 0.0);
  }
  if (taken != hi - lo + 1) d.Flag(kFlagNonContiguous);
  if (d.top_cell_fraction > kTailMassLimit) d.Flag(kFlagTopCellMass);
  if (check_tail && d.tail_mass > kTailMassLimit) d.Flag(kFlagTailMass);
  return r;
}

}  // namespace

IntervalResult BayesUpperLimitPoisson(const CountingObservation& obs,
                                      const KnownBackgroundModel& model,
                                      double cl, const BayesOptions& opts) {
  obs.Validate();
  model.Validate();
  const ScanGrid grid =
      opts.grid.value_or(DefaultSignalGrid(obs.n_obs, model.b, opts.grid_points));
  return RunOnGrid(
      [&](double s) { return LogPoissonKnownBkg(obs, s, model); }, grid, cl,
      opts, Method::kBayesPoisson);
}

IntervalResult BayesLimitProfileKnownBkg(const CountingObservation& obs,
                                         const KnownBackgroundModel& model,
                                         double cl, const BayesOptions& opts) {
  obs.Validate();
  model.Validate();
  if (model.sigma_b == 0.0) {
    IntervalResult r = BayesUpperLimitPoisson(obs, model, cl, opts);
    r.method = Method::kBayesProfile;
    return r;
  }
  const ScanGrid grid = opts.grid.value_or(DefaultSignalGrid(
      obs.n_obs, model.b + 3.0 * model.sigma_b, opts.grid_points));
  return RunOnGrid(
      [&](double s) { return ProfileBKnownBkg(obs, s, model).log_like; }, grid,
      cl, opts, Method::kBayesProfile);
}

IntervalResult BayesLimitOnOff(const OnOffObservation& obs, double cl,
                               const BayesOptions& opts) {
  obs.Validate();
  const ScanGrid grid =
      opts.grid.value_or(
      DefaultSignalGrid(obs.n_obs, obs.BackgroundEstimate(), opts.grid_points));
  return RunOnGrid([&](double s) { return ProfileBOnOff(obs, s).log_like; },
                   grid, cl, opts, Method::kBayesOnOff);
}

IntervalResult BayesLimitOnOffSys(const OnOffObservation& obs, double cl,
                                  const BayesOptions& opts) {
  obs.Validate();
  const ScanGrid grid =
      opts.grid.value_or(
      DefaultSignalGrid(obs.n_obs, obs.BackgroundEstimate(), opts.grid_points));
  ProfilerCounters counters;
  IntervalResult r = RunOnGrid(
      [&](double s) {
        const auto p = ProfileOnOffSys(obs, s, opts.scan);
        counters.Record(p);
        return p.log_like;
      },
      grid, cl, opts, Method::kBayesOnOffSys);
  counters.Apply(r);
  return r;
}

IntervalResult BayesLimitFlux(const CountingObservation& obs,
                              const KnownBackgroundModel& model,
                              const FluxCalibration& calib, double cl,
                              const BayesOptions& opts) {
  obs.Validate();
  model.Validate();
  calib.Validate();
  ScanGrid grid;
  if (opts.grid) {
    grid = *opts.grid;
  } else {
    const ScanGrid counts =
        DefaultSignalGrid(obs.n_obs, model.b + 3.0 * model.sigma_b);
    grid = GridWithPoints(counts.s_max / calib.CountsPerFlux(),
                          opts.grid_points);
  }
  return RunOnGrid(
      [&](double f) {
        return ProfileFluxKnownBkg(obs, f, model, calib).log_like;
      },
      grid, cl, opts, Method::kBayesFluxKnown, /*bounded=*/true);
}

IntervalResult BayesLimitFlux(const OnOffObservation& obs,
                              const FluxCalibration& calib, double cl,
                              const BayesOptions& opts) {
  obs.Validate();
  calib.Validate();
  ScanGrid grid;
  if (opts.grid) {
    grid = *opts.grid;
  } else {
    const ScanGrid counts =
        DefaultSignalGrid(obs.n_obs, obs.BackgroundEstimate());
    grid = GridWithPoints(counts.s_max / calib.CountsPerFlux(),
                          opts.grid_points);
  }
  ProfilerCounters counters;
  IntervalResult r = RunOnGrid(
      [&](double f) {
        const auto p = ProfileFluxOnOffSys(obs, f, calib, opts.scan);
        counters.Record(p);
        return p.log_like;
      },
      grid, cl, opts, Method::kBayesFluxOnOff, /*bounded=*/true);
  counters.Apply(r);
  return r;
}

IntervalResult Chi2ApproxLimit(const CountingObservation& obs,
                               const KnownBackgroundModel& model, double cl) {
  obs.Validate();
  model.Validate();
  CheckLevel(cl);
  if (!(model.sigma_b > 0.0)) {
    throw std::domain_error("Chi2ApproxLimit: sigma_b must be positive");
  }
  const double n = static_cast<double>(obs.n_obs);
  const double threshold = ChiSquare1Quantile(cl);
  // The unconstrained maximum is s = n - b with b' = b.
  const double s_hat = std::max(0.0, n - model.b);
  const double ll_hat = ProfileBKnownBkg(obs, s_hat, model).log_like;
  auto excess = [&](double s) {
    return -2.0 * (ProfileBKnownBkg(obs, s, model).log_like - ll_hat) -
           threshold;
  };
  boost::math::tools::eps_tolerance<double> tol(48);

  auto solve = [&](double a, double b) {
    std::uintmax_t iterations = 200;
    const auto root =
        boost::math::tools::toms748_solve(excess, a, b, tol, iterations);
    return 0.5 * (root.first + root.second);
  };

  const double width = std::max(1.0, std::sqrt(n + model.sigma_b * model.sigma_b + 1.0));
  double step = width;
  double hi = s_hat + step;
  int guard = 0;
  while (excess(hi) < 0.0) {
    step *= 2.0;
    hi = s_hat + step;
    if (++guard > 60) {
      throw NumericalError("Chi2ApproxLimit: cannot bracket the upper crossing");
    }
  }

  IntervalResult r;
  r.method = Method::kChi2Profile;
  r.cl = cl;
  r.upper = solve(s_hat, hi);
  r.lower = (s_hat > 0.0 && excess(0.0) > 0.0) ? solve(0.0, s_hat) : 0.0;
  return r;
}

}  // namespace onoff
