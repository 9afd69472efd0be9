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


#include "onoff/toymc.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>

#include "onoff/bayes.h"
#include "onoff/neyman.h"
#include "onoff/numerics.h"
#include "onoff/parallel.h"
#include "onoff/rng.h"

namespace onoff {
namespace {

enum Stream : std::uint32_t { kAlphaOn = 0, kAlphaOff = 1, kCountOn = 2, kCountOff = 3 };

double TruncatedEfficiency(PhiloxStream& rng, double sigma, int* redraws) {
  if (sigma == 0.0) return 1.0;
  std::normal_distribution<double> gauss(1.0, sigma);
  for (;;) {
    const double a = gauss(rng);
    if (a >= 0.0) return a;
    ++*redraws;
  }
}

std::int64_t PoissonDraw(PhiloxStream& rng, double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::int64_t> pois(mean);
  return pois(rng);
}

std::vector<ToyDraw> DrawAll(const ToyConfig& cfg, unsigned threads) {
  std::vector<ToyDraw> draws(static_cast<std::size_t>(cfg.n_trials));
  ParallelFor(draws.size(), threads, [&](std::size_t i) {
    draws[i] = GenerateOnOff(cfg, static_cast<std::int64_t>(i));
  });
  return draws;
}

std::int64_t TotalRedraws(const std::vector<ToyDraw>& draws) {
  std::int64_t total = 0;
  for (const auto& d : draws) total += d.redraws;
  return total;
}

BayesOptions CoverageBayesOptions(const StudyOptions& opts) {
  BayesOptions bo;
  bo.threads = 1;
  if (opts.bayes_grid_points > 1) bo.grid_points = opts.bayes_grid_points;
  return bo;
}

}  // namespace

void ToyConfig::Validate() const {
  if (!(s_true >= 0.0)) throw std::invalid_argument("s_true must be non-negative");
  if (!(b_true >= 0.0)) throw std::invalid_argument("b_true must be non-negative");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  if (n_trials < 1) throw std::invalid_argument("n_trials must be at least 1");
}

ToyDraw GenerateOnOff(const ToyConfig& cfg, std::int64_t trial) {
  if (trial < 0 || trial >= cfg.n_trials) {
    throw std::out_of_range("GenerateOnOff: trial index out of range");
  }
  const auto t = static_cast<std::uint64_t>(trial);
  ToyDraw d;
  PhiloxStream on_eff(cfg.seed, t, kAlphaOn);
  PhiloxStream off_eff(cfg.seed, t, kAlphaOff);
  d.alpha_on = TruncatedEfficiency(on_eff, cfg.sigma, &d.redraws);
  d.alpha_off = TruncatedEfficiency(off_eff, cfg.sigma, &d.redraws);
  PhiloxStream on_count(cfg.seed, t, kCountOn);
  PhiloxStream off_count(cfg.seed, t, kCountOff);
  d.obs.n_obs = PoissonDraw(on_count, d.alpha_on * cfg.b_true + cfg.s_true);
  d.obs.n_bg = PoissonDraw(off_count, d.alpha_off * cfg.tau * cfg.b_true);
  d.obs.tau = cfg.tau;
  d.obs.sigma = cfg.sigma;
  return d;
}

std::string_view ToString(SignificanceMethod m) {
  return m == SignificanceMethod::kLima ? "lima" : "onoff-sys";
}

std::optional<SignificanceMethod> ParseSignificanceMethod(std::string_view tag) {
  if (tag == "lima") return SignificanceMethod::kLima;
  if (tag == "onoff-sys") return SignificanceMethod::kOnOffSys;
  return std::nullopt;
}

double SignificanceSummary::BinLow(int i) const {
  return kHistogramLow + (kHistogramHigh - kHistogramLow) * i / kHistogramBins;
}

SignificanceSummary SignificanceStudy(const ToyConfig& cfg,
                                      SignificanceMethod method,
                                      const StudyOptions& opts) {
  cfg.Validate();
  if (method == SignificanceMethod::kOnOffSys && !(cfg.sigma > 0.0)) {
    throw std::invalid_argument("onoff-sys significance needs sigma > 0");
  }
  const auto draws = DrawAll(cfg, opts.threads);
  std::vector<double> values(draws.size());
  std::vector<char> boundary(draws.size(), 0);
  ParallelFor(draws.size(), opts.threads, [&](std::size_t i) {
    const auto r = method == SignificanceMethod::kLima
                       ? LimaSignificance(draws[i].obs, opts.boundary)
                       : OnOffSysSignificance(draws[i].obs, opts.boundary);
    values[i] = r.s_value;
    boundary[i] = r.null_fit.at_scan_boundary ? 1 : 0;
  });

  SignificanceSummary out;
  out.method = method;
  out.n_trials = cfg.n_trials;
  out.histogram.assign(kHistogramBins, 0);
  out.redraws = TotalRedraws(draws);
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    out.profiler_boundary += boundary[i];
    const double v = values[i];
    if (v < kHistogramLow) {
      ++out.underflow;
    } else if (v >= kHistogramHigh) {
      ++out.overflow;
    } else {
      const auto bin = static_cast<int>((v - kHistogramLow) /
                                        (kHistogramHigh - kHistogramLow) *
                                        kHistogramBins);
      ++out.histogram[std::min(bin, kHistogramBins - 1)];
    }
  }
  out.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;

  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = StandardNormalCdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f,
                  f - static_cast<double>(i) / n});
  }
  out.ks_distance = d;
  return out;
}

std::pair<double, double> WilsonInterval(std::int64_t k, std::int64_t n,
                                         double z) {
  if (n <= 0) throw std::invalid_argument("WilsonInterval: n must be positive");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half =
      z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

CoverageSummary CoverageStudy(const ToyConfig& cfg, Method method, double cl,
                              const StudyOptions& opts) {
  cfg.Validate();
  if (!(cl > 0.0 && cl < 1.0)) {
    throw std::invalid_argument("confidence level must lie in (0, 1)");
  }
  if (method != Method::kFc && method != Method::kBayesPoisson &&
      method != Method::kBayesOnOff && method != Method::kBayesOnOffSys) {
    throw std::invalid_argument("coverage study does not support method " +
                                std::string(ToString(method)));
  }
  if (method == Method::kBayesOnOffSys && !(cfg.sigma > 0.0)) {
    throw std::invalid_argument("bayes-onoff-sys coverage needs sigma > 0");
  }
  const auto draws = DrawAll(cfg, opts.threads);

  // One belt serves every trial: its grid is sized for the largest count.
  std::shared_ptr<const ConfidenceBelt> belt;
  if (method == Method::kFc) {
    std::int64_t n_cap = 0;
    for (const auto& d : draws) n_cap = std::max(n_cap, d.obs.n_obs);
    BeltOptions bopts;
    bopts.threads = opts.threads;
    BeltCache cache;
    belt = cache.Get(KnownBackgroundModel{cfg.b_true, 0.0},
                     BeltLikelihood::kExact, cl,
                     DefaultBeltGrid(n_cap, cfg.b_true), bopts);
  }

  std::vector<char> hit(draws.size(), 0);
  ParallelFor(draws.size(), opts.threads, [&](std::size_t i) {
    const auto& obs = draws[i].obs;
    IntervalResult r;
    switch (method) {
      case Method::kFc:
        r = FcInterval(obs.n_obs, *belt);
        break;
      case Method::kBayesPoisson:
        r = BayesUpperLimitPoisson(
            CountingObservation{obs.n_obs}, KnownBackgroundModel{cfg.b_true, 0.0},
            cl, CoverageBayesOptions(opts));
        break;
      case Method::kBayesOnOff:
        r = BayesLimitOnOff(obs, cl, CoverageBayesOptions(opts));
        break;
      default:
        r = BayesLimitOnOffSys(obs, cl, CoverageBayesOptions(opts));
        break;
    }
    hit[i] = (r.lower <= cfg.s_true && cfg.s_true <= r.upper) ? 1 : 0;
  });

  CoverageSummary out;
  out.method = method;
  out.cl = cl;
  out.n_trials = cfg.n_trials;
  for (char h : hit) out.covered += h;
  out.coverage = static_cast<double>(out.covered) / static_cast<double>(out.n_trials);
  std::tie(out.wilson_low, out.wilson_high) = WilsonInterval(out.covered, out.n_trials);
  out.redraws = TotalRedraws(draws);
  return out;
}

}  // namespace onoff
