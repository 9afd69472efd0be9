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

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <gtest/gtest.h>

namespace onoff {
namespace {

ToyConfig Null(std::int64_t trials, double sigma = 0.03) {
  ToyConfig cfg;
  cfg.s_true = 0.0;
  cfg.b_true = 90.0;
  cfg.tau = 3.0;
  cfg.sigma = sigma;
  cfg.n_trials = trials;
  cfg.seed = 12345;
  return cfg;
}

TEST(GenerateOnOff, PoissonMeansWithoutSystematics) {
  const ToyConfig cfg = Null(100000, 0.0);
  double on = 0.0, off = 0.0;
  for (std::int64_t t = 0; t < cfg.n_trials; ++t) {
    const auto d = GenerateOnOff(cfg, t);
    EXPECT_EQ(d.alpha_on, 1.0);
    on += static_cast<double>(d.obs.n_obs);
    off += static_cast<double>(d.obs.n_bg);
  }
  const double n = static_cast<double>(cfg.n_trials);
  EXPECT_NEAR(on / n, 90.0, 5.0 * std::sqrt(90.0 / n));
  EXPECT_NEAR(off / n, 270.0, 5.0 * std::sqrt(270.0 / n));
}

TEST(GenerateOnOff, EfficiencySpreadInflatesVariance) {
  const ToyConfig cfg = Null(1000000);
  double sum = 0.0, sum2 = 0.0;
  std::int64_t redraws = 0;
  for (std::int64_t t = 0; t < cfg.n_trials; ++t) {
    const auto d = GenerateOnOff(cfg, t);
    const double x = static_cast<double>(d.obs.n_obs);
    sum += x;
    sum2 += x * x;
    redraws += d.redraws;
  }
  const double n = static_cast<double>(cfg.n_trials);
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  const double want = 90.0 + (0.03 * 90.0) * (0.03 * 90.0);
  EXPECT_NEAR(var / want, 1.0, 0.05);
  EXPECT_EQ(redraws, 0);
}

TEST(GenerateOnOff, DeterministicPerTrial) {
  const ToyConfig cfg = Null(100);
  const auto a = GenerateOnOff(cfg, 37);
  const auto b = GenerateOnOff(cfg, 37);
  EXPECT_EQ(a.obs.n_obs, b.obs.n_obs);
  EXPECT_EQ(a.obs.n_bg, b.obs.n_bg);
  EXPECT_EQ(a.alpha_on, b.alpha_on);
  ToyConfig other = cfg;
  other.seed = 12346;
  const auto c = GenerateOnOff(other, 37);
  EXPECT_FALSE(c.alpha_on == a.alpha_on && c.obs.n_obs == a.obs.n_obs);
  EXPECT_THROW(GenerateOnOff(cfg, 100), std::out_of_range);
  EXPECT_THROW(GenerateOnOff(cfg, -1), std::out_of_range);
}

TEST(GenerateOnOff, WideSpreadNeedsRedraws) {
  ToyConfig cfg = Null(5000, 0.5);
  std::int64_t redraws = 0;
  for (std::int64_t t = 0; t < cfg.n_trials; ++t) {
    const auto d = GenerateOnOff(cfg, t);
    ASSERT_GE(d.alpha_on, 0.0);
    ASSERT_GE(d.alpha_off, 0.0);
    redraws += d.redraws;
  }
  EXPECT_GT(redraws, 0);
}

TEST(ToyConfig, Validation) {
  ToyConfig cfg;
  cfg.n_trials = 0;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg = ToyConfig{};
  cfg.tau = 0.0;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
}

TEST(SignificanceStudy, HistogramHoldsEveryTrial) {
  const auto s = SignificanceStudy(Null(3000), SignificanceMethod::kOnOffSys);
  const auto in_range =
      std::accumulate(s.histogram.begin(), s.histogram.end(), std::int64_t{0});
  EXPECT_EQ(in_range + s.underflow + s.overflow, 3000);
  EXPECT_EQ(static_cast<int>(s.histogram.size()), kHistogramBins);
  EXPECT_EQ(s.redraws, 0);
  EXPECT_EQ(s.profiler_boundary, 0);
  EXPECT_DOUBLE_EQ(s.BinLow(0), -6.0);
  EXPECT_NEAR(s.BinLow(kHistogramBins), 6.0, 1e-12);
}

TEST(SignificanceStudy, IndependentOfThreadCount) {
  StudyOptions one, many;
  many.threads = 4;
  const auto a = SignificanceStudy(Null(2000), SignificanceMethod::kOnOffSys, one);
  const auto b = SignificanceStudy(Null(2000), SignificanceMethod::kOnOffSys, many);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.stddev, b.stddev);
  EXPECT_EQ(a.ks_distance, b.ks_distance);
  EXPECT_EQ(a.histogram, b.histogram);
}

TEST(SignificanceStudy, SingleTrial) {
  const auto s = SignificanceStudy(Null(1), SignificanceMethod::kLima);
  EXPECT_EQ(s.n_trials, 1);
  EXPECT_EQ(s.stddev, 0.0);
  EXPECT_EQ(s.mean, LimaSignificance(GenerateOnOff(Null(1), 0).obs).s_value);
}

TEST(SignificanceStudy, NullDistributionIsRoughlyStandardNormal) {
  const auto s = SignificanceStudy(Null(20000), SignificanceMethod::kOnOffSys);
  EXPECT_LT(std::abs(s.mean), 0.05);
  EXPECT_GT(s.stddev, 0.9);
  EXPECT_LT(s.stddev, 1.1);
  EXPECT_LT(s.ks_distance, 0.03);
}

TEST(SignificanceStudy, ClampedModeHasNoNegativeValues) {
  StudyOptions opts;
  opts.boundary = BoundaryMode::kClamped;
  const auto s = SignificanceStudy(Null(2000), SignificanceMethod::kLima, opts);
  std::int64_t negative = s.underflow;
  for (int i = 0; i < kHistogramBins; ++i) {
    if (s.BinLow(i + 1) <= 0.0) negative += s.histogram[i];
  }
  EXPECT_EQ(negative, 0);
}

TEST(SignificanceStudy, RequiresSigmaForSystematics) {
  EXPECT_THROW(SignificanceStudy(Null(10, 0.0), SignificanceMethod::kOnOffSys),
               std::invalid_argument);
  EXPECT_EQ(ParseSignificanceMethod("onoff-sys"), SignificanceMethod::kOnOffSys);
  EXPECT_FALSE(ParseSignificanceMethod("bogus").has_value());
}

TEST(Wilson, ScoreIntervalValues) {
  const auto [lo, hi] = WilsonInterval(90, 100);
  EXPECT_NEAR(lo, 0.865927, 1e-6);
  EXPECT_NEAR(hi, 0.926153, 1e-6);
  const auto [lo1, hi1] = WilsonInterval(10, 10);
  EXPECT_LT(lo1, 1.0);
  EXPECT_NEAR(hi1, 1.0, 1e-12);
  EXPECT_THROW(WilsonInterval(0, 0), std::invalid_argument);
}

TEST(CoverageStudy, FcOverCoversAtSmallBackground) {
  ToyConfig cfg = Null(4000, 0.0);
  cfg.s_true = 2.0;
  cfg.b_true = 3.0;
  const auto c = CoverageStudy(cfg, Method::kFc, 0.9);
  const double sigma = std::sqrt(0.9 * 0.1 / 4000.0);
  EXPECT_GE(c.coverage, 0.9 - 3.0 * sigma);
  EXPECT_LE(c.wilson_low, c.coverage);
  EXPECT_GE(c.wilson_high, c.coverage);
}

TEST(CoverageStudy, NearCertainLevelCoversEverything) {
  ToyConfig cfg = Null(200, 0.0);
  cfg.s_true = 1.0;
  cfg.b_true = 3.0;
  EXPECT_EQ(CoverageStudy(cfg, Method::kFc, 0.999999).coverage, 1.0);
}

TEST(CoverageStudy, BayesOnOffSysAtNull) {
  ToyConfig cfg = Null(1000);
  StudyOptions opts;
  opts.bayes_grid_points = 500;
  const auto c = CoverageStudy(cfg, Method::kBayesOnOffSys, 0.9, opts);
  EXPECT_GE(c.coverage, 0.85);
  EXPECT_LE(c.coverage, 1.0);
  EXPECT_EQ(c.redraws, 0);
}

TEST(CoverageStudy, ThreadCountDoesNotChangeCoverage) {
  ToyConfig cfg = Null(300);
  cfg.s_true = 10.0;
  StudyOptions one, many;
  one.bayes_grid_points = many.bayes_grid_points = 400;
  many.threads = 3;
  EXPECT_EQ(CoverageStudy(cfg, Method::kBayesOnOff, 0.9, one).covered,
            CoverageStudy(cfg, Method::kBayesOnOff, 0.9, many).covered);
}

TEST(CoverageStudy, RejectsUnsupportedMethods) {
  EXPECT_THROW(CoverageStudy(Null(10), Method::kChi2Profile, 0.9),
               std::invalid_argument);
  EXPECT_THROW(CoverageStudy(Null(10), Method::kFc, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace onoff
