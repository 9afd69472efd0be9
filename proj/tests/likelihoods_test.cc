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

#include <cmath>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "oracles.h"

namespace onoff {
namespace {

using oracle::LogGauss;

double PoissonTerm(std::int64_t n, double mu) {
  return static_cast<double>(n) * std::log(mu) - mu -
         oracle::LogFactorialSum(n);
}

TEST(LogPoisson, Conventions) {
  EXPECT_EQ(LogPoissonKnownBkg({0}, 0.0, {0.0, 0.0}), 0.0);
  EXPECT_EQ(LogPoisson(3, 0.0), -INFINITY);
  EXPECT_NEAR(LogPoissonKnownBkg({0}, 2.3026, {0.0, 0.0}), -2.3026, 1e-15);
  EXPECT_THROW(LogPoisson(1, -0.5), std::domain_error);
  EXPECT_THROW(LogPoissonKnownBkg({2}, -3.0, {1.0, 0.0}), std::domain_error);
}

TEST(LogPoisson, DirectFactorialOracle) {
  EXPECT_NEAR(LogPoissonKnownBkg({90}, 0.0, {90.0, 0.0}), PoissonTerm(90, 90.0),
              1e-10);
}

TEST(LogPoisson, NormalizesOverCounts) {
  for (double mu : {0.3, 3.0, 90.0, 360.0}) {
    const auto n_top = static_cast<std::int64_t>(
        std::ceil(mu + 12.0 * std::sqrt(mu) + 30.0));
    double sum = 0.0;
    for (std::int64_t n = 0; n <= n_top; ++n) sum += std::exp(LogPoisson(n, mu));
    EXPECT_NEAR(sum, 1.0, 1e-6) << mu;
  }
}

TEST(LogPoisson, UniqueMaximumInSignal) {
  for (std::int64_t n : {0, 50, 90, 120}) {
    const double b = 90.0;
    const double want = std::max(0.0, static_cast<double>(n) - b);
    double best_s = -1.0, best = -INFINITY;
    for (int i = 0; i <= 20000; ++i) {
      const double s = 0.01 * i;
      const double v = LogPoissonKnownBkg({n}, s, {b, 0.0});
      if (v > best) {
        best = v;
        best_s = s;
      }
    }
    EXPECT_NEAR(best_s, want, 0.011) << n;
  }
}

TEST(LogKnownBkgSys, GaussianAtMean) {
  const KnownBackgroundModel m{90.0, 6.0};
  NuisanceState nuis;
  nuis.b_prime = 90.0;
  EXPECT_NEAR(LogKnownBkgSys({90}, nuis, 0.0, m),
              LogPoissonKnownBkg({90}, 0.0, {90.0, 0.0}) -
                  std::log(std::sqrt(2.0 * oracle::kPi) * 6.0),
              1e-12);
}

TEST(LogKnownBkgSys, TermWiseOracle) {
  NuisanceState nuis;
  nuis.b_prime = 96.0;
  EXPECT_NEAR(LogKnownBkgSys({100}, nuis, 10.0, {90.0, 6.0}),
              PoissonTerm(100, 106.0) + LogGauss(96.0, 90.0, 6.0), 1e-12);
}

TEST(LogKnownBkgSys, ZeroSigmaIsRejected) {
  NuisanceState nuis;
  EXPECT_THROW(LogKnownBkgSys({0}, nuis, 0.0, {0.0, 0.0}), std::domain_error);
}

TEST(LogMarginal, DeltaFunctionLimit) {
  EXPECT_NEAR(LogMarginalKnownBkg({0}, 0.0, {90.0, 1e-6}), -90.0, 1e-5);
  EXPECT_EQ(LogMarginalKnownBkg({7}, 2.0, {5.0, 0.0}),
            LogPoissonKnownBkg({7}, 2.0, {5.0, 0.0}));
}

TEST(LogMarginal, FineTrapezoidOracle) {
  struct Case {
    std::int64_t n;
    double s, b, sigma;
  };
  for (const Case& c : {Case{100, 5.0, 90.0, 6.0}, Case{60, 0.0, 90.0, 6.0},
                        Case{0, 1.0, 3.0, 1.0}, Case{12, 0.0, 3.0, 1.5}}) {
    const double hi = c.b + 10.0 * c.sigma;
    auto f = [&](double bp) {
      return std::exp(PoissonTerm(c.n, c.s + bp) + LogGauss(bp, c.b, c.sigma));
    };
    const double want = oracle::Trapezoid(f, 0.0, hi, 1000000);
    const double got = std::exp(LogMarginalKnownBkg({c.n}, c.s, {c.b, c.sigma}));
    EXPECT_NEAR(got / want, 1.0, 1e-8) << c.n << " " << c.b;
  }
}

TEST(LogMarginal, NormalizesOverCounts) {
  // Mass lost below b' = 0 is not renormalized, so use sigma_b well inside b.
  const KnownBackgroundModel m{90.0, 6.0};
  double sum = 0.0;
  for (std::int64_t n = 0; n <= 90 + 12 * 10 + 30; ++n) {
    sum += std::exp(LogMarginalKnownBkg({n}, 5.0, m));
  }
  EXPECT_NEAR(sum, 1.0, 1e-6);
}

TEST(LogMarginal, ReportsWindowAndError) {
  const auto e = EvaluateMarginalKnownBkg({100}, 5.0, {90.0, 6.0});
  EXPECT_TRUE(e.converged);
  EXPECT_LT(e.relative_error, 1e-9);
  EXPECT_LT(e.lower, 90.0);
  EXPECT_GT(e.upper, 90.0);
}

TEST(LogOnOff, TermWiseAndTrivialCases) {
  EXPECT_EQ(LogOnOff({0, 0, 3.0, 0.0}, 0.0, 0.0), 0.0);
  EXPECT_NEAR(LogOnOff({100, 270, 3.0, 0.0}, 10.0, 90.0),
              PoissonTerm(100, 100.0) + PoissonTerm(270, 270.0), 1e-12);
  EXPECT_THROW(LogOnOff({1, 1, 3.0, 0.0}, 0.0, -1.0), std::domain_error);
}

TEST(LogOnOff, AdditivityOverRandomInputs) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> count(0, 500);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const OnOffObservation obs{count(rng), count(rng), 1.0 + 4.0 * u(rng), 0.0};
    const double s = 100.0 * u(rng), b = 1.0 + 200.0 * u(rng);
    EXPECT_NEAR(LogOnOff(obs, s, b),
                LogPoisson(obs.n_obs, s + b) + LogPoisson(obs.n_bg, obs.tau * b),
                1e-12 * std::max(1.0, std::abs(LogOnOff(obs, s, b))));
  }
}

TEST(LogOnOffSys, GaussiansAtMean) {
  const OnOffObservation obs{120, 270, 3.0, 0.03};
  NuisanceState nuis;
  const double c = -std::log(std::sqrt(2.0 * oracle::kPi) * 0.03);
  EXPECT_NEAR(LogOnOffSys(obs, nuis, 30.0, 90.0),
              LogOnOff(obs, 30.0, 90.0) + 2.0 * c, 1e-12);
}

TEST(LogOnOffSys, FourTermOracle) {
  const OnOffObservation obs{360, 270, 3.0, 0.03};
  NuisanceState nuis;
  const double want = PoissonTerm(360, 90.0 + 270.0) + LogGauss(1.0, 1.0, 0.03) +
                      PoissonTerm(270, 270.0) + LogGauss(1.0, 1.0, 0.03);
  // Both sides sum terms of size ln 360!, so compare at that scale.
  EXPECT_NEAR(LogOnOffSys(obs, nuis, 270.0, 90.0), want,
              1e-14 * (oracle::LogFactorialSum(360) + oracle::LogFactorialSum(270)));
}

TEST(LogOnOffSys, GaussianSymmetry) {
  const OnOffObservation obs{100, 280, 3.0, 0.05};
  NuisanceState up, down;
  up.alpha_on = 1.04;
  down.alpha_on = 0.96;
  const double gap = LogOnOffSys(obs, up, 5.0, 90.0) -
                     LogOnOffSys(obs, down, 5.0, 90.0);
  EXPECT_NEAR(gap,
              LogPoisson(100, 1.04 * 90.0 + 5.0) -
                  LogPoisson(100, 0.96 * 90.0 + 5.0),
              1e-12);
}

TEST(LogOnOffSys, RejectsBadInputs) {
  NuisanceState nuis;
  EXPECT_THROW(LogOnOffSys({1, 1, 3.0, 0.0}, nuis, 0.0, 1.0), std::domain_error);
  nuis.alpha_on = -1.0;
  EXPECT_THROW(LogOnOffSys({1, 1, 3.0, 0.1}, nuis, 0.0, 1.0), std::domain_error);
}

TEST(LogFluxKnownBkg, ZeroFluxAndTermWiseOracle) {
  const FluxCalibration calib{1.2, 5.4, 1.08};
  const KnownBackgroundModel m{90.0, 6.0};
  NuisanceState nuis;
  nuis.b_prime = 90.0;
  nuis.s_sim_prime = 5.4;
  EXPECT_NEAR(LogFluxKnownBkg({100}, nuis, 0.0, m, calib),
              LogPoissonKnownBkg({100}, 0.0, {90.0, 0.0}) +
                  LogGauss(90.0, 90.0, 6.0) + LogGauss(5.4, 5.4, 1.08),
              1e-12);

  nuis.b_prime = 92.0;
  nuis.s_sim_prime = 5.0;
  const double want = PoissonTerm(100, 1.0 * 5.0 / 1.2 + 92.0) +
                      LogGauss(92.0, 90.0, 6.0) + LogGauss(5.0, 5.4, 1.08);
  EXPECT_NEAR(LogFluxKnownBkg({100}, nuis, 1.0, m, calib), want, 1e-12);
}

TEST(LogFluxKnownBkg, SignalCountSubstitution) {
  const FluxCalibration calib{1.2, 5.4, 1e-9};
  const KnownBackgroundModel m{90.0, 6.0};
  NuisanceState nuis;
  nuis.b_prime = 93.0;
  nuis.s_sim_prime = calib.s_sim;
  const double constant = LogGauss(calib.s_sim, calib.s_sim, calib.sigma_sim);
  for (double f : {0.0, 0.7, 2.5, 11.0}) {
    EXPECT_NEAR(LogFluxKnownBkg({100}, nuis, f, m, calib) - constant,
                LogKnownBkgSys({100}, nuis, f * 5.4 / 1.2, m), 1e-9)
        << f;
  }
}

TEST(LogFluxOnOffSys, ZeroFluxAndRandomOracle) {
  const FluxCalibration calib{1.2, 5.4, 1.08};
  const OnOffObservation base{360, 270, 3.0, 0.03};
  NuisanceState nuis;
  nuis.s_sim_prime = 5.4;
  const double c = -std::log(std::sqrt(2.0 * oracle::kPi));
  EXPECT_NEAR(LogFluxOnOffSys(base, nuis, 0.0, 90.0, calib),
              LogOnOff(base, 0.0, 90.0) + 3.0 * c - 2.0 * std::log(0.03) -
                  std::log(1.08),
              1e-12);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> count(0, 500);
  for (int i = 0; i < 100; ++i) {
    const OnOffObservation obs{count(rng), count(rng), 1.0 + 4.0 * u(rng),
                               0.01 + 0.09 * u(rng)};
    const FluxCalibration cal{0.5 + u(rng), 1.0 + 10.0 * u(rng),
                              0.1 + u(rng)};
    NuisanceState x;
    x.alpha_on = 0.8 + 0.4 * u(rng);
    x.alpha_off = 0.8 + 0.4 * u(rng);
    x.s_sim_prime = cal.s_sim * (0.5 + u(rng));
    const double f = 50.0 * u(rng), b = 1.0 + 150.0 * u(rng);
    const double want =
        PoissonTerm(obs.n_obs, x.alpha_on * b + f * x.s_sim_prime / cal.f_sim) +
        LogGauss(x.alpha_on, 1.0, obs.sigma) +
        PoissonTerm(obs.n_bg, x.alpha_off * obs.tau * b) +
        LogGauss(x.alpha_off, 1.0, obs.sigma) +
        LogGauss(x.s_sim_prime, cal.s_sim, cal.sigma_sim);
    const double got = LogFluxOnOffSys(obs, x, f, b, cal);
    EXPECT_NEAR(got, want, 1e-12 * std::max(1.0, std::abs(want))) << i;
  }
}

TEST(LogFluxOnOffSys, ReducesToCountLikelihood) {
  const FluxCalibration calib{1.2, 5.4, 1e-9};
  const OnOffObservation obs{360, 270, 3.0, 0.03};
  NuisanceState nuis;
  nuis.alpha_on = 1.01;
  nuis.alpha_off = 0.99;
  nuis.s_sim_prime = calib.s_sim;
  const double constant = LogGauss(calib.s_sim, calib.s_sim, calib.sigma_sim);
  for (double f : {0.0, 12.0, 60.0}) {
    EXPECT_NEAR(LogFluxOnOffSys(obs, nuis, f, 90.0, calib) - constant,
                LogOnOffSys(obs, nuis, f * 5.4 / 1.2, 90.0), 1e-9);
  }
}

TEST(Likelihoods, FiniteForPositiveMeansAndDeterministic) {
  const OnOffObservation obs{500, 1, 5.0, 0.1};
  NuisanceState nuis;
  nuis.alpha_on = 0.7;
  nuis.alpha_off = 1.3;
  const double a = LogOnOffSys(obs, nuis, 0.01, 0.01);
  const double b = LogOnOffSys(obs, nuis, 0.01, 0.01);
  EXPECT_TRUE(std::isfinite(a));
  EXPECT_EQ(a, b);
  const double m1 = LogMarginalKnownBkg({40}, 2.5, {30.0, 4.0});
  const double m2 = LogMarginalKnownBkg({40}, 2.5, {30.0, 4.0});
  EXPECT_EQ(m1, m2);
}

}  // namespace
}  // namespace onoff
