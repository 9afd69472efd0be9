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

#ifndef ONOFF_NUMERICS_H_
#define ONOFF_NUMERICS_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace onoff {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ln(n!) for n >= 0. Table lookup below 256, Stirling series above; relative
// error below 1e-15 over the whole range. Reentrant.
double LogFactorial(std::int64_t n);

// ln Gaussian(x | mean, sigma). sigma must be positive.
double LogGaussian(double x, double mean, double sigma);

// Real roots of a*x^2 + b*x + c = 0, computed without cancellation between -b
// and the square root of the discriminant. Roots are returned in ascending
// order. A vanishing leading coefficient degrades to the linear case.
struct QuadraticRoots {
  int count = 0;
  double lo = 0.0;
  double hi = 0.0;

  std::vector<double> values() const;
};
QuadraticRoots SolveQuadratic(double a, double b, double c);

// Golden-section search for the maximum of a unimodal function on [lo, hi].
struct ScalarMaximum {
  double x = 0.0;
  double value = kNegInf;
  int evaluations = 0;
};
ScalarMaximum GoldenSectionMaximize(const std::function<double(double)>& f,
                                    double lo, double hi, double x_tolerance);

// Adaptive Gauss-Kronrod (7/15) integration of f over [lo, hi].
struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
};
QuadratureResult IntegrateAdaptive(const std::function<double(double)>& f,
                                   double lo, double hi, double relative_tolerance);

// Standard normal CDF and the chi-square(1 dof) quantile.
double StandardNormalCdf(double x);
double ChiSquare1Quantile(double p);

}  // namespace onoff

#endif  // ONOFF_NUMERICS_H_
