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

#include "onoff/numerics.h"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace onoff {
namespace {

constexpr std::int64_t kTableSize = 256;

const std::array<double, kTableSize>& LogFactorialTable() {
  static const std::array<double, kTableSize> table = [] {
    std::array<double, kTableSize> t{};
    // Filled once under the static-initialization lock, so the non-reentrant
    // std::lgamma is never called concurrently.
    for (std::int64_t k = 0; k < kTableSize; ++k) {
      t[k] = std::lgamma(static_cast<double>(k) + 1.0);
    }
    return t;
  }();
  return table;
}

}  // namespace

double LogFactorial(std::int64_t n) {
  if (n < 0) throw std::domain_error("LogFactorial: negative argument");
  if (n < kTableSize) return LogFactorialTable()[n];
  const double x = static_cast<double>(n);
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 / 12.0 -
             inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
  return x * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi * x) +
         series;
}

double LogGaussian(double x, double mean, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("LogGaussian: sigma must be positive");
  }
  const double z = (x - mean) / sigma;
  return -0.5 * z * z - std::log(sigma) -
         0.5 * std::log(2.0 * std::numbers::pi);
}

std::vector<double> QuadraticRoots::values() const {
  if (count == 0) return {};
  if (count == 1) return {lo};
  return {lo, hi};
}

QuadraticRoots SolveQuadratic(double a, double b, double c) {
  QuadraticRoots r;
  if (a == 0.0) {
    if (b == 0.0) return r;
    r.count = 1;
    r.lo = r.hi = -c / b;
    return r;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return r;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  double x1;
  double x2;
  if (q == 0.0) {
    // b == 0 and c == 0: double root at zero.
    x1 = x2 = 0.0;
  } else {
    x1 = q / a;
    x2 = c / q;
  }
  r.count = (disc == 0.0) ? 1 : 2;
  r.lo = std::min(x1, x2);
  r.hi = std::max(x1, x2);
  if (r.count == 1) r.lo = r.hi = x1;
  return r;
}

ScalarMaximum GoldenSectionMaximize(const std::function<double(double)>& f,
                                    double lo, double hi, double x_tolerance) {
  constexpr double kInvPhi = 0.6180339887498949;
  ScalarMaximum best;
  auto consider = [&](double x, double v) {
    ++best.evaluations;
    if (v > best.value || (v == best.value && x < best.x)) {
      best.value = v;
      best.x = x;
    }
  };
  if (!(hi > lo)) {
    consider(lo, f(lo));
    return best;
  }
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  consider(c, fc);
  consider(d, fd);
  while (b - a > x_tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
  }
  // Endpoints matter when the maximum sits on the boundary of the bracket.
  consider(lo, f(lo));
  consider(hi, f(hi));
  return best;
}

QuadratureResult IntegrateAdaptive(const std::function<double(double)>& f,
                                   double lo, double hi,
                                   double relative_tolerance) {
  QuadratureResult out;
  if (!(hi > lo)) return out;
  double error = 0.0;
  double l1 = 0.0;
  constexpr unsigned kMaxDepth = 20;
  out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, lo, hi, kMaxDepth, relative_tolerance, &error, &l1);
  out.error_estimate = error;
  out.converged = error <= std::max(relative_tolerance * l1, 1e-300);
  return out;
}

double StandardNormalCdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double ChiSquare1Quantile(double p) {
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(1.0),
                               p);
}

}  // namespace onoff
