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


// Independent reference implementations used as test oracles. Nothing here
// calls into the library.

#ifndef ONOFF_TESTS_ORACLES_H_
#define ONOFF_TESTS_ORACLES_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace onoff::oracle {

inline constexpr double kPi = 3.14159265358979323846;

// ln n! by summing ln k.
inline double LogFactorialSum(std::int64_t n) {
  double acc = 0.0;
  for (std::int64_t k = 2; k <= n; ++k) acc += std::log(static_cast<double>(k));
  return acc;
}

inline double LogPoisson(std::int64_t n, double mu) {
  if (mu == 0.0) return n == 0 ? 0.0 : -INFINITY;
  return static_cast<double>(n) * std::log(mu) - mu - std::lgamma(n + 1.0);
}

inline double LogGauss(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * kPi);
}

// Plain golden section, no shared code with the library version.
inline double GoldenMax(const std::function<double(double)>& f, double lo,
                        double hi, int iterations = 200) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Coarse-to-fine grid maximization over a box. Each round evaluates a
// `points`^D lattice, recentres on the best point and shrinks the box.
template <std::size_t D>
struct GridMaximum {
  std::array<double, D> x{};
  double value = -INFINITY;
};

template <std::size_t D>
GridMaximum<D> GridRefineMax(
    const std::function<double(const std::array<double, D>&)>& f,
    std::array<double, D> lo, std::array<double, D> hi, int points = 15,
    int rounds = 60, double shrink = 0.6) {
  GridMaximum<D> best;
  std::array<double, D> center{}, half{};
  const std::array<double, D> floor_lo = lo;
  for (std::size_t d = 0; d < D; ++d) {
    center[d] = 0.5 * (lo[d] + hi[d]);
    half[d] = 0.5 * (hi[d] - lo[d]);
  }
  for (int r = 0; r < rounds; ++r) {
    std::array<int, D> idx{};
    std::array<double, D> x{};
    std::array<double, D> round_lo{};
    for (std::size_t d = 0; d < D; ++d)
      round_lo[d] = std::max(floor_lo[d], center[d] - half[d]);
    while (true) {
      for (std::size_t d = 0; d < D; ++d) {
        const double span = center[d] + half[d] - round_lo[d];
        x[d] = round_lo[d] + span * idx[d] / (points - 1);
      }
      const double v = f(x);
      if (v > best.value) {
        best.value = v;
        best.x = x;
      }
      std::size_t d = 0;
      while (d < D && ++idx[d] == points) idx[d++] = 0;
      if (d == D) break;
    }
    center = best.x;
    for (auto& h : half) h *= shrink;
  }
  return best;
}

// Trapezoid rule on a uniform grid.
inline double Trapezoid(const std::function<double(double)>& f, double lo,
                        double hi, std::int64_t intervals) {
  const double h = (hi - lo) / static_cast<double>(intervals);
  double acc = 0.5 * (f(lo) + f(hi));
  for (std::int64_t i = 1; i < intervals; ++i) acc += f(lo + h * i);
  return acc * h;
}

// Exact FC acceptance set for Poisson(n | s + b): rank by likelihood ratio to
// s_hat = max(0, n - b), accept until mass >= cl.
inline std::vector<std::int64_t> FcAcceptance(double s, double b, double cl,
                                              std::int64_t n_max) {
  struct Entry {
    std::int64_t n;
    double rank;
    double p;
  };
  std::vector<Entry> entries;
  for (std::int64_t n = 0; n <= n_max; ++n) {
    const double s_hat = std::max(0.0, static_cast<double>(n) - b);
    const double lp = LogPoisson(n, s + b);
    const double rank = std::exp(lp - LogPoisson(n, s_hat + b));
    entries.push_back({n, rank, std::exp(lp)});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& x, const Entry& y) { return x.rank > y.rank; });
  std::vector<std::int64_t> accepted;
  double mass = 0.0;
  for (const auto& e : entries) {
    if (mass >= cl) break;
    accepted.push_back(e.n);
    mass += e.p;
  }
  std::sort(accepted.begin(), accepted.end());
  return accepted;
}

inline double StdNormalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace onoff::oracle

#endif  // ONOFF_TESTS_ORACLES_H_
