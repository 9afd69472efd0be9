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

#ifndef ONOFF_INTERVAL_H_
#define ONOFF_INTERVAL_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace onoff {

enum class Method {
  kFc,              // Feldman-Cousins, exact Poisson with known background
  kFcMarginal,      // Feldman-Cousins on the b'-marginalized likelihood
  kBayesPoisson,    // posterior ~ Poisson(n | s + b)
  kBayesProfile,    // posterior ~ profile over b' of the Gaussian-b likelihood
  kChi2Profile,     // profile likelihood ratio with the chi-square threshold
  kBayesOnOff,      // posterior ~ profile of the two-Poisson likelihood
  kBayesOnOffSys,   // as above with zone-efficiency systematics
  kBayesFluxKnown,  // flux posterior, known background with uncertainty
  kBayesFluxOnOff,  // flux posterior, on/off with zone systematics
};

std::string_view ToString(Method m);
std::optional<Method> ParseMethod(std::string_view tag);
const std::vector<Method>& AllMethods();
bool RequiresOnOff(Method m);
bool RequiresFluxCalibration(Method m);

// Named diagnostic conditions attached to an interval.
inline constexpr std::string_view kFlagTailMass = "tail-mass";
inline constexpr std::string_view kFlagTopCellMass = "top-cell-mass";
inline constexpr std::string_view kFlagNonContiguous = "non-contiguous";
inline constexpr std::string_view kFlagProfilerBoundary = "profiler-boundary";
inline constexpr std::string_view kFlagGridEdge = "grid-edge";

struct IntervalDiagnostics {
  std::size_t grid_points = 0;
  double grid_step = 0.0;
  double grid_max = 0.0;
  double tail_mass = 0.0;          // estimated posterior mass beyond grid_max
  double top_cell_fraction = 0.0;  // posterior mass in the last grid cell
  bool extended = false;           // grid was extended once
  int profiler_boundary_points = 0;
  int profiler_widened_points = 0;
  // Upper end read off the belt before any adjustment, when one was applied.
  std::optional<double> construction_upper;
  std::vector<std::string> flags;

  void Flag(std::string_view name);
  bool HasFlag(std::string_view name) const;
};

struct IntervalResult {
  double lower = 0.0;
  double upper = 0.0;
  double cl = 0.0;
  Method method = Method::kBayesPoisson;
  // Posterior mass enclosed (Bayesian engines) or minimum belt acceptance
  // probability over the signal grid (Neyman belts); empty for the
  // chi-square shortcut.
  std::optional<double> achieved_mass;
  IntervalDiagnostics diagnostics;

  bool ok() const { return diagnostics.flags.empty(); }
};

}  // namespace onoff

#endif  // ONOFF_INTERVAL_H_
