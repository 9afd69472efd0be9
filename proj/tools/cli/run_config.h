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


// Run configuration for the onoff tool. Flags arrive as text and are
// converted here so that one pass can report every invalid field.

#ifndef ONOFF_TOOLS_RUN_CONFIG_H_
#define ONOFF_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "onoff/interval.h"
#include "onoff/significance.h"
#include "onoff/toymc.h"

namespace onoff::cli {

enum class Command { kLimit, kSignificance, kScan, kToys, kBelt };
enum class Format { kTable, kCsv, kJson };
enum class Study { kSignificance, kCoverage };

// Flag values exactly as given on the command line or in a config file.
struct RawOptions {
  std::string command;
  std::vector<std::string> methods;
  std::optional<std::string> n_obs, n_bg, tau, sigma_rel, b, sigma_b;
  std::optional<std::string> f_sim, s_sim, sigma_sim;
  std::optional<std::string> cl;
  std::optional<std::string> s_min, s_max, s_step, grid_points, n_max;
  std::optional<std::string> n_from, n_to;
  std::optional<std::string> trials, seed, s_true, b_true;
  std::optional<std::string> study, boundary;
  std::optional<std::string> threads;
  std::optional<std::string> input, output, format;
};

struct GridOverride {
  std::optional<double> s_min;
  std::optional<double> s_max;
  std::optional<double> step;
  std::optional<std::int64_t> points;

  bool any() const { return s_min || s_max || step || points; }
};

struct RunConfig {
  Command command = Command::kLimit;
  std::vector<Method> methods;  // interval methods (limit, scan, belt, coverage)
  SignificanceMethod significance_method = SignificanceMethod::kLima;
  std::optional<std::int64_t> n_obs;
  std::optional<std::int64_t> n_bg;
  std::optional<double> tau;
  double sigma_rel = 0.0;
  std::optional<double> b;
  double sigma_b = 0.0;
  std::optional<double> f_sim;
  std::optional<double> s_sim;
  std::optional<double> sigma_sim;
  double cl = 0.9;
  GridOverride grid;
  std::int64_t n_max = 0;
  std::int64_t n_from = 0;
  std::int64_t n_to = 0;
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  double s_true = 0.0;
  std::optional<double> b_true;
  Study study = Study::kSignificance;
  BoundaryMode boundary = BoundaryMode::kUnclamped;
  unsigned threads = 1;
  std::optional<std::string> input;
  std::optional<std::string> output;
  Format format = Format::kTable;
};

struct Resolution {
  RunConfig config;
  std::vector<std::string> errors;  // empty when the config is valid
};

// Default thread count: ONOFF_THREADS if set to a positive integer, else the
// hardware concurrency.
unsigned DefaultThreads();

Resolution Resolve(const RawOptions& raw);

// Every setting that affects results, defaults included, in a fixed order.
// The thread count is left out: it never changes the output.
std::vector<std::pair<std::string, std::string>> Describe(const RunConfig& cfg);

std::string_view ToString(Command c);
std::string_view ToString(Format f);
std::string_view ToString(Study s);

// Shortest text that reads back to the same double.
std::string FormatNumber(double v);

}  // namespace onoff::cli

#endif  // ONOFF_TOOLS_RUN_CONFIG_H_
