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


#include "commands.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "onoff/bayes.h"
#include "onoff/errors.h"
#include "onoff/neyman.h"
#include "onoff/parallel.h"
#include "onoff/significance.h"
#include "onoff/toymc.h"

namespace onoff::cli {
namespace {

std::string Num(double v) { return FormatNumber(v); }

std::string Bool(bool v) { return v ? "true" : "false"; }

std::string Join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

KnownBackgroundModel KnownModel(const RunConfig& c) {
  return KnownBackgroundModel{c.b.value_or(0.0), c.sigma_b};
}

OnOffObservation OnOff(const RunConfig& c, std::int64_t n_obs, double sigma) {
  return OnOffObservation{n_obs, c.n_bg.value_or(0), c.tau.value_or(1.0), sigma};
}

FluxCalibration Calibration(const RunConfig& c) {
  return FluxCalibration{c.f_sim.value_or(1.0), c.s_sim.value_or(1.0),
                         c.sigma_sim.value_or(0.0)};
}

// Explicit signal grid when --s-max is given, else the engine default.
std::optional<ScanGrid> BayesGrid(const RunConfig& c) {
  if (!c.grid.s_max) return std::nullopt;
  ScanGrid g;
  g.s_min = c.grid.s_min.value_or(0.0);
  g.s_max = *c.grid.s_max;
  const auto points = c.grid.points.value_or(
      static_cast<std::int64_t>(kDefaultGridPoints));
  g.step = c.grid.step.value_or((g.s_max - g.s_min) /
                                static_cast<double>(points - 1));
  return g;
}

ScanGrid BeltGrid(const RunConfig& c, std::int64_t n_for_default, double b) {
  ScanGrid g = DefaultBeltGrid(n_for_default, b);
  if (c.grid.s_min) g.s_min = *c.grid.s_min;
  if (c.grid.s_max) g.s_max = *c.grid.s_max;
  if (c.grid.step) {
    g.step = *c.grid.step;
  } else if (c.grid.points) {
    g.step = (g.s_max - g.s_min) / static_cast<double>(*c.grid.points - 1);
  }
  return g;
}

BeltOptions BeltOpts(const RunConfig& c, unsigned threads) {
  BeltOptions o;
  o.n_max = c.n_max;
  o.threads = threads;
  return o;
}

BayesOptions BayesOpts(const RunConfig& c, unsigned threads) {
  BayesOptions o;
  o.grid = BayesGrid(c);
  if (c.grid.points && !c.grid.s_max) {
    o.grid_points = static_cast<std::size_t>(*c.grid.points);
  }
  o.threads = threads;
  return o;
}

// `n_for_grid` sizes the belt grid so that one belt serves a whole scan.
IntervalResult ComputeInterval(Method m, const RunConfig& c, std::int64_t n_obs,
                               std::int64_t n_for_grid, BeltCache* cache,
                               unsigned threads) {
  const CountingObservation counting{n_obs};
  switch (m) {
    case Method::kFc:
      return FcExactInterval(n_obs, c.b.value_or(0.0), c.cl,
                             BeltGrid(c, n_for_grid, c.b.value_or(0.0)), cache,
                             BeltOpts(c, threads));
    case Method::kFcMarginal:
      return FcMarginalInterval(n_obs, KnownModel(c), c.cl,
                                BeltGrid(c, n_for_grid, c.b.value_or(0.0)),
                                cache, BeltOpts(c, threads));
    case Method::kBayesPoisson:
      return BayesUpperLimitPoisson(
          counting, KnownBackgroundModel{c.b.value_or(0.0), 0.0}, c.cl,
          BayesOpts(c, threads));
    case Method::kBayesProfile:
      return BayesLimitProfileKnownBkg(counting, KnownModel(c), c.cl,
                                       BayesOpts(c, threads));
    case Method::kChi2Profile:
      return Chi2ApproxLimit(counting, KnownModel(c), c.cl);
    case Method::kBayesOnOff:
      return BayesLimitOnOff(OnOff(c, n_obs, 0.0), c.cl, BayesOpts(c, threads));
    case Method::kBayesOnOffSys:
      return BayesLimitOnOffSys(OnOff(c, n_obs, c.sigma_rel), c.cl,
                                BayesOpts(c, threads));
    case Method::kBayesFluxKnown:
      return BayesLimitFlux(counting, KnownModel(c), Calibration(c), c.cl,
                            BayesOpts(c, threads));
    case Method::kBayesFluxOnOff:
      return BayesLimitFlux(OnOff(c, n_obs, c.sigma_rel), Calibration(c), c.cl,
                            BayesOpts(c, threads));
  }
  throw std::invalid_argument("unsupported method");
}

std::string OptionalNum(const std::optional<double>& v) {
  return v ? Num(*v) : "none";
}

CommandResult RunLimit(const RunConfig& c) {
  CommandResult out;
  const Method m = c.methods.front();
  const IntervalResult r =
      ComputeInterval(m, c, *c.n_obs, *c.n_obs, nullptr, c.threads);
  const auto& d = r.diagnostics;
  auto& s = out.report.summary;
  s = {{"method", std::string(ToString(r.method))},
       {"cl", Num(r.cl)},
       {"lower", Num(r.lower)},
       {"upper", Num(r.upper)},
       {"achieved_mass", OptionalNum(r.achieved_mass)},
       {"grid_points", std::to_string(d.grid_points)},
       {"grid_step", Num(d.grid_step)},
       {"grid_max", Num(d.grid_max)},
       {"grid_extended", Bool(d.extended)},
       {"tail_mass", Num(d.tail_mass)},
       {"top_cell_fraction", Num(d.top_cell_fraction)},
       {"profiler_boundary_points", std::to_string(d.profiler_boundary_points)},
       {"profiler_widened_points", std::to_string(d.profiler_widened_points)},
       {"construction_upper", OptionalNum(d.construction_upper)},
       {"flags", d.flags.empty() ? "none" : Join(d.flags, ';')}};
  if (!r.ok()) {
    out.exit_code = kExitNumerical;
    out.messages.push_back("interval flagged: " + Join(d.flags, ' '));
  }
  return out;
}

CommandResult RunScan(const RunConfig& c) {
  CommandResult out;
  BeltCache cache;
  // Build each belt once, with the full thread budget, before the rows run.
  for (Method m : c.methods) {
    if (m != Method::kFc && m != Method::kFcMarginal) continue;
    const auto tag = m == Method::kFc ? BeltLikelihood::kExact
                                      : BeltLikelihood::kMarginal;
    const KnownBackgroundModel model{c.b.value_or(0.0),
                                     m == Method::kFc ? 0.0 : c.sigma_b};
    try {
      cache.Get(model, tag, c.cl, BeltGrid(c, c.n_to, model.b),
                BeltOpts(c, c.threads));
    } catch (const std::exception&) {
      // Reported per row below.
    }
  }
  struct Row {
    std::int64_t n;
    Method method;
  };
  std::vector<Row> rows;
  for (std::int64_t n = c.n_from; n <= c.n_to; ++n) {
    for (Method m : c.methods) rows.push_back({n, m});
  }
  std::vector<std::vector<std::string>> cells(rows.size());
  ParallelFor(rows.size(), c.threads, [&](std::size_t i) {
    const Row& row = rows[i];
    std::vector<std::string> line = {std::to_string(row.n),
                                     std::string(ToString(row.method))};
    try {
      const IntervalResult r =
          ComputeInterval(row.method, c, row.n, c.n_to, &cache, 1);
      line.push_back(Num(r.lower));
      line.push_back(Num(r.upper));
      line.push_back(OptionalNum(r.achieved_mass));
      line.push_back(r.diagnostics.flags.empty() ? "none"
                                                 : Join(r.diagnostics.flags, ';'));
      line.push_back("none");
    } catch (const std::exception& e) {
      line.insert(line.end(), {"nan", "nan", "none", "none", e.what()});
    }
    cells[i] = std::move(line);
  });
  std::int64_t failed = 0;
  for (const auto& line : cells) failed += line.back() != "none";
  out.report.columns = {"n_obs", "method", "lower", "upper", "achieved_mass",
                        "flags", "error"};
  out.report.rows = std::move(cells);
  out.report.summary = {{"rows", std::to_string(rows.size())},
                        {"failed_rows", std::to_string(failed)}};
  if (failed > 0) {
    out.exit_code = kExitNumerical;
    out.messages.push_back(std::to_string(failed) + " scan rows failed");
  }
  return out;
}

void AddFit(KeyValues& s, const std::string& prefix, const ProfileSolution& p) {
  s.emplace_back(prefix + "_log_like", Num(p.log_like));
  s.emplace_back(prefix + "_b", Num(p.nuisance.b_prime));
  s.emplace_back(prefix + "_alpha_on", Num(p.nuisance.alpha_on));
  s.emplace_back(prefix + "_alpha_off", Num(p.nuisance.alpha_off));
}

CommandResult RunSignificance(const RunConfig& c) {
  CommandResult out;
  const OnOffObservation obs = OnOff(c, *c.n_obs, c.sigma_rel);
  const SignificanceResult r =
      c.significance_method == SignificanceMethod::kLima
          ? LimaSignificance(obs, c.boundary)
          : OnOffSysSignificance(obs, c.boundary);
  auto& s = out.report.summary;
  s = {{"method", std::string(ToString(c.significance_method))},
       {"boundary", std::string(ToString(c.boundary))},
       {"s_value", Num(r.s_value)},
       {"lambda", Num(r.lambda)},
       {"log_lambda", Num(r.log_lambda)},
       {"s_hat", Num(r.s_hat)}};
  AddFit(s, "null", r.null_fit);
  AddFit(s, "free", r.free_fit);
  s.emplace_back("null_scan_boundary", Bool(r.null_fit.at_scan_boundary));
  if (r.null_fit.at_scan_boundary) {
    out.exit_code = kExitNumerical;
    out.messages.push_back("null fit ended on the efficiency scan boundary");
  }
  return out;
}

ToyConfig Toys(const RunConfig& c) {
  ToyConfig t;
  t.s_true = c.s_true;
  t.b_true = c.b_true.value_or(0.0);
  t.tau = c.tau.value_or(1.0);
  t.sigma = c.sigma_rel;
  t.n_trials = c.trials;
  t.seed = c.seed;
  return t;
}

CommandResult RunToys(const RunConfig& c) {
  CommandResult out;
  StudyOptions opts;
  opts.threads = c.threads;
  opts.boundary = c.boundary;
  if (c.grid.points) opts.bayes_grid_points = static_cast<std::size_t>(*c.grid.points);
  auto& s = out.report.summary;
  if (c.study == Study::kSignificance) {
    const auto r = SignificanceStudy(Toys(c), c.significance_method, opts);
    s = {{"trials", std::to_string(r.n_trials)},
         {"mean", Num(r.mean)},
         {"stddev", Num(r.stddev)},
         {"ks_distance", Num(r.ks_distance)},
         {"underflow", std::to_string(r.underflow)},
         {"overflow", std::to_string(r.overflow)},
         {"redraws", std::to_string(r.redraws)},
         {"profiler_boundary", std::to_string(r.profiler_boundary)}};
    out.report.columns = {"bin_low", "bin_high", "count"};
    for (int i = 0; i < kHistogramBins; ++i) {
      out.report.rows.push_back({Num(r.BinLow(i)), Num(r.BinLow(i + 1)),
                                 std::to_string(r.histogram[static_cast<std::size_t>(i)])});
    }
  } else {
    const auto r = CoverageStudy(Toys(c), c.methods.front(), c.cl, opts);
    s = {{"method", std::string(ToString(r.method))},
         {"cl", Num(r.cl)},
         {"trials", std::to_string(r.n_trials)},
         {"covered", std::to_string(r.covered)},
         {"coverage", Num(r.coverage)},
         {"wilson_low", Num(r.wilson_low)},
         {"wilson_high", Num(r.wilson_high)},
         {"redraws", std::to_string(r.redraws)}};
  }
  return out;
}

CommandResult RunBelt(const RunConfig& c) {
  CommandResult out;
  ConfidenceBelt belt;
  if (c.input) {
    std::ifstream in(*c.input);
    if (!in) throw std::invalid_argument("cannot open --input " + *c.input);
    belt = ReadBelt(in);
  } else {
    const Method m = c.methods.front();
    const auto tag = m == Method::kFc ? BeltLikelihood::kExact
                                      : BeltLikelihood::kMarginal;
    const KnownBackgroundModel model{*c.b, m == Method::kFc ? 0.0 : c.sigma_b};
    belt = BuildBelt(model, tag, c.cl,
                     BeltGrid(c, c.n_obs.value_or(0), model.b),
                     BeltOpts(c, c.threads));
  }
  auto& s = out.report.summary;
  s = {{"likelihood", std::string(ToString(belt.likelihood))},
       {"rows", std::to_string(belt.rows.size())},
       {"n_max", std::to_string(belt.n_max)},
       {"all_contiguous", Bool(belt.AllContiguous())}};
  const auto violation = belt.FirstMonotonicityViolation();
  s.emplace_back("monotonicity_violation",
                 violation ? Num(belt.rows[*violation].s) : "none");
  if (c.n_obs) {
    const IntervalResult r = FcInterval(*c.n_obs, belt);
    s.emplace_back("n_obs", std::to_string(*c.n_obs));
    s.emplace_back("lower", Num(r.lower));
    s.emplace_back("upper", Num(r.upper));
    s.emplace_back("flags", r.diagnostics.flags.empty()
                                ? "none"
                                : Join(r.diagnostics.flags, ';'));
  }
  out.report.columns = {"s", "n_lo", "n_hi", "mass", "contiguous", "accepted"};
  for (const auto& row : belt.rows) {
    std::vector<std::string> acc;
    for (auto n : row.accepted) acc.push_back(std::to_string(n));
    out.report.rows.push_back({Num(row.s), std::to_string(row.n_lo),
                               std::to_string(row.n_hi), Num(row.mass),
                               row.contiguous ? "1" : "0", Join(acc, ';')});
  }
  std::ostringstream body;
  WriteBelt(body, belt);
  out.report.csv_body = body.str();
  return out;
}

}  // namespace

CommandResult RunCommand(const RunConfig& cfg) {
  CommandResult r;
  switch (cfg.command) {
    case Command::kLimit: r = RunLimit(cfg); break;
    case Command::kSignificance: r = RunSignificance(cfg); break;
    case Command::kScan: r = RunScan(cfg); break;
    case Command::kToys: r = RunToys(cfg); break;
    case Command::kBelt: r = RunBelt(cfg); break;
  }
  r.report.config = Describe(cfg);
  return r;
}

}  // namespace onoff::cli
