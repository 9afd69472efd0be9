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


#include "app.h"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.h"
#include "onoff/errors.h"
#include "run_config.h"

namespace onoff::cli {
namespace {

void AddOptions(CLI::App& app, RawOptions& raw) {
  const char* model = "Model";
  app.add_option("--method", raw.methods,
                 "Interval method (fc, fc-marginal, bayes-poisson, bayes-profile, "
                 "chi2-profile, bayes-onoff, bayes-onoff-sys, bayes-flux-known, "
                 "bayes-flux-onoff) or significance method (lima, onoff-sys); "
                 "scan accepts a comma-separated list")
      ->delimiter(',');
  app.add_option("--n-obs", raw.n_obs, "Observed on-zone count")->group(model);
  app.add_option("--n-bg", raw.n_bg, "Observed off-zone count")->group(model);
  app.add_option("--tau", raw.tau, "Off/on exposure ratio")->group(model);
  app.add_option("--sigma-rel,--sigma", raw.sigma_rel,
                 "Relative zone efficiency uncertainty, as a fraction")
      ->group(model);
  app.add_option("--b", raw.b, "Known background mean, counts")->group(model);
  app.add_option("--sigma-b", raw.sigma_b,
                 "Absolute background uncertainty, counts")
      ->group(model);
  app.add_option("--f-sim", raw.f_sim, "Simulated reference flux")->group(model);
  app.add_option("--s-sim", raw.s_sim, "Signal counts at the reference flux")
      ->group(model);
  app.add_option("--sigma-sim", raw.sigma_sim,
                 "Absolute uncertainty of --s-sim, counts")
      ->group(model);

  const char* grid = "Interval";
  app.add_option("--cl", raw.cl, "Confidence level (default 0.9)")->group(grid);
  app.add_option("--s-min", raw.s_min, "Signal grid start")->group(grid);
  app.add_option("--s-max", raw.s_max, "Signal grid end")->group(grid);
  app.add_option("--s-step", raw.s_step, "Signal grid step")->group(grid);
  app.add_option("--grid-points", raw.grid_points, "Signal grid points")->group(grid);
  app.add_option("--n-max", raw.n_max, "Largest count in a belt")->group(grid);
  app.add_option("--boundary", raw.boundary,
                 "Significance free fit: unclamped (default) or clamped")
      ->group(grid);

  const char* batch = "Scans and toys";
  app.add_option("--n-from", raw.n_from, "First n_obs of a scan")->group(batch);
  app.add_option("--n-to", raw.n_to, "Last n_obs of a scan")->group(batch);
  app.add_option("--study", raw.study, "Toy study: significance or coverage")
      ->group(batch);
  app.add_option("--trials", raw.trials, "Number of toy experiments")->group(batch);
  app.add_option("--seed", raw.seed, "Toy generator seed")->group(batch);
  app.add_option("--s-true", raw.s_true, "True signal of the toys")->group(batch);
  app.add_option("--b-true", raw.b_true, "True background of the toys")->group(batch);
  app.add_option("--threads", raw.threads,
                 "Worker threads (default: ONOFF_THREADS or all cores)")
      ->group(batch);

  const char* io = "Input and output";
  app.add_option("--input", raw.input, "Belt table to import (belt)")->group(io);
  app.add_option("--output,-o", raw.output, "Output file (default stdout)")->group(io);
  app.add_option("--format", raw.format, "table, csv or json")->group(io);
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Confidence intervals and significance for Poisson counts",
               "onoff"};
  app.set_config("--config", "", "Read flags from a TOML or INI file");
  app.require_subcommand(1, 1);
  RawOptions raw;
  AddOptions(app, raw);
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"limit", "Interval for one observation"},
      {"significance", "Likelihood-ratio significance of an on/off observation"},
      {"scan", "Intervals over a range of n_obs"},
      {"toys", "Toy Monte Carlo significance or coverage study"},
      {"belt", "Build, export or import a confidence belt"}};
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  raw.command = app.get_subcommands().front()->get_name();

  const Resolution res = Resolve(raw);
  if (!res.errors.empty()) {
    err << "invalid configuration (" << res.errors.size() << " problem"
        << (res.errors.size() == 1 ? "" : "s") << "):\n";
    for (const auto& e : res.errors) err << "  " << e << '\n';
    return kExitValidation;
  }

  CommandResult result;
  try {
    result = RunCommand(res.config);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::domain_error& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }

  if (res.config.output) {
    std::ofstream file(*res.config.output, std::ios::binary);
    if (!file) {
      err << "cannot open --output " << *res.config.output << '\n';
      return kExitValidation;
    }
    Render(result.report, res.config.format, file);
  } else {
    Render(result.report, res.config.format, out);
  }
  for (const auto& m : result.messages) err << m << '\n';
  return result.exit_code;
}

}  // namespace onoff::cli
