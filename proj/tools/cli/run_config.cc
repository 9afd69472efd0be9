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


#include "run_config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <thread>

#include "onoff/parallel.h"

namespace onoff::cli {
namespace {

class Checker {
 public:
  explicit Checker(std::vector<std::string>* errors) : errors_(errors) {}

  void Fail(const std::string& msg) { errors_->push_back(msg); }
  void Bad(const char* flag, const std::string& msg) {
    bad_.insert(flag);
    Fail(msg);
  }

  std::optional<double> Real(const std::optional<std::string>& text,
                             const char* flag) {
    if (!text) return std::nullopt;
    double v = 0.0;
    const char* end = text->data() + text->size();
    const auto res = std::from_chars(text->data(), end, v);
    if (text->empty() || res.ec != std::errc() || res.ptr != end ||
        !std::isfinite(v)) {
      Bad(flag, std::string(flag) + ": expected a real number, got '" + *text + "'");
      return std::nullopt;
    }
    return v;
  }

  // Counts and other non-negative integers; "3.0" and "-1" are rejected.
  std::optional<std::int64_t> Count(const std::optional<std::string>& text,
                                    const char* flag) {
    if (!text) return std::nullopt;
    std::int64_t v = 0;
    const char* end = text->data() + text->size();
    const auto res = std::from_chars(text->data(), end, v);
    if (text->empty() || res.ec != std::errc() || res.ptr != end || v < 0) {
      Bad(flag, std::string(flag) + ": expected a non-negative integer, got '" +
                    *text + "'");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::uint64_t> Unsigned(const std::optional<std::string>& text,
                                        const char* flag) {
    if (!text) return std::nullopt;
    std::uint64_t v = 0;
    const char* end = text->data() + text->size();
    const auto res = std::from_chars(text->data(), end, v);
    if (text->empty() || res.ec != std::errc() || res.ptr != end) {
      Bad(flag, std::string(flag) + ": expected an unsigned integer, got '" +
                    *text + "'");
      return std::nullopt;
    }
    return v;
  }

  template <typename T>
  void Require(const std::optional<T>& v, const char* flag, const char* why) {
    // A value that failed to parse has been reported already.
    if (!v && !bad_.count(flag)) {
      Fail(std::string("missing ") + flag + " (required " + why + ")");
    }
  }

 private:
  std::vector<std::string>* errors_;
  std::set<std::string> bad_;
};

std::vector<std::string> SplitMethods(const std::vector<std::string>& given) {
  std::vector<std::string> out;
  for (const auto& item : given) {
    std::stringstream in(item);
    std::string tag;
    while (std::getline(in, tag, ',')) {
      if (!tag.empty()) out.push_back(tag);
    }
  }
  return out;
}

bool NeedsKnownBackground(Method m) {
  return !RequiresOnOff(m);
}

// Field requirements of one interval method.
void CheckMethodInputs(Method m, const RunConfig& c, Checker& check) {
  const std::string why = "by method " + std::string(ToString(m));
  if (RequiresOnOff(m)) {
    check.Require(c.n_bg, "--n-bg", why.c_str());
    check.Require(c.tau, "--tau", why.c_str());
  }
  if (NeedsKnownBackground(m)) check.Require(c.b, "--b", why.c_str());
  if ((m == Method::kBayesOnOffSys || m == Method::kBayesFluxOnOff) &&
      !(c.sigma_rel > 0.0)) {
    check.Fail("--sigma-rel must be positive for method " +
               std::string(ToString(m)));
  }
  if ((m == Method::kChi2Profile || m == Method::kBayesFluxKnown) &&
      !(c.sigma_b > 0.0)) {
    check.Fail("--sigma-b must be positive for method " +
               std::string(ToString(m)));
  }
  if (RequiresFluxCalibration(m)) {
    check.Require(c.f_sim, "--f-sim", why.c_str());
    check.Require(c.s_sim, "--s-sim", why.c_str());
    check.Require(c.sigma_sim, "--sigma-sim", why.c_str());
    if (c.sigma_sim && !(*c.sigma_sim > 0.0)) {
      check.Fail("--sigma-sim must be positive for method " +
                 std::string(ToString(m)));
    }
  }
}

void CheckRanges(const RunConfig& c, Checker& check) {
  if (c.tau && !(*c.tau > 0.0)) check.Fail("--tau must be positive");
  if (!(c.sigma_rel >= 0.0)) check.Fail("--sigma-rel must be non-negative");
  if (c.b && !(*c.b >= 0.0)) check.Fail("--b must be non-negative");
  if (!(c.sigma_b >= 0.0)) check.Fail("--sigma-b must be non-negative");
  if (c.f_sim && !(*c.f_sim > 0.0)) check.Fail("--f-sim must be positive");
  if (c.s_sim && !(*c.s_sim > 0.0)) check.Fail("--s-sim must be positive");
  if (c.sigma_sim && !(*c.sigma_sim >= 0.0)) {
    check.Fail("--sigma-sim must be non-negative");
  }
  if (!(c.cl > 0.0 && c.cl < 1.0)) check.Fail("--cl must lie in (0, 1)");
  if (c.grid.s_min && !(*c.grid.s_min >= 0.0)) {
    check.Fail("--s-min must be non-negative");
  }
  if (c.grid.s_min && c.grid.s_max && !(*c.grid.s_max > *c.grid.s_min)) {
    check.Fail("--s-max must exceed --s-min");
  }
  if (c.grid.s_max && !(*c.grid.s_max > 0.0)) check.Fail("--s-max must be positive");
  if (c.grid.step && !(*c.grid.step > 0.0)) check.Fail("--s-step must be positive");
  if (c.grid.points && *c.grid.points < 2) {
    check.Fail("--grid-points must be at least 2");
  }
  if (c.grid.points && c.grid.step) {
    check.Fail("--grid-points and --s-step are mutually exclusive");
  }
  if (!(c.s_true >= 0.0)) check.Fail("--s-true must be non-negative");
  if (c.b_true && !(*c.b_true >= 0.0)) check.Fail("--b-true must be non-negative");
}

}  // namespace

unsigned DefaultThreads() {
  if (const char* env = std::getenv("ONOFF_THREADS")) {
    unsigned v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto res = std::from_chars(env, end, v);
    if (res.ec == std::errc() && res.ptr == end && v > 0) return v;
  }
  return DefaultThreadCount();
}

std::string FormatNumber(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string_view ToString(Command c) {
  switch (c) {
    case Command::kLimit: return "limit";
    case Command::kSignificance: return "significance";
    case Command::kScan: return "scan";
    case Command::kToys: return "toys";
    case Command::kBelt: return "belt";
  }
  return "unknown";
}

std::string_view ToString(Format f) {
  switch (f) {
    case Format::kTable: return "table";
    case Format::kCsv: return "csv";
    case Format::kJson: return "json";
  }
  return "unknown";
}

std::string_view ToString(Study s) {
  return s == Study::kCoverage ? "coverage" : "significance";
}

Resolution Resolve(const RawOptions& raw) {
  Resolution out;
  RunConfig& c = out.config;
  Checker check(&out.errors);

  if (raw.command == "limit") c.command = Command::kLimit;
  else if (raw.command == "significance") c.command = Command::kSignificance;
  else if (raw.command == "scan") c.command = Command::kScan;
  else if (raw.command == "toys") c.command = Command::kToys;
  else if (raw.command == "belt") c.command = Command::kBelt;
  else check.Fail("unknown command '" + raw.command + "'");

  c.n_obs = check.Count(raw.n_obs, "--n-obs");
  c.n_bg = check.Count(raw.n_bg, "--n-bg");
  c.tau = check.Real(raw.tau, "--tau");
  c.sigma_rel = check.Real(raw.sigma_rel, "--sigma-rel").value_or(0.0);
  c.b = check.Real(raw.b, "--b");
  c.sigma_b = check.Real(raw.sigma_b, "--sigma-b").value_or(0.0);
  c.f_sim = check.Real(raw.f_sim, "--f-sim");
  c.s_sim = check.Real(raw.s_sim, "--s-sim");
  c.sigma_sim = check.Real(raw.sigma_sim, "--sigma-sim");
  c.cl = check.Real(raw.cl, "--cl").value_or(0.9);
  c.grid.s_min = check.Real(raw.s_min, "--s-min");
  c.grid.s_max = check.Real(raw.s_max, "--s-max");
  c.grid.step = check.Real(raw.s_step, "--s-step");
  c.grid.points = check.Count(raw.grid_points, "--grid-points");
  c.n_max = check.Count(raw.n_max, "--n-max").value_or(0);
  const auto n_from = check.Count(raw.n_from, "--n-from");
  const auto n_to = check.Count(raw.n_to, "--n-to");
  c.trials = check.Count(raw.trials, "--trials").value_or(1000);
  c.seed = check.Unsigned(raw.seed, "--seed").value_or(1);
  c.s_true = check.Real(raw.s_true, "--s-true").value_or(0.0);
  c.b_true = check.Real(raw.b_true, "--b-true");
  c.input = raw.input;
  c.output = raw.output;
  c.threads = DefaultThreads();
  if (raw.threads) {
    const auto t = check.Count(raw.threads, "--threads");
    if (t && *t > 0) c.threads = static_cast<unsigned>(*t);
    else if (t) check.Fail("--threads must be positive");
  }

  if (raw.format) {
    if (*raw.format == "table") c.format = Format::kTable;
    else if (*raw.format == "csv") c.format = Format::kCsv;
    else if (*raw.format == "json") c.format = Format::kJson;
    else check.Fail("--format must be one of table, csv, json (got '" + *raw.format + "')");
  }
  if (raw.boundary) {
    if (*raw.boundary == "unclamped") c.boundary = BoundaryMode::kUnclamped;
    else if (*raw.boundary == "clamped") c.boundary = BoundaryMode::kClamped;
    else check.Fail("--boundary must be clamped or unclamped (got '" + *raw.boundary + "')");
  }
  if (raw.study) {
    if (*raw.study == "significance") c.study = Study::kSignificance;
    else if (*raw.study == "coverage") c.study = Study::kCoverage;
    else check.Fail("--study must be significance or coverage (got '" + *raw.study + "')");
  }
  CheckRanges(c, check);

  const auto tags = SplitMethods(raw.methods);
  const bool significance_tags =
      c.command == Command::kSignificance ||
      (c.command == Command::kToys && c.study == Study::kSignificance);
  if (significance_tags) {
    if (tags.size() > 1) check.Fail("--method takes a single value for this command");
    if (!tags.empty()) {
      if (auto m = ParseSignificanceMethod(tags.front())) {
        c.significance_method = *m;
      } else {
        check.Fail("unknown significance method '" + tags.front() +
                   "' (expected lima or onoff-sys)");
      }
    }
    if (c.significance_method == SignificanceMethod::kOnOffSys &&
        !(c.sigma_rel > 0.0)) {
      check.Fail("--sigma-rel must be positive for method onoff-sys");
    }
  } else {
    for (const auto& tag : tags) {
      if (auto m = ParseMethod(tag)) {
        c.methods.push_back(*m);
      } else {
        std::string known;
        for (Method m2 : AllMethods()) {
          if (!known.empty()) known += ", ";
          known += ToString(m2);
        }
        check.Fail("unknown method '" + tag + "' (expected one of " + known + ")");
      }
    }
  }

  switch (c.command) {
    case Command::kLimit:
      if (tags.empty()) check.Fail("missing --method (required by limit)");
      if (tags.size() > 1) check.Fail("limit takes a single --method");
      check.Require(c.n_obs, "--n-obs", "by limit");
      for (Method m : c.methods) CheckMethodInputs(m, c, check);
      break;
    case Command::kScan:
      if (tags.empty()) check.Fail("missing --method (required by scan)");
      check.Require(n_from, "--n-from", "by scan");
      check.Require(n_to, "--n-to", "by scan");
      if (n_from && n_to && *n_from > *n_to) check.Fail("--n-from must not exceed --n-to");
      c.n_from = n_from.value_or(0);
      c.n_to = n_to.value_or(0);
      for (Method m : c.methods) CheckMethodInputs(m, c, check);
      break;
    case Command::kSignificance:
      check.Require(c.n_obs, "--n-obs", "by significance");
      check.Require(c.n_bg, "--n-bg", "by significance");
      check.Require(c.tau, "--tau", "by significance");
      break;
    case Command::kToys:
      check.Require(c.b_true, "--b-true", "by toys");
      check.Require(c.tau, "--tau", "by toys");
      if (c.trials < 1) check.Fail("--trials must be at least 1");
      if (c.study == Study::kCoverage) {
        if (tags.empty()) check.Fail("missing --method (required by coverage studies)");
        if (tags.size() > 1) check.Fail("coverage studies take a single --method");
        for (Method m : c.methods) {
          if (m != Method::kFc && m != Method::kBayesPoisson &&
              m != Method::kBayesOnOff && m != Method::kBayesOnOffSys) {
            check.Fail("coverage studies support fc, bayes-poisson, bayes-onoff, "
                       "bayes-onoff-sys (got " + std::string(ToString(m)) + ")");
          }
          if (m == Method::kBayesOnOffSys && !(c.sigma_rel > 0.0)) {
            check.Fail("--sigma-rel must be positive for method bayes-onoff-sys");
          }
        }
      }
      break;
    case Command::kBelt:
      if (tags.size() > 1) check.Fail("belt takes a single --method");
      if (c.methods.empty() && tags.empty()) c.methods.push_back(Method::kFc);
      for (Method m : c.methods) {
        if (m != Method::kFc && m != Method::kFcMarginal) {
          check.Fail("belt supports methods fc and fc-marginal (got " +
                     std::string(ToString(m)) + ")");
        }
      }
      if (!c.input) check.Require(c.b, "--b", "by belt unless --input is given");
      break;
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> Describe(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> d;
  auto real = [&](const char* key, const std::optional<double>& v) {
    d.emplace_back(key, v ? FormatNumber(*v) : "none");
  };
  auto count = [&](const char* key, const std::optional<std::int64_t>& v) {
    d.emplace_back(key, v ? std::to_string(*v) : "none");
  };
  d.emplace_back("command", std::string(ToString(c.command)));
  const bool significance_tags =
      c.command == Command::kSignificance ||
      (c.command == Command::kToys && c.study == Study::kSignificance);
  if (significance_tags) {
    d.emplace_back("method", std::string(ToString(c.significance_method)));
  } else {
    std::string tags;
    for (Method m : c.methods) {
      if (!tags.empty()) tags += ',';
      tags += ToString(m);
    }
    d.emplace_back("method", tags.empty() ? "none" : tags);
  }
  count("n_obs", c.n_obs);
  count("n_bg", c.n_bg);
  real("tau", c.tau);
  d.emplace_back("sigma_rel", FormatNumber(c.sigma_rel));
  real("b", c.b);
  d.emplace_back("sigma_b", FormatNumber(c.sigma_b));
  real("f_sim", c.f_sim);
  real("s_sim", c.s_sim);
  real("sigma_sim", c.sigma_sim);
  d.emplace_back("cl", FormatNumber(c.cl));
  d.emplace_back("s_min", c.grid.s_min ? FormatNumber(*c.grid.s_min) : "auto");
  d.emplace_back("s_max", c.grid.s_max ? FormatNumber(*c.grid.s_max) : "auto");
  d.emplace_back("s_step", c.grid.step ? FormatNumber(*c.grid.step) : "auto");
  d.emplace_back("grid_points",
                 c.grid.points ? std::to_string(*c.grid.points) : "auto");
  d.emplace_back("n_max", c.n_max > 0 ? std::to_string(c.n_max) : "auto");
  if (c.command == Command::kScan) {
    d.emplace_back("n_from", std::to_string(c.n_from));
    d.emplace_back("n_to", std::to_string(c.n_to));
  }
  if (c.command == Command::kToys) {
    d.emplace_back("study", std::string(ToString(c.study)));
    d.emplace_back("trials", std::to_string(c.trials));
    d.emplace_back("seed", std::to_string(c.seed));
    d.emplace_back("s_true", FormatNumber(c.s_true));
    real("b_true", c.b_true);
  }
  d.emplace_back("boundary", std::string(ToString(c.boundary)));
  d.emplace_back("input", c.input.value_or("none"));
  d.emplace_back("format", std::string(ToString(c.format)));
  return d;
}

}  // namespace onoff::cli
