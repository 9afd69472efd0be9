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

#include "onoff/interval.h"

#include <algorithm>
#include <array>
#include <utility>

namespace onoff {
namespace {

constexpr std::array<std::pair<Method, std::string_view>, 9> kMethodNames = {{
    {Method::kFc, "fc"},
    {Method::kFcMarginal, "fc-marginal"},
    {Method::kBayesPoisson, "bayes-poisson"},
    {Method::kBayesProfile, "bayes-profile"},
    {Method::kChi2Profile, "chi2-profile"},
    {Method::kBayesOnOff, "bayes-onoff"},
    {Method::kBayesOnOffSys, "bayes-onoff-sys"},
    {Method::kBayesFluxKnown, "bayes-flux-known"},
    {Method::kBayesFluxOnOff, "bayes-flux-onoff"},
}};

}  // namespace

std::string_view ToString(Method m) {
  for (const auto& [method, name] : kMethodNames) {
    if (method == m) return name;
  }
  return "unknown";
}

std::optional<Method> ParseMethod(std::string_view tag) {
  for (const auto& [method, name] : kMethodNames) {
    if (name == tag) return method;
  }
  return std::nullopt;
}

const std::vector<Method>& AllMethods() {
  static const std::vector<Method> all = [] {
    std::vector<Method> v;
    for (const auto& entry : kMethodNames) v.push_back(entry.first);
    return v;
  }();
  return all;
}

bool RequiresOnOff(Method m) {
  return m == Method::kBayesOnOff || m == Method::kBayesOnOffSys ||
         m == Method::kBayesFluxOnOff;
}

bool RequiresFluxCalibration(Method m) {
  return m == Method::kBayesFluxKnown || m == Method::kBayesFluxOnOff;
}

void IntervalDiagnostics::Flag(std::string_view name) {
  if (!HasFlag(name)) flags.emplace_back(name);
}

bool IntervalDiagnostics::HasFlag(std::string_view name) const {
  return std::find(flags.begin(), flags.end(), name) != flags.end();
}

}  // namespace onoff
