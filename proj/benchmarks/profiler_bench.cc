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

#include <benchmark/benchmark.h>

#include "onoff/likelihoods.h"
#include "onoff/profiler.h"
#include "onoff/significance.h"

namespace onoff {
namespace {

void BM_ProfileOnOffSys(benchmark::State& state) {
  const OnOffObservation obs{360, 270, 3.0, 0.03};
  double s = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ProfileOnOffSys(obs, s));
    s = s < 300.0 ? s + 1.5 : 0.0;
  }
}
BENCHMARK(BM_ProfileOnOffSys);

void BM_ProfileBOnOff(benchmark::State& state) {
  const OnOffObservation obs{360, 270, 3.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(ProfileBOnOff(obs, 40.0));
}
BENCHMARK(BM_ProfileBOnOff);

void BM_LogMarginalKnownBkg(benchmark::State& state) {
  const KnownBackgroundModel m{90.0, 6.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(LogMarginalKnownBkg({100}, 5.0, m));
  }
}
BENCHMARK(BM_LogMarginalKnownBkg);

void BM_OnOffSysSignificance(benchmark::State& state) {
  const OnOffObservation obs{120, 270, 3.0, 0.03};
  for (auto _ : state) benchmark::DoNotOptimize(OnOffSysSignificance(obs));
}
BENCHMARK(BM_OnOffSysSignificance);

}  // namespace
}  // namespace onoff
