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

// Neyman belts with likelihood-ratio (Feldman-Cousins) ordering.
//
// For each signal s on a grid, counts n are ranked by
//   R(n; s) = L(n | s) / L(n | s_hat(n)),  s_hat(n) = argmax_{s' >= 0} L(n | s')
// and accepted in decreasing rank (ties: smaller n first) until their total
// probability reaches cl. The interval for an observed count is the span of
// signals whose acceptance set contains it.
//
// L is either the exact Poisson likelihood with known background, or the
// likelihood marginalized over a Gaussian-distributed background.

#ifndef ONOFF_NEYMAN_H_
#define ONOFF_NEYMAN_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "onoff/bayes.h"
#include "onoff/interval.h"
#include "onoff/likelihoods.h"

namespace onoff {

enum class BeltLikelihood { kExact, kMarginal };

std::string_view ToString(BeltLikelihood tag);

// Likelihood-ratio rank of count n at signal s, in [0, 1].
double FcRank(std::int64_t n, double s, const KnownBackgroundModel& model,
              BeltLikelihood tag);

// s_hat(n) for the given likelihood.
double FcBestSignal(std::int64_t n, const KnownBackgroundModel& model,
                    BeltLikelihood tag);

struct BeltRow {
  double s = 0.0;
  std::int64_t n_lo = 0;
  std::int64_t n_hi = 0;
  double mass = 0.0;  // total probability of the accepted counts
  bool contiguous = true;
  // Explicit accepted counts, kept only for non-contiguous rows.
  std::vector<std::int64_t> accepted;

  bool Accepts(std::int64_t n) const;
};

struct ConfidenceBelt {
  BeltLikelihood likelihood = BeltLikelihood::kExact;
  KnownBackgroundModel model;
  double cl = 0.9;
  ScanGrid s_grid;
  std::int64_t n_max = 0;
  std::vector<BeltRow> rows;

  bool AllContiguous() const;
  // Index of the first row whose n_lo or n_hi decreases, if any.
  std::optional<std::size_t> FirstMonotonicityViolation() const;
};

struct BeltOptions {
  std::int64_t n_max = 0;  // 0 = smallest safe value for the grid
  unsigned threads = 1;    // 0 = hardware concurrency
  // Exact intervals only: report the largest upper end found for any
  // background in [b, b + envelope_width], which keeps the upper limit
  // non-increasing in b despite the sawtooth left by discrete counts.
  bool background_envelope = true;
  double envelope_width = 2.0;
};

// Step 0.005 over [0, max(10, n - b + 10 sqrt(n + 1) + 25)].
ScanGrid DefaultBeltGrid(std::int64_t n_obs, double b);

// Builds the belt. Throws NumericalError if n_max leaves more than 1e-9
// probability above it at the largest signal.
ConfidenceBelt BuildBelt(const KnownBackgroundModel& model, BeltLikelihood tag,
                         double cl, const ScanGrid& s_grid,
                         const BeltOptions& opts = {});

// Interval for an observed count. Throws NumericalError if no signal on the
// grid accepts n_obs; flags grid-edge when the upper end is the last grid
// point.
IntervalResult FcInterval(std::int64_t n_obs, const ConfidenceBelt& belt);

// Thread-safe cache of finished belts keyed by every construction input.
class BeltCache {
 public:
  std::shared_ptr<const ConfidenceBelt> Get(const KnownBackgroundModel& model,
                                            BeltLikelihood tag, double cl,
                                            const ScanGrid& s_grid,
                                            const BeltOptions& opts = {});
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const ConfidenceBelt>> belts_;
};

// Largest upper end of exact intervals for n_obs over backgrounds in
// [b, b + width], on the signal grid step `step`. `start` is the upper end
// at b itself.
double FcUpperEnvelope(std::int64_t n_obs, double b, double cl, double step,
                       double start, double width);

// Convenience wrappers with the default grid. `cache` may be null. A count
// above the belt's range throws NumericalError, like one no row accepts.
IntervalResult FcExactInterval(std::int64_t n_obs, double b, double cl,
                               const std::optional<ScanGrid>& grid = {},
                               BeltCache* cache = nullptr,
                               const BeltOptions& opts = {});
IntervalResult FcMarginalInterval(std::int64_t n_obs,
                                  const KnownBackgroundModel& model, double cl,
                                  const std::optional<ScanGrid>& grid = {},
                                  BeltCache* cache = nullptr,
                                  const BeltOptions& opts = {});

// Structured text table: '#'-prefixed header of construction inputs, then
// "s,n_lo,n_hi,mass,contiguous,accepted" rows. Doubles are written with 17
// significant digits so a round trip is exact.
void WriteBelt(std::ostream& out, const ConfidenceBelt& belt);
ConfidenceBelt ReadBelt(std::istream& in);

}  // namespace onoff

#endif  // ONOFF_NEYMAN_H_
