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


// Philox-4x32-10 counter-based generator.
//
// A stream is identified by (seed, trial, stream id); the n-th block of four
// words in that stream is Philox(key = seed, counter = {n, stream, trial}).
// Reproducing one trial never requires generating the ones before it.

#ifndef ONOFF_RNG_H_
#define ONOFF_RNG_H_

#include <array>
#include <cstdint>
#include <limits>

namespace onoff {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

constexpr PhiloxCounter Philox4x32(PhiloxCounter ctr, PhiloxKey key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

// UniformRandomBitGenerator over one (seed, trial, stream) sequence.
class PhiloxStream {
 public:
  using result_type = std::uint32_t;

  PhiloxStream(std::uint64_t seed, std::uint64_t trial, std::uint32_t stream)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        trial_(trial),
        stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    if (used_ == 4) {
      block_ = Philox4x32(
          {static_cast<std::uint32_t>(index_), stream_,
           static_cast<std::uint32_t>(trial_),
           static_cast<std::uint32_t>(trial_ >> 32)},
          key_);
      ++index_;
      used_ = 0;
    }
    return block_[used_++];
  }

  // Uniform on (0, 1) with 53 random bits.
  double Uniform() {
    const std::uint64_t hi = (*this)() >> 5;
    const std::uint64_t lo = (*this)() >> 6;
    return (static_cast<double>(hi * 67108864u + lo) + 0.5) / 9007199254740992.0;
  }

 private:
  PhiloxKey key_;
  std::uint64_t trial_;
  std::uint32_t stream_;
  std::uint64_t index_ = 0;
  PhiloxCounter block_{};
  int used_ = 4;
};

}  // namespace onoff

#endif  // ONOFF_RNG_H_
