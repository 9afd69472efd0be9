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


#include "onoff/parallel.h"

#include <atomic>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

namespace onoff {
namespace {

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (unsigned threads : {0u, 1u, 3u, 8u}) {
    std::vector<int> seen(1001, 0);
    ParallelFor(seen.size(), threads, [&](std::size_t i) { ++seen[i]; });
    for (int v : seen) ASSERT_EQ(v, 1);
  }
  ParallelFor(0, 4, [](std::size_t) { FAIL(); });
}

TEST(ParallelFor, RethrowsAfterJoining) {
  std::atomic<int> done{0};
  EXPECT_THROW(ParallelFor(100, 4,
                           [&](std::size_t i) {
                             ++done;
                             if (i == 57) throw std::runtime_error("boom");
                           }),
               std::runtime_error);
  EXPECT_GE(done.load(), 1);
  EXPECT_GE(DefaultThreadCount(), 1u);
}

}  // namespace
}  // namespace onoff
