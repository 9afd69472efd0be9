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

#ifndef ONOFF_PARALLEL_H_
#define ONOFF_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace onoff {

// Number of worker threads used when a caller passes threads == 0.
unsigned DefaultThreadCount();

// Runs body(i) for i in [0, n) on up to `threads` threads (0 = default).
// Indices are split into contiguous blocks; every body(i) must write only to
// slot i of its output so results do not depend on the schedule. The first
// exception thrown by any body is rethrown after all workers finish.
void ParallelFor(std::size_t n, unsigned threads,
                 const std::function<void(std::size_t)>& body);

}  // namespace onoff

#endif  // ONOFF_PARALLEL_H_
