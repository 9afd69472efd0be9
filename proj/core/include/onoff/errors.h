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

#ifndef ONOFF_ERRORS_H_
#define ONOFF_ERRORS_H_

#include <stdexcept>
#include <string>

namespace onoff {

// Invalid inputs (negative means, zero sigmas where a density is required,
// malformed observations) raise std::domain_error / std::invalid_argument.
// Failures of a numerical procedure on valid inputs raise NumericalError.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace onoff

#endif  // ONOFF_ERRORS_H_
