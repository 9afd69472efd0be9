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


#ifndef ONOFF_TOOLS_COMMANDS_H_
#define ONOFF_TOOLS_COMMANDS_H_

#include "report.h"
#include "run_config.h"

namespace onoff::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

struct CommandResult {
  Report report;
  int exit_code = kExitOk;
  std::vector<std::string> messages;  // for standard error
};

// Runs a validated configuration. Numerical failures surface as
// NumericalError; bad inputs caught late as std::invalid_argument or
// std::domain_error.
CommandResult RunCommand(const RunConfig& cfg);

}  // namespace onoff::cli

#endif  // ONOFF_TOOLS_COMMANDS_H_
