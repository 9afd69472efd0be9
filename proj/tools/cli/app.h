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


#ifndef ONOFF_TOOLS_APP_H_
#define ONOFF_TOOLS_APP_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace onoff::cli {

// Full command-line entry point. `args` excludes the program name. Returns
// the process exit code: 0 success, 1 invalid configuration, 2 numerical
// failure.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace onoff::cli

#endif  // ONOFF_TOOLS_APP_H_
