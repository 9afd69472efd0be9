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


// Tabular results with the resolved configuration attached, rendered as an
// aligned text table, commented CSV or JSON.

#ifndef ONOFF_TOOLS_REPORT_H_
#define ONOFF_TOOLS_REPORT_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "run_config.h"

namespace onoff::cli {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct Report {
  KeyValues config;
  KeyValues summary;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  // Replaces the CSV column block when set (belt tables).
  std::optional<std::string> csv_body;
};

void Render(const Report& report, Format format, std::ostream& out);

}  // namespace onoff::cli

#endif  // ONOFF_TOOLS_REPORT_H_
