// Copyright 2026 The qpd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

namespace qpd {

/// One acceptance criterion outcome. Every tolerance is pinned in the
/// implementation; `detail` carries the measured extreme values.
struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Runs the full acceptance suite (seeded, deterministic). Used both by the
/// standalone acceptance binary and by the `selftest` CLI command.
std::vector<CriterionResult> run_acceptance_suite();

bool all_passed(const std::vector<CriterionResult>& results);

/// One "[PASS]/[FAIL] k. name -- detail" line per criterion.
std::string acceptance_table(const std::vector<CriterionResult>& results);

}  // namespace qpd
