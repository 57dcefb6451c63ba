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

#include <cstdint>
#include <optional>
#include <string>

namespace qpd {

/// Batch front-end, also usable in-process: parses a JSON problem file,
/// dispatches to the library, and renders a deterministic JSON (or CSV)
/// report. Exit codes: 0 success, 1 input validation failure, 2 violated
/// mathematical precondition, 3 internal verification failure.
struct CliOptions {
  std::optional<double> tolerance_rel;
  std::optional<std::uint64_t> seed;
  std::string format = "json";  // "csv" is honored by the evolve command
};

struct RunResult {
  int exit_code = 0;
  std::string report;
};

/// Commands: dual, pair-check, williamson, project, reconstruct, capacity,
/// evolve, mahler, hardy, donoho-stark, selftest.
RunResult run_command(const std::string& command, const std::string& input_json,
                      const CliOptions& options = {});

}  // namespace qpd
