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

#include <stdexcept>
#include <string>

namespace qpd {

/// Machine-readable failure categories. `to_string` gives the stable name
/// used in CLI reports and exit-code mapping.
enum class Errc {
  invalid_argument,
  dimension_mismatch,
  dimension_odd,
  index_out_of_range,
  not_positive_definite,
  negative_spectrum,
  not_diagonalizable,
  singular_matrix,
  overflow,
  phase_space_body,
  space_mismatch,
  quantum_condition_violated,
  not_pure,
  residual_too_large,
  sub_heisenberg,
  not_quantum_pair,
  unsupported_body,
  degenerate_box,
  verification_failed,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace qpd
