/* Copyright (c) 2026 The Overtone Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License. */

#pragma once

#include <stdexcept>
#include <string>

namespace overtone {

enum class ErrorKind {
  invalid_argument,
  hermiticity,
  division_by_zero,
  perturbation_regime,
  under_resolved,
  degeneracy,
  no_oscillation,
  empty_grid,
  axis_mismatch,
  non_convergence,
  io,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// True for failures caused by the numerics rather than by bad configuration.
bool is_numeric_validity(ErrorKind kind);

}  // namespace overtone
