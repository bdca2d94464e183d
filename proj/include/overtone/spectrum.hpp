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

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace overtone {

enum class AxisKind { angular_frequency, field, nutation_rate, time };

const char* axis_kind_name(AxisKind kind);
AxisKind axis_kind_from_name(const std::string& name);

// Bin-centred uniform axis; bin i covers [start + i*step, start + (i+1)*step).
struct UniformAxis {
  double start = 0.0;
  double step = 1.0;
  std::size_t size = 0;

  static UniformAxis from_range(double lo, double hi, std::size_t bins);
  double lower_edge(std::size_t i) const { return start + step * static_cast<double>(i); }
  double upper_edge(std::size_t i) const { return start + step * static_cast<double>(i + 1); }
  double center(std::size_t i) const { return start + step * (static_cast<double>(i) + 0.5); }
  double end() const { return upper_edge(size == 0 ? 0 : size - 1); }
  // Bin index containing x, or -1.
  long locate(double x) const;
  bool operator==(const UniformAxis& o) const = default;
};

struct AxisInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Spectrum {
  AxisKind kind = AxisKind::angular_frequency;
  UniformAxis axis;
  std::vector<double> intensity;
  std::map<std::string, std::string> metadata;
  bool normalized = false;
  std::vector<std::string> warnings;

  // Sum of intensity times bin width.
  double integral() const;
  void set(const std::string& key, double value);
  void set(const std::string& key, const std::string& value) { metadata[key] = value; }
  void validate() const;
};

// Shortest decimal form with at least 12 significant digits that round-trips.
std::string format_double(double x);

}  // namespace overtone
