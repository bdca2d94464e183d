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

#include "overtone/spectrum.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "overtone/errors.hpp"

namespace overtone {

const char* axis_kind_name(AxisKind kind) {
  switch (kind) {
    case AxisKind::angular_frequency: return "angular_frequency";
    case AxisKind::field: return "field";
    case AxisKind::nutation_rate: return "nutation_rate";
    case AxisKind::time: return "time";
  }
  return "unknown";
}

AxisKind axis_kind_from_name(const std::string& name) {
  for (AxisKind k : {AxisKind::angular_frequency, AxisKind::field, AxisKind::nutation_rate,
                     AxisKind::time}) {
    if (name == axis_kind_name(k)) return k;
  }
  throw Error(ErrorKind::invalid_argument, "unknown axis kind '" + name + "'");
}

UniformAxis UniformAxis::from_range(double lo, double hi, std::size_t bins) {
  if (bins == 0) throw Error(ErrorKind::invalid_argument, "axis needs at least one bin");
  if (!(hi > lo)) throw Error(ErrorKind::invalid_argument, "axis range must be increasing");
  return UniformAxis{lo, (hi - lo) / static_cast<double>(bins), bins};
}

long UniformAxis::locate(double x) const {
  if (!(x >= start)) return -1;
  const double k = std::floor((x - start) / step);
  if (!(k < static_cast<double>(size))) return -1;
  return static_cast<long>(k);
}

double Spectrum::integral() const {
  double s = 0.0;
  for (double v : intensity) s += v;
  return s * axis.step;
}

void Spectrum::set(const std::string& key, double value) { metadata[key] = format_double(value); }

void Spectrum::validate() const {
  if (intensity.size() != axis.size) {
    throw Error(ErrorKind::invalid_argument, "spectrum: intensity length differs from axis size");
  }
  for (double v : intensity) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::invalid_argument, "spectrum: intensity must be finite and nonnegative");
    }
  }
}

std::string format_double(double x) {
  char buf[64];
  if (!std::isfinite(x)) {
    std::snprintf(buf, sizeof buf, "%s", std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf"));
    return buf;
  }
  for (int prec = 12; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    double back = 0.0;
    std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
    if (back == x) break;
  }
  return buf;
}

}  // namespace overtone
