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

#include <map>
#include <string>
#include <vector>

#include "overtone/experiment.hpp"
#include "overtone/oracle.hpp"
#include "overtone/spectrum.hpp"

namespace overtone {

enum class ExportFormat { csv, json, svg };

ExportFormat export_format_from_name(const std::string& name);

using Metadata = std::map<std::string, std::string>;

// Gaussian convolution with standard deviation sigma in axis units, zero beyond the axis.
Spectrum gaussian_smooth(const Spectrum& s, double sigma);

std::string spectrum_to_csv(const Spectrum& s);
std::string spectrum_to_json(const Spectrum& s);
std::string spectrum_to_svg(const Spectrum& s, const std::string& title = "");
Spectrum spectrum_from_csv(const std::string& text);

std::string trace_to_csv(const TimeTrace& t, const Metadata& meta = {});
std::string trace_to_json(const TimeTrace& t, const Metadata& meta = {});
std::string trace_to_svg(const TimeTrace& t, const std::string& title = "");
TimeTrace trace_from_csv(const std::string& text);

std::string plot_svg(const std::vector<double>& x, const std::vector<double>& y, const std::string& xlabel,
                     const std::string& ylabel, const std::string& title = "");

std::string fit_to_json(const FitResult& f, const Metadata& meta = {});
std::string buildup_to_json(const BuildupFit& f, const Metadata& meta = {});

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

void export_spectrum(const Spectrum& s, ExportFormat format, const std::string& path);
void export_trace(const TimeTrace& t, ExportFormat format, const std::string& path,
                  const Metadata& meta = {});

}  // namespace overtone
