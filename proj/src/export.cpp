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

#include "overtone/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "overtone/errors.hpp"
#include "overtone/units.hpp"

namespace overtone {

using ojson = nlohmann::ordered_json;

ExportFormat export_format_from_name(const std::string& name) {
  if (name == "csv") return ExportFormat::csv;
  if (name == "json") return ExportFormat::json;
  if (name == "svg") return ExportFormat::svg;
  throw Error(ErrorKind::invalid_argument, "unknown export format '" + name + "'");
}

Spectrum gaussian_smooth(const Spectrum& s, double sigma) {
  if (!(sigma >= 0.0)) throw Error(ErrorKind::invalid_argument, "smoothing width must be nonnegative");
  Spectrum out = s;
  if (sigma == 0.0 || s.axis.size == 0) return out;
  const double width = sigma / s.axis.step;
  const auto reach = static_cast<long>(std::ceil(5.0 * width));
  std::vector<double> kernel(static_cast<std::size_t>(2 * reach + 1));
  double ksum = 0.0;
  for (long j = -reach; j <= reach; ++j) {
    const double v = std::exp(-0.5 * (static_cast<double>(j) / width) * (static_cast<double>(j) / width));
    kernel[static_cast<std::size_t>(j + reach)] = v;
    ksum += v;
  }
  for (double& v : kernel) v /= ksum;
  const long n = static_cast<long>(s.axis.size);
  for (long i = 0; i < n; ++i) {
    double acc = 0.0;
    for (long j = std::max(-reach, -i); j <= std::min(reach, n - 1 - i); ++j) {
      acc += kernel[static_cast<std::size_t>(j + reach)] * s.intensity[static_cast<std::size_t>(i + j)];
    }
    out.intensity[static_cast<std::size_t>(i)] = acc;
  }
  out.set("smoothing_sigma", sigma);
  return out;
}

namespace {

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(e[-1]))) --e;
  if (e - b == 3 && std::string(b, e) == "nan") return std::nan("");
  if (std::string(b, e) == "inf") return INFINITY;
  if (std::string(b, e) == "-inf") return -INFINITY;
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) {
    throw Error(ErrorKind::invalid_argument, "cannot parse number '" + text + "'");
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void header_line(std::ostringstream& os, const std::string& key, const std::string& value) {
  os << "# " << key << " = " << value << '\n';
}

}  // namespace

std::string spectrum_to_csv(const Spectrum& s) {
  std::ostringstream os;
  header_line(os, "kind", axis_kind_name(s.kind));
  header_line(os, "normalized", s.normalized ? "true" : "false");
  header_line(os, "axis_start", format_double(s.axis.start));
  header_line(os, "axis_step", format_double(s.axis.step));
  header_line(os, "axis_size", std::to_string(s.axis.size));
  for (const auto& [k, v] : s.metadata) header_line(os, k, v);
  for (const auto& w : s.warnings) header_line(os, "warning", w);
  os << "axis,intensity\n";
  for (std::size_t i = 0; i < s.intensity.size(); ++i) {
    os << format_double(s.axis.center(i)) << ',' << format_double(s.intensity[i]) << '\n';
  }
  return os.str();
}

Spectrum spectrum_from_csv(const std::string& text) {
  Spectrum s;
  std::istringstream is(text);
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(line.substr(1, eq - 1));
      const std::string value = trim(line.substr(eq + 1));
      if (key == "kind") {
        s.kind = axis_kind_from_name(value);
      } else if (key == "normalized") {
        s.normalized = value == "true";
      } else if (key == "axis_start") {
        s.axis.start = parse_double(value);
      } else if (key == "axis_step") {
        s.axis.step = parse_double(value);
      } else if (key == "axis_size") {
        s.axis.size = static_cast<std::size_t>(parse_double(value));
      } else if (key == "warning") {
        s.warnings.push_back(value);
      } else {
        s.metadata[key] = value;
      }
      continue;
    }
    if (!have_header) {
      have_header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorKind::invalid_argument, "malformed CSV row: " + line);
    s.intensity.push_back(parse_double(line.substr(comma + 1)));
  }
  if (s.intensity.size() != s.axis.size) {
    throw Error(ErrorKind::invalid_argument, "CSV row count differs from axis_size");
  }
  return s;
}

std::string spectrum_to_json(const Spectrum& s) {
  ojson j;
  j["kind"] = axis_kind_name(s.kind);
  j["axis"] = {{"start", s.axis.start}, {"step", s.axis.step}, {"size", s.axis.size}};
  j["intensity"] = s.intensity;
  j["metadata"] = s.metadata;
  j["normalized"] = s.normalized;
  j["warnings"] = s.warnings;
  return j.dump(2) + "\n";
}

std::string trace_to_csv(const TimeTrace& t, const Metadata& meta) {
  std::ostringstream os;
  header_line(os, "kind", "time");
  for (const auto& [k, v] : meta) header_line(os, k, v);
  os << "time,value\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << format_double(t.times[i]) << ',' << format_double(t.values[i]) << '\n';
  }
  return os.str();
}

TimeTrace trace_from_csv(const std::string& text) {
  TimeTrace t;
  std::istringstream is(text);
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!have_header) {
      have_header = true;
      if (line.find_first_of("0123456789") != 0 && line[0] != '-' && line[0] != '.') continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorKind::invalid_argument, "malformed CSV row: " + line);
    t.times.push_back(parse_double(line.substr(0, comma)));
    t.values.push_back(parse_double(line.substr(comma + 1)));
  }
  t.validate();
  return t;
}

std::string trace_to_json(const TimeTrace& t, const Metadata& meta) {
  ojson j;
  j["times"] = t.times;
  j["values"] = t.values;
  j["metadata"] = meta;
  return j.dump(2) + "\n";
}

std::string fit_to_json(const FitResult& f, const Metadata& meta) {
  ojson j;
  j["amplitude"] = f.amplitude;
  j["decay_rate"] = f.decay_rate;
  j["frequency"] = f.frequency;
  j["frequency_mhz"] = rad_to_mhz(f.frequency);
  j["phase"] = f.phase;
  j["offset"] = f.offset;
  j["residual_norm"] = f.residual_norm;
  j["seed_frequency"] = f.seed_frequency;
  j["flagged"] = f.flagged;
  j["note"] = f.note;
  j["metadata"] = meta;
  return j.dump(2) + "\n";
}

std::string buildup_to_json(const BuildupFit& f, const Metadata& meta) {
  ojson j;
  j["model"] = f.model == BuildupModel::saturating ? "saturating" : "decaying";
  j["p_max"] = f.p_max;
  j["p_max_err"] = f.p_max_err;
  if (f.model == BuildupModel::saturating) {
    j["t_build"] = f.t_build;
  } else {
    j["t1"] = f.t1;
  }
  j["time_err"] = f.time_err;
  j["converged"] = f.converged;
  j["identifiable"] = f.identifiable;
  j["residual_norm"] = f.residual_norm;
  j["diagnostics"] = f.diagnostics;
  j["metadata"] = meta;
  return j.dump(2) + "\n";
}

namespace {

struct DisplayAxis {
  double scale;
  const char* label;
};

DisplayAxis display_axis(AxisKind kind) {
  switch (kind) {
    case AxisKind::angular_frequency: return {1.0 / (kTwoPi * 1e6), "frequency (MHz)"};
    case AxisKind::field: return {1e3, "field (mT)"};
    case AxisKind::nutation_rate: return {1.0 / (kTwoPi * 1e6), "nutation frequency (MHz)"};
    case AxisKind::time: return {1e6, "time (us)"};
  }
  return {1.0, "axis"};
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string plot_svg(const std::vector<double>& x, const std::vector<double>& y, const std::string& xlabel,
                     const std::string& ylabel, const std::string& title) {
  const double w = 720, h = 440, ml = 80, mr = 20, mt = 40, mb = 60;
  double x0 = x.empty() ? 0 : *std::min_element(x.begin(), x.end());
  double x1 = x.empty() ? 1 : *std::max_element(x.begin(), x.end());
  double y0 = y.empty() ? 0 : std::min(0.0, *std::min_element(y.begin(), y.end()));
  double y1 = y.empty() ? 1 : *std::max_element(y.begin(), y.end());
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  auto px = [&](double v) { return ml + (v - x0) / (x1 - x0) * (w - ml - mr); };
  auto py = [&](double v) { return h - mb - (v - y0) / (y1 - y0) * (h - mt - mb); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\"" << h - mb
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
     << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    os << "<text x=\"" << fmt6(px(xv)) << "\" y=\"" << h - mb + 18
       << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt6(xv) << "</text>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << fmt6(py(yv) + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">" << fmt6(yv) << "</text>\n";
  }
  os << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 15
     << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  os << "<text x=\"18\" y=\"" << (mt + h - mb) / 2 << "\" font-size=\"13\" text-anchor=\"middle\" "
     << "transform=\"rotate(-90 18 " << (mt + h - mb) / 2 << ")\">" << ylabel << "</text>\n";
  if (!title.empty()) {
    os << "<text x=\"" << w / 2 << "\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">" << title
       << "</text>\n";
  }
  os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\" points=\"";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ' ';
    os << fmt6(px(x[i])) << ',' << fmt6(py(y[i]));
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

std::string spectrum_to_svg(const Spectrum& s, const std::string& title) {
  const DisplayAxis d = display_axis(s.kind);
  std::vector<double> x(s.axis.size);
  for (std::size_t i = 0; i < s.axis.size; ++i) x[i] = s.axis.center(i) * d.scale;
  return plot_svg(x, s.intensity, d.label, s.normalized ? "density" : "intensity (arb.)", title);
}

std::string trace_to_svg(const TimeTrace& t, const std::string& title) {
  const DisplayAxis d = display_axis(AxisKind::time);
  std::vector<double> x(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) x[i] = t.times[i] * d.scale;
  return plot_svg(x, t.values, d.label, "signal", title);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
  os << content;
  os.flush();
  if (!os) throw Error(ErrorKind::io, "write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::io, "cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void export_spectrum(const Spectrum& s, ExportFormat format, const std::string& path) {
  switch (format) {
    case ExportFormat::csv: write_file(path, spectrum_to_csv(s)); break;
    case ExportFormat::json: write_file(path, spectrum_to_json(s)); break;
    case ExportFormat::svg: write_file(path, spectrum_to_svg(s)); break;
  }
}

void export_trace(const TimeTrace& t, ExportFormat format, const std::string& path, const Metadata& meta) {
  switch (format) {
    case ExportFormat::csv: write_file(path, trace_to_csv(t, meta)); break;
    case ExportFormat::json: write_file(path, trace_to_json(t, meta)); break;
    case ExportFormat::svg: write_file(path, trace_to_svg(t)); break;
  }
}

}  // namespace overtone
