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


#include <cmath>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "nlohmann/json.hpp"
#include "overtone/errors.hpp"
#include "overtone/export.hpp"

using namespace overtone;

namespace {

Spectrum sample_spectrum() {
  Spectrum s;
  s.kind = AxisKind::field;
  s.axis = UniformAxis::from_range(0.2, 0.21, 5);
  s.intensity = {0.0, 1.0 / 3.0, 2.5e-7, 40.0, 0.125};
  s.normalized = true;
  s.set("model", "test");
  s.set("eta", 0.115);
  s.warnings.push_back("first warning");
  return s;
}

}  // namespace

TEST_CASE("spectrum csv round trip") {
  const Spectrum s = sample_spectrum();
  const Spectrum r = spectrum_from_csv(spectrum_to_csv(s));
  CHECK(r.kind == s.kind);
  CHECK(r.axis.size == s.axis.size);
  CHECK(r.axis.start == s.axis.start);
  CHECK(r.axis.step == s.axis.step);
  CHECK(r.intensity == s.intensity);
  CHECK(r.normalized);
  CHECK(r.metadata.at("model") == "test");
  CHECK(spectrum_to_csv(r) == spectrum_to_csv(s));
}

TEST_CASE("empty spectrum csv") {
  Spectrum s;
  s.kind = AxisKind::angular_frequency;
  s.axis = UniformAxis{0.0, 1.0, 0};
  const std::string text = spectrum_to_csv(s);
  CHECK(text.find("axis,intensity") != std::string::npos);
  const Spectrum r = spectrum_from_csv(text);
  CHECK(r.axis.size == 0);
  CHECK(r.intensity.empty());
}

TEST_CASE("malformed csv is rejected") {
  std::string text = spectrum_to_csv(sample_spectrum());
  text += "1.0,2.0\n";
  CHECK_THROWS_AS(spectrum_from_csv(text), Error);
  CHECK_THROWS_AS(spectrum_from_csv("axis,intensity\nfoo,bar\n"), Error);
}

TEST_CASE("trace csv round trip") {
  const TimeTrace t = TimeTrace::uniform(0.0, 1e-8, {1.0, 0.5, -0.25, 0.125});
  const TimeTrace r = trace_from_csv(trace_to_csv(t, {{"frame", "lab"}}));
  CHECK(r.values == t.values);
  CHECK(r.times == t.times);
}

TEST_CASE("json output carries the fields") {
  const auto j = nlohmann::json::parse(spectrum_to_json(sample_spectrum()));
  CHECK(j.at("kind") == "field");
  CHECK(j.at("intensity").size() == 5);
  CHECK(j.at("metadata").at("model") == "test");
  CHECK(j.at("warnings").size() == 1);
  FitResult f;
  f.frequency = 2.0;
  f.note = "x";
  const auto jf = nlohmann::json::parse(fit_to_json(f, {{"system", "nv"}}));
  CHECK(jf.at("frequency") == 2.0);
  BuildupFit b;
  b.p_max = 0.2;
  const auto jb = nlohmann::json::parse(buildup_to_json(b));
  CHECK(jb.at("p_max") == 0.2);
}

TEST_CASE("outputs are byte-identical across calls") {
  const Spectrum s = sample_spectrum();
  CHECK(spectrum_to_csv(s) == spectrum_to_csv(s));
  CHECK(spectrum_to_svg(s, "t") == spectrum_to_svg(s, "t"));
  CHECK(spectrum_to_json(s) == spectrum_to_json(s));
  const std::string svg = spectrum_to_svg(s, "t");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("mT") != std::string::npos);
  const TimeTrace t = TimeTrace::uniform(0.0, 1e-7, {0.0, 1.0, 0.0});
  CHECK(trace_to_svg(t) == trace_to_svg(t));
}

TEST_CASE("gaussian smoothing keeps the mass of interior features") {
  Spectrum s;
  s.axis = UniformAxis::from_range(0.0, 100.0, 100);
  s.intensity.assign(100, 0.0);
  s.intensity[50] = 1.0;
  const Spectrum g = gaussian_smooth(s, 3.0);
  CHECK(g.integral() == doctest::Approx(s.integral()).epsilon(1e-6));
  CHECK(g.intensity[50] < 1.0);
  CHECK(g.intensity[50] > g.intensity[53]);
  CHECK(g.metadata.count("smoothing_sigma") == 1);
  CHECK_THROWS_AS(gaussian_smooth(s, -1.0), Error);
}

TEST_CASE("format names and file errors") {
  CHECK(export_format_from_name("csv") == ExportFormat::csv);
  CHECK(export_format_from_name("json") == ExportFormat::json);
  CHECK(export_format_from_name("svg") == ExportFormat::svg);
  CHECK_THROWS_AS(export_format_from_name("png"), Error);
  try {
    read_file("/nonexistent/dir/file.csv");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
  CHECK_THROWS_AS(write_file("/nonexistent/dir/file.csv", "x"), Error);
  const std::string path = (std::filesystem::temp_directory_path() / "overtone_export_test.csv").string();
  export_spectrum(sample_spectrum(), ExportFormat::csv, path);
  CHECK(read_file(path) == spectrum_to_csv(sample_spectrum()));
  std::filesystem::remove(path);
}
