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


#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "nlohmann/json.hpp"
#include "overtone/export.hpp"

using namespace overtone;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(OVERTONE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("overtone_cli_" + name)).string();
}

}  // namespace

TEST_CASE("unknown flag is a configuration error") {
  CHECK(run("spectrum --bogus 1") == 2);
  CHECK(run("") == 2);
  CHECK(run("spectrum --system custom") == 2);
  CHECK(run("spectrum --config /nonexistent/overtone.cfg") == 2);
}

TEST_CASE("perturbative guard violation is a numeric error") {
  CHECK(run("spectrum --system nv --b0 0.05 --mw-ghz 2.8") == 3);
}

TEST_CASE("validate runs a suite") {
  const std::string out = temp_path("validate.json");
  CHECK(run("validate --suite lineshape --output " + out) == 0);
  const auto j = nlohmann::json::parse(read_file(out));
  CHECK(j.at("suite") == "lineshape");
  CHECK(j.at("passed") == true);
  CHECK(j.at("criteria").size() == 2);
  std::filesystem::remove(out);
}

TEST_CASE("pentacene field profile peaks below the half field") {
  const std::string out = temp_path("profile.csv");
  REQUIRE(run("field-profile --bins 400 --output " + out) == 0);
  const Spectrum s = spectrum_from_csv(read_file(out));
  std::size_t peak = 0;
  for (std::size_t k = 1; k < s.intensity.size(); ++k)
    if (s.intensity[k] > s.intensity[peak]) peak = k;
  const double b_half = 11.6 / (2.0 * 28.02495);
  const double offset_mt = tesla_to_mt(s.axis.center(peak) - b_half);
  CHECK(offset_mt < -2.5);
  CHECK(offset_mt > -4.5);
  std::filesystem::remove(out);
}

TEST_CASE("powder output is reproducible") {
  const std::string a = temp_path("powder_a.csv");
  const std::string b = temp_path("powder_b.csv");
  const std::string args = "powder --orientations 20000 --seed 17 --output ";
  REQUIRE(run(args + a) == 0);
  REQUIRE(run(args + b) == 0);
  CHECK(read_file(a) == read_file(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("nv rabi trace fits the overtone nutation") {
  const std::string out = temp_path("rabi.json");
  REQUIRE(run("rabi --system nv --beta 45 --samples 300 --format json --output " + out) == 0);
  const auto j = nlohmann::json::parse(read_file(out));
  CHECK(j.at("values").size() == 300);
  const auto& meta = j.at("metadata");
  const double fitted = std::stod(meta.at("fitted_nutation_mhz").get<std::string>());
  const double moment = std::stod(meta.at("moment_nutation_mhz").get<std::string>());
  CHECK(fitted == doctest::Approx(moment).epsilon(0.01));
  CHECK(meta.at("fit_flagged") == "false");
  std::filesystem::remove(out);
}

TEST_CASE("rotating-frame rabi is on resonance by default") {
  const std::string out = temp_path("rabi_rot.json");
  REQUIRE(run("rabi --frame rotating --format json --output " + out) == 0);
  const auto meta = nlohmann::json::parse(read_file(out)).at("metadata");
  const double fitted = std::stod(meta.at("fitted_nutation_mhz").get<std::string>());
  const double predicted = std::stod(meta.at("predicted_nutation_mhz").get<std::string>());
  CHECK(fitted == doctest::Approx(predicted).epsilon(1e-3));
  std::filesystem::remove(out);
}
