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

namespace overtone {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  std::map<std::string, double> values;
  // Extra lines that do not affect `passed`.
  std::vector<std::string> info;
};

const std::vector<std::string>& suite_names();
std::vector<int> suite_criteria(const std::string& suite);

CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_suite(const std::string& suite);

std::string results_to_json(const std::string& suite, const std::vector<CriterionResult>& results);

}  // namespace overtone
