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

#include <Eigen/Dense>
#include <cstddef>
#include <functional>

namespace overtone {

struct LeastSquaresProblem {
  std::size_t n_params = 0;
  std::size_t n_residuals = 0;
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> residual;
  std::function<void(const Eigen::VectorXd&, Eigen::MatrixXd&)> jacobian;
};

struct LeastSquaresResult {
  Eigen::VectorXd x;
  Eigen::MatrixXd covariance;  // s^2 (J^T J)^-1 with s^2 = rss / (n - p)
  double rss = 0.0;
  int status = 0;
  bool converged = false;
  bool covariance_ok = false;
  std::size_t evaluations = 0;
};

LeastSquaresResult levenberg_marquardt(const LeastSquaresProblem& problem, Eigen::VectorXd x0,
                                       std::size_t max_evaluations = 2000);

}  // namespace overtone
