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

#include "overtone/fitting.hpp"

#include <unsupported/Eigen/NonLinearOptimization>

#include <cmath>
#include <limits>

#include "overtone/errors.hpp"

namespace overtone {

namespace {

struct Functor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const LeastSquaresProblem* problem;

  int inputs() const { return static_cast<int>(problem->n_params); }
  int values() const { return static_cast<int>(problem->n_residuals); }
  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    problem->residual(x, f);
    return f.allFinite() ? 0 : -1;
  }
  int df(const Eigen::VectorXd& x, Eigen::MatrixXd& j) const {
    problem->jacobian(x, j);
    return 0;
  }
};

}  // namespace

LeastSquaresResult levenberg_marquardt(const LeastSquaresProblem& problem, Eigen::VectorXd x0,
                                       std::size_t max_evaluations) {
  if (problem.n_residuals < problem.n_params || problem.n_params == 0) {
    throw Error(ErrorKind::invalid_argument, "least squares: fewer residuals than parameters");
  }
  Functor functor{&problem};
  Eigen::LevenbergMarquardt<Functor> lm(functor);
  lm.parameters.ftol = 1e-14;
  lm.parameters.xtol = 1e-14;
  lm.parameters.maxfev = static_cast<int>(max_evaluations);
  const auto status = lm.minimize(x0);

  LeastSquaresResult r;
  r.x = x0;
  r.status = static_cast<int>(status);
  r.converged = status == Eigen::LevenbergMarquardtSpace::RelativeReductionTooSmall ||
                status == Eigen::LevenbergMarquardtSpace::RelativeErrorTooSmall ||
                status == Eigen::LevenbergMarquardtSpace::RelativeErrorAndReductionTooSmall ||
                status == Eigen::LevenbergMarquardtSpace::CosinusTooSmall ||
                status == Eigen::LevenbergMarquardtSpace::FtolTooSmall ||
                status == Eigen::LevenbergMarquardtSpace::XtolTooSmall ||
                status == Eigen::LevenbergMarquardtSpace::GtolTooSmall;
  r.evaluations = static_cast<std::size_t>(lm.nfev);

  Eigen::VectorXd f(problem.n_residuals);
  problem.residual(r.x, f);
  r.rss = f.squaredNorm();
  Eigen::MatrixXd j(problem.n_residuals, problem.n_params);
  problem.jacobian(r.x, j);
  const Eigen::MatrixXd jtj = j.transpose() * j;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
  const double dof = static_cast<double>(problem.n_residuals - problem.n_params);
  if (lu.isInvertible() && dof > 0) {
    r.covariance = lu.inverse() * (r.rss / dof);
    r.covariance_ok = r.covariance.allFinite() && (r.covariance.diagonal().array() >= 0).all();
  } else {
    r.covariance = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(problem.n_params),
                                             static_cast<Eigen::Index>(problem.n_params),
                                             std::numeric_limits<double>::infinity());
  }
  return r;
}

}  // namespace overtone
