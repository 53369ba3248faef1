#pragma once

#include <functional>

#include <Eigen/Dense>

namespace gcnet::optim {

/// Function to minimize. May return +inf (or NaN) for infeasible points.
using Objective = std::function<double(const Eigen::VectorXd&)>;

struct Result {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  double initial_step = 0.5;
  double f_tolerance = 1e-9;
  int max_evaluations = 4000;
};

Result nelder_mead(const Objective& f, const Eigen::VectorXd& x0, const NelderMeadOptions& opt = {});

struct BfgsOptions {
  double gradient_tolerance = 1e-5;
  double relative_step = 1e-5;  ///< central-difference step, relative to max(1, |x_i|)
  int max_iterations = 200;
};

/// Quasi-Newton refinement with central-difference gradients and a
/// backtracking line search. Never returns a point worse than x0.
Result bfgs(const Objective& f, const Eigen::VectorXd& x0, const BfgsOptions& opt = {});

/// Central-difference gradient.
Eigen::VectorXd numerical_gradient(const Objective& f, const Eigen::VectorXd& x, double relative_step,
                                   int* evaluations = nullptr);

}  // namespace gcnet::optim
