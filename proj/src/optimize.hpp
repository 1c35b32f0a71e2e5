#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace crackwave {

struct NelderMeadOptions {
  int max_evals = 4000;
  double ftol = 1e-15;  // stop when the simplex f-spread falls below ftol * (|f_best| + ftol)
  double xtol = 1e-12;  // or its diameter below xtol (relative to the step scale)
  int restarts = 3;     // re-expand the simplex around the best point after convergence
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = 0;
  int evals = 0;
  bool converged = false;  // false when the budget ran out
  std::vector<double> history;  // best f after each iteration
};

/// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink 1/2) with restarts.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& step, const NelderMeadOptions& opt = {});

}  // namespace crackwave
