#include "optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace crackwave {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& fn, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& step, const NelderMeadOptions& opt) {
  const int n = static_cast<int>(x0.size());
  require(n >= 1 && step.size() == n, ErrorKind::invalid_argument, "simplex step must match the dimension");
  require(opt.max_evals > 0, ErrorKind::invalid_argument, "optimizer budget must be positive");
  NelderMeadResult res;
  auto f = [&](const Eigen::VectorXd& x) {
    ++res.evals;
    const double v = fn(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };

  Eigen::VectorXd best = x0;
  double fbest = f(x0);
  Eigen::VectorXd scale = step;
  for (int round = 0; round <= opt.restarts; ++round) {
    std::vector<Eigen::VectorXd> X(n + 1, best);
    std::vector<double> F(n + 1, fbest);
    for (int i = 0; i < n; ++i) {
      X[i + 1][i] += scale[i];
      F[i + 1] = f(X[i + 1]);
    }
    std::vector<int> order(n + 1);
    bool done = false;
    while (!done) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return F[a] < F[b]; });
      const int lo = order[0], hi = order[n], nh = order[n - 1];
      res.history.push_back(F[lo]);
      double diam = 0;
      for (int i = 0; i <= n; ++i) diam = std::max(diam, ((X[i] - X[lo]).array() / step.array()).abs().maxCoeff());
      if (F[hi] - F[lo] <= opt.ftol * (std::abs(F[lo]) + opt.ftol) || diam <= opt.xtol) {
        done = true;
        res.converged = true;
        break;
      }
      if (res.evals >= opt.max_evals) {
        res.converged = false;
        break;
      }
      Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
      for (int i = 0; i <= n; ++i)
        if (i != hi) c += X[i];
      c /= n;
      const Eigen::VectorXd xr = c + (c - X[hi]);
      const double fr = f(xr);
      if (fr < F[lo]) {
        const Eigen::VectorXd xe = c + 2.0 * (c - X[hi]);
        const double fe = f(xe);
        if (fe < fr) {
          X[hi] = xe;
          F[hi] = fe;
        } else {
          X[hi] = xr;
          F[hi] = fr;
        }
      } else if (fr < F[nh]) {
        X[hi] = xr;
        F[hi] = fr;
      } else {
        const bool outside = fr < F[hi];
        const Eigen::VectorXd xc = outside ? Eigen::VectorXd(c + 0.5 * (xr - c)) : Eigen::VectorXd(c + 0.5 * (X[hi] - c));
        const double fc = f(xc);
        if (fc < (outside ? fr : F[hi])) {
          X[hi] = xc;
          F[hi] = fc;
        } else {
          for (int i = 0; i <= n; ++i) {
            if (i == lo) continue;
            X[i] = X[lo] + 0.5 * (X[i] - X[lo]);
            F[i] = f(X[i]);
          }
        }
      }
    }
    int lo = 0;
    for (int i = 1; i <= n; ++i)
      if (F[i] < F[lo]) lo = i;
    const bool improved = F[lo] < fbest;
    if (F[lo] <= fbest) {
      best = X[lo];
      fbest = F[lo];
    }
    if (!res.converged) break;
    if (!improved && round > 0) break;
    // restart with a smaller simplex scaled to the last one
    Eigen::VectorXd spread = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i) spread = spread.cwiseMax((X[i] - X[lo]).cwiseAbs());
    scale = (10.0 * spread).cwiseMax(1e-6 * step.cwiseAbs()).cwiseMin(step.cwiseAbs());
  }
  res.x = best;
  res.f = fbest;
  return res;
}

}  // namespace crackwave
