#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace ledspdc {

struct NelderMeadOptions {
  /// Stop when (f_worst - f_best) <= rel_tol * max(|f_best|, 1).
  double rel_tol = 1e-10;
  long max_evaluations = 100000;
  /// Fresh simplexes built around the best point after convergence.
  int restarts = 3;
  /// Initial edge length per coordinate: step * max(|x_i|, 0.1 * max_j |x_j|), 1e-3 for a zero start.
  double step = 0.1;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  long evaluations = 0;
  long iterations = 0;
  bool converged = false;
};

/// Nelder-Mead simplex minimization with dimension-adaptive coefficients
/// (Gao and Han 2012): reflection 1, expansion 1 + 2/n, contraction 0.75 - 1/(2n),
/// shrink 1 - 1/n. Deterministic for a given start.
template <typename F>
NelderMeadResult nelder_mead(F&& f, const Eigen::VectorXd& x0, const NelderMeadOptions& opts = {}) {
  const int n = static_cast<int>(x0.size());
  const double nd = static_cast<double>(n);
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / nd;
  const double gamma = 0.75 - 1.0 / (2.0 * nd);
  const double shrink = 1.0 - 1.0 / nd;

  NelderMeadResult res;
  res.x = x0;
  res.value = f(x0);
  res.evaluations = 1;

  auto eval = [&](const Eigen::VectorXd& x) {
    ++res.evaluations;
    return f(x);
  };

  for (int round = 0; round <= opts.restarts; ++round) {
    const double scale = res.x.size() > 0 ? res.x.cwiseAbs().maxCoeff() : 0.0;
    std::vector<Eigen::VectorXd> pts(n + 1, res.x);
    std::vector<double> vals(n + 1, res.value);
    for (int i = 0; i < n; ++i) {
      double h = opts.step * std::max(std::abs(res.x(i)), 0.1 * scale);
      if (h == 0.0) h = 1e-3;
      pts[i + 1](i) += h;
      vals[i + 1] = eval(pts[i + 1]);
    }
    const double start_value = res.value;
    std::vector<int> order(n + 1);
    bool converged = false;
    while (res.evaluations < opts.max_evaluations) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&vals](int a, int b) { return vals[a] < vals[b]; });
      const int best = order.front();
      const int worst = order.back();
      const int second = order[n - 1];
      if (vals[worst] - vals[best] <= opts.rel_tol * std::max(std::abs(vals[best]), 1.0)) {
        converged = true;
        break;
      }
      ++res.iterations;
      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (int i = 0; i <= n; ++i)
        if (i != worst) centroid += pts[i];
      centroid /= nd;

      const Eigen::VectorXd xr = centroid + alpha * (centroid - pts[worst]);
      const double fr = eval(xr);
      if (fr < vals[best]) {
        const Eigen::VectorXd xe = centroid + beta * (xr - centroid);
        const double fe = eval(xe);
        if (fe < fr) {
          pts[worst] = xe;
          vals[worst] = fe;
        } else {
          pts[worst] = xr;
          vals[worst] = fr;
        }
        continue;
      }
      if (fr < vals[second]) {
        pts[worst] = xr;
        vals[worst] = fr;
        continue;
      }
      const bool outside = fr < vals[worst];
      const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + gamma * (xr - centroid))
                                         : Eigen::VectorXd(centroid - gamma * (centroid - pts[worst]));
      const double fc = eval(xc);
      if (fc < (outside ? fr : vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
        continue;
      }
      for (int i = 0; i <= n; ++i) {
        if (i == best) continue;
        pts[i] = pts[best] + shrink * (pts[i] - pts[best]);
        vals[i] = eval(pts[i]);
      }
    }
    const auto it = std::min_element(vals.begin(), vals.end());
    if (*it < res.value) {
      res.value = *it;
      res.x = pts[static_cast<std::size_t>(it - vals.begin())];
    }
    res.converged = converged;
    if (!converged) break;
    if (round > 0 && start_value - res.value <= opts.rel_tol * std::max(std::abs(res.value), 1.0)) break;
  }
  return res;
}

}  // namespace ledspdc
