#pragma once

#include <cmath>

#include <Eigen/Core>

#include "plateau/errors.hpp"

namespace plateau::grid {

// Samples of a function on the uniform grid t_j = j * dt, j = 0..n.
struct GridFunction {
  double dt = 0.0;
  Eigen::ArrayXd values;

  Eigen::Index steps() const { return values.size() - 1; }
  double time(Eigen::Index j) const { return dt * static_cast<double>(j); }
  double t_max() const { return time(steps()); }
};

template <typename F>
GridFunction sample(F&& f, double dt, Eigen::Index n_steps) {
  if (!(dt > 0.0) || n_steps < 1)
    throw DomainError("grid sampling requires dt > 0 and at least one step");
  GridFunction g;
  g.dt = dt;
  g.values.resize(n_steps + 1);
  for (Eigen::Index j = 0; j <= n_steps; ++j)
    g.values[j] = f(dt * static_cast<double>(j));
  return g;
}

// Fixed-order pairwise reduction; summation order is independent of how
// the data was produced, which keeps multi-threaded estimators bit-stable.
inline double pairwise_sum(const double* x, Eigen::Index n) {
  if (n <= 32) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const Eigen::Index h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

inline double pairwise_sum(const Eigen::ArrayXd& x) {
  return pairwise_sum(x.data(), x.size());
}

inline double trapezoid(const Eigen::ArrayXd& y, double dx) {
  if (y.size() < 2) return 0.0;
  return dx * (pairwise_sum(y) - 0.5 * (y[0] + y[y.size() - 1]));
}

inline double trapezoid(const GridFunction& g) {
  return trapezoid(g.values, g.dt);
}

// Piecewise-linear evaluation at an off-grid time.
inline double interp(const GridFunction& g, double t) {
  const double tmax = g.t_max();
  if (!(t >= -1e-12) || t > tmax * (1.0 + 1e-12) + 1e-300)
    throw DomainError("interpolation time outside the sampled grid");
  if (t <= 0.0) return g.values[0];
  if (t >= tmax) return g.values[g.steps()];
  const double s = t / g.dt;
  const Eigen::Index j = static_cast<Eigen::Index>(std::floor(s));
  const double w = s - static_cast<double>(j);
  return (1.0 - w) * g.values[j] + w * g.values[j + 1];
}

}  // namespace plateau::grid
