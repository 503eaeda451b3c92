#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Core>

#include "plateau/errors.hpp"
#include "plateau/grid.hpp"
#include "plateau/rng.hpp"
#include "plateau/symbols.hpp"

namespace plateau::mc {

// Classical logistic flow started at v0: solution of v' = v(1 - v).
double logistic_solution(double v0, double t);

struct Estimate {
  double mean = 0.0;
  double variance = 0.0;   // sample variance of the per-path values
  double std_error = 0.0;  // sqrt(variance / n)
  Eigen::Index n = 0;
  std::uint64_t seed = 0;
};

struct SigmaTable {
  Eigen::ArrayXd t;
  Eigen::ArrayXd u_hat;
  Eigen::ArrayXd sigma_hat;     // sample variance of v(L_t)
  Eigen::ArrayXd stderr_u;
  Eigen::ArrayXd stderr_sigma;  // batch-means dispersion of sigma_hat
};

// All estimators below share the path population: path i is driven by
// rng::substream(seed, i), and partial sums are merged in fixed batch
// order, so results are bit-identical for every thread count and common
// random numbers hold across calls with the same (seed, ds).

// E[v(L_t)] where L is the inverse subordinator for the symbol.
Estimate estimate_functional(const symbols::SymbolSpec& spec,
                             const std::function<double(double)>& v, double t,
                             Eigen::Index n, std::uint64_t seed,
                             double ds = 1e-3, int threads = 1);

// u_hat, sigma_hat and their standard errors on a whole time grid from
// one path population (common random numbers across grid points).
SigmaTable estimate_variance_sigma(const symbols::SymbolSpec& spec,
                                   const std::function<double(double)>& v,
                                   const Eigen::ArrayXd& t_grid,
                                   Eigen::Index n, std::uint64_t seed,
                                   double ds = 1e-3, int threads = 1);

// E[v(L_t); L_t < r]: the walk stops at s = r, paths that have not
// crossed t by then contribute zero.
Estimate estimate_restricted(const symbols::SymbolSpec& spec,
                             const std::function<double(double)>& v, double t,
                             double r, Eigen::Index n, std::uint64_t seed,
                             double ds = 1e-3, int threads = 1);

// E[int_0^inf v(L_t) dt] for v supported on [0, support_end] (extended by
// zero): per path the integral collapses to sum_k v(s_k) (H_k - H_{k-1}).
Estimate estimate_occupation_integral(const symbols::SymbolSpec& spec,
                                      const std::function<double(double)>& v,
                                      double support_end, Eigen::Index n,
                                      std::uint64_t seed, double ds = 1e-3,
                                      int threads = 1);

struct ClosureReport {
  SigmaTable table;
  Eigen::ArrayXd residual;      // D^Phi u_hat + sigma_hat - u_hat(1-u_hat)
  Eigen::Index window_begin = 0;  // first index of the measured window
  double max_residual = 0.0;    // sup norm over the window
  double stat_bound = 0.0;      // stderr propagated through the operator
  double dt_bound = 0.0;        // first-order discretization allowance
  double threshold = 0.0;       // 5 * (stat_bound + dt_bound)
};

// Closure check for D^Phi u + sigma = u(1 - u) with u = E[v(L_t)],
// sigma = Var[v(L_t)], both estimated from one common-random-number path
// population. The residual norm is taken on t >= max(2 dt, T/10): the L1
// operator applied to the sqrt-type singularity of u at 0 has an O(1)
// defect on the first few cells that no refinement of n removes.
ClosureReport theorem_closure(const symbols::SymbolSpec& spec, double u0,
                              double T, double dt, Eigen::Index n,
                              std::uint64_t seed, double ds = 1e-3,
                              int threads = 1);

struct ConjectureFit {
  Eigen::ArrayXd coefficients;  // c_0..c_K
  Eigen::ArrayXd t_grid;
  Eigen::ArrayXd residuals;     // collocation residual at each grid point
  int iterations = 0;
};

// Fit c_2..c_K in u = sum_k c_k phi_k so that D^Phi u = u(1 - u) holds at
// the grid points (c_0 = u0 and c_1 = u0(1 - u0) are pinned by the
// equation at t = 0). Gauss-Newton on the quadratic residual; ridge > 0
// switches the linear solve to regularized normal equations.
ConjectureFit conjecture_search(const symbols::SymbolSpec& spec, double u0,
                                int K, const Eigen::ArrayXd& t_grid,
                                double ridge = 0.0);

}  // namespace plateau::mc
