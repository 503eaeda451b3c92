#pragma once

#include <functional>

#include <Eigen/Core>

#include "plateau/errors.hpp"
#include "plateau/grid.hpp"
#include "plateau/symbols.hpp"

namespace plateau::solver {

// Convolution-quadrature weights for the kernel tail(z): exact cell
// masses W_i = int_{(i-1)dt}^{i dt} tail, plus the point values tail(i dt)
// needed for the Riemann-Liouville correction. The kernel is singular at
// z = 0, so the first cell is never point-sampled.
class ConvolutionWeights {
public:
  ConvolutionWeights(const symbols::SymbolSpec& spec, double dt,
                     Eigen::Index n);

  double dt() const noexcept { return dt_; }
  Eigen::Index size() const noexcept { return cells_.size(); }
  double cell(Eigen::Index i) const { return cells_[i - 1]; }   // W_i, i >= 1
  double tail_at(Eigen::Index j) const { return tails_[j - 1]; }  // tail(j dt)
  const symbols::SymbolSpec& spec() const noexcept { return spec_; }

private:
  symbols::SymbolSpec spec_;
  double dt_;
  Eigen::ArrayXd cells_;
  Eigen::ArrayXd tails_;
};

// Caputo-type derivative D^Phi u(t_j): piecewise-linear u convolved with
// the tail, i.e. sum_m slope_m W_{j-m+1}. The identity family dispatches
// to the backward difference (the operator degenerates to d/dt).
double apply_caputo_type(const ConvolutionWeights& w,
                         const grid::GridFunction& u, Eigen::Index j);
double apply_caputo_type(const symbols::SymbolSpec& spec,
                         const grid::GridFunction& u, Eigen::Index j);
// All j = 1..n at once; entry 0 is set to 0 by convention.
Eigen::ArrayXd apply_caputo_type(const ConvolutionWeights& w,
                                 const grid::GridFunction& u);

// Riemann-Liouville type: D^Phi u + u(0) tail(t_j).
double apply_rl_type(const ConvolutionWeights& w, const grid::GridFunction& u,
                     Eigen::Index j);
double apply_rl_type(const symbols::SymbolSpec& spec,
                     const grid::GridFunction& u, Eigen::Index j);

struct NonlocalProblem {
  symbols::SymbolSpec spec;
  std::function<double(double)> rhs;   // f(u)
  double rhs_lipschitz = 0.0;          // sup |f'| over the reachable range
  std::function<double(double)> sigma; // correction sigma(t); empty = zero
  double u0 = 0.0;
  double dt = 0.0;
  Eigen::Index steps = 0;
};

// Implicit marching for D^Phi u = f(u) - sigma: each step solves the
// scalar equation u_j = u_{j-1} + (dt/W_1)(f(u_j) - sigma_j - hist_j) by
// fixed point (contraction (dt/W_1) Lip(f) < 1 is checked up front) with
// safeguarded bisection as fallback. The identity family integrates
// u' = f(u) - sigma by the implicit trapezoid rule instead.
grid::GridFunction solve_ivp(const NonlocalProblem& problem);

struct ConvergenceReport {
  Eigen::ArrayXd dts;
  Eigen::ArrayXd max_residual;
};

// Two-sided check of D^Phi v = (f(v) * tail) for v = c e^{-at},
// f(x) = -a x: left side via apply_caputo_type, right side via midpoint
// values against exact cell masses; repeated over halved steps.
ConvergenceReport verify_convolved_rhs(const symbols::SymbolSpec& spec,
                                       double a, double c, double T,
                                       double dt0, int levels = 3);

enum class GrowthClass { delayed, neutral, rushed, divergent };

struct DelayedRushedReport {
  double lhs_mean = 0.0;    // Monte Carlo integral of u over (0, inf)
  double lhs_stderr = 0.0;
  double v_integral = 0.0;  // trapezoid of v over (0, T)
  double limit = 0.0;       // lim phi(lambda)/lambda
  double rhs = 0.0;         // limit * v_integral
  GrowthClass classification = GrowthClass::neutral;
  bool within_3stderr = false;
};

// Integral identity int_0^inf u = (lim phi/lambda) int_0^T v; the Monte
// Carlo left side is passed in as (mean, stderr). An infinite limit is a
// valid divergent classification, not an error.
DelayedRushedReport delayed_rushed_ratio(const symbols::SymbolSpec& spec,
                                         const grid::GridFunction& v,
                                         double integral_u_mean,
                                         double integral_u_stderr);

const char* growth_class_name(GrowthClass c);

}  // namespace plateau::solver
