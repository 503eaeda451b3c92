#include "plateau/solver.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "plateau/quadrature.hpp"

namespace plateau::solver {

namespace {

// Scalar implicit step: solve x = a + c f(x). The caller guarantees
// c * Lip(f) < 1, so the fixed point map is a contraction and the
// residual g(x) = x - a - c f(x) is strictly increasing.
double solve_implicit(double a, double c,
                      const std::function<double(double)>& f, double guess) {
  double x = guess;
  for (int it = 0; it < 200; ++it) {
    const double next = a + c * f(x);
    if (std::abs(next - x) <= 1e-15 * (1.0 + std::abs(next))) return next;
    x = next;
  }
  if (std::isfinite(x)) return x;  // contraction stalled at roundoff level

  auto g = [&](double y) { return y - a - c * f(y); };
  double radius = std::max(1.0, std::abs(guess));
  double lo = guess - radius;
  double hi = guess + radius;
  int expand = 0;
  while (g(lo) > 0.0 && expand++ < 60) { radius *= 2.0; lo = guess - radius; }
  expand = 0;
  while (g(hi) < 0.0 && expand++ < 60) { radius *= 2.0; hi = guess + radius; }
  if (!(g(lo) <= 0.0 && g(hi) >= 0.0))
    throw NumericalToleranceError(
        "implicit step: failed to bracket the root of the step equation");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) <= 0.0) lo = mid; else hi = mid;
    if (hi - lo <= 1e-15 * (1.0 + std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

void check_problem(const NonlocalProblem& p) {
  if (!p.rhs) throw DomainError("solve_ivp: rhs function is empty");
  if (!(p.dt > 0.0) || !std::isfinite(p.dt))
    throw DomainError("solve_ivp: dt must be positive and finite");
  if (p.steps < 1) throw DomainError("solve_ivp: steps must be >= 1");
  if (!std::isfinite(p.u0)) throw DomainError("solve_ivp: u0 must be finite");
  if (!(p.rhs_lipschitz >= 0.0) || !std::isfinite(p.rhs_lipschitz))
    throw DomainError("solve_ivp: rhs_lipschitz must be a finite bound >= 0");
}

}  // namespace

ConvolutionWeights::ConvolutionWeights(const symbols::SymbolSpec& spec,
                                       double dt, Eigen::Index n)
    : spec_(spec), dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw DomainError("ConvolutionWeights: dt must be positive and finite");
  if (n < 1) throw DomainError("ConvolutionWeights: need at least one cell");
  symbols::TailKernel kernel(spec);  // rejects the identity family
  cells_.resize(n);
  tails_.resize(n);
  if (kernel.mode() == symbols::EvalMode::closed_form) {
    double prev = 0.0;
    for (Eigen::Index i = 1; i <= n; ++i) {
      const double cum = kernel.integrated(static_cast<double>(i) * dt);
      cells_[i - 1] = cum - prev;
      prev = cum;
    }
  } else {
    // Quadrature-backed tails: integrate each cell directly so the first
    // (singular) cell does not poison the rest through cancellation.
    cells_[0] = quad::tanh_sinh([&](double z) { return kernel(z); }, 0.0, dt);
    for (Eigen::Index i = 2; i <= n; ++i)
      cells_[i - 1] =
          quad::integrate([&](double z) { return kernel(z); },
                          static_cast<double>(i - 1) * dt,
                          static_cast<double>(i) * dt, 1e-12);
  }
  for (Eigen::Index j = 1; j <= n; ++j)
    tails_[j - 1] = kernel(static_cast<double>(j) * dt);
  if (!(cells_[0] > 0.0))
    throw NumericalToleranceError(
        "ConvolutionWeights: leading cell mass is not positive");
}

double apply_caputo_type(const ConvolutionWeights& w,
                         const grid::GridFunction& u, Eigen::Index j) {
  if (j < 1 || j > u.steps())
    throw DomainError("apply_caputo_type: index outside the grid");
  if (w.size() < u.steps())
    throw DomainError("apply_caputo_type: weight table shorter than grid");
  const double dt = u.dt;
  double acc = 0.0;
  for (Eigen::Index m = 1; m <= j; ++m) {
    const double slope = (u.values[m] - u.values[m - 1]) / dt;
    acc += slope * w.cell(j - m + 1);
  }
  return acc;
}

double apply_caputo_type(const symbols::SymbolSpec& spec,
                         const grid::GridFunction& u, Eigen::Index j) {
  if (spec.family() == symbols::Family::identity) {
    if (j < 1 || j > u.steps())
      throw DomainError("apply_caputo_type: index outside the grid");
    return (u.values[j] - u.values[j - 1]) / u.dt;
  }
  ConvolutionWeights w(spec, u.dt, u.steps());
  return apply_caputo_type(w, u, j);
}

Eigen::ArrayXd apply_caputo_type(const ConvolutionWeights& w,
                                 const grid::GridFunction& u) {
  const Eigen::Index n = u.steps();
  if (w.size() < n)
    throw DomainError("apply_caputo_type: weight table shorter than grid");
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n + 1);
  const double dt = u.dt;
  for (Eigen::Index j = 1; j <= n; ++j) {
    double acc = 0.0;
    for (Eigen::Index m = 1; m <= j; ++m)
      acc += (u.values[m] - u.values[m - 1]) / dt * w.cell(j - m + 1);
    out[j] = acc;
  }
  return out;
}

double apply_rl_type(const ConvolutionWeights& w, const grid::GridFunction& u,
                     Eigen::Index j) {
  return apply_caputo_type(w, u, j) + u.values[0] * w.tail_at(j);
}

double apply_rl_type(const symbols::SymbolSpec& spec,
                     const grid::GridFunction& u, Eigen::Index j) {
  if (spec.family() == symbols::Family::identity)
    return apply_caputo_type(spec, u, j);  // both collapse to d/dt
  ConvolutionWeights w(spec, u.dt, u.steps());
  return apply_rl_type(w, u, j);
}

grid::GridFunction solve_ivp(const NonlocalProblem& problem) {
  check_problem(problem);
  const double dt = problem.dt;
  const Eigen::Index n = problem.steps;
  auto sigma_at = [&](Eigen::Index j) {
    return problem.sigma ? problem.sigma(static_cast<double>(j) * dt) : 0.0;
  };

  grid::GridFunction u;
  u.dt = dt;
  u.values.resize(n + 1);
  u.values[0] = problem.u0;

  if (problem.spec.family() == symbols::Family::identity) {
    const double c = 0.5 * dt;
    if (c * problem.rhs_lipschitz >= 1.0)
      throw DomainError(
          "solve_ivp: dt/2 * Lipschitz(f) >= 1; reduce dt for a "
          "contractive implicit step");
    for (Eigen::Index j = 1; j <= n; ++j) {
      const double prev = u.values[j - 1];
      const double a =
          prev + c * (problem.rhs(prev) - sigma_at(j - 1)) - c * sigma_at(j);
      u.values[j] = solve_implicit(a, c, problem.rhs, prev);
    }
    return u;
  }

  ConvolutionWeights w(problem.spec, dt, n);
  const double c = dt / w.cell(1);
  if (c * problem.rhs_lipschitz >= 1.0)
    throw DomainError(
        "solve_ivp: dt/W_1 * Lipschitz(f) >= 1; reduce dt for a "
        "contractive implicit step");
  for (Eigen::Index j = 1; j <= n; ++j) {
    double hist = 0.0;  // contribution of already-known slopes
    for (Eigen::Index m = 1; m < j; ++m)
      hist += (u.values[m] - u.values[m - 1]) / dt * w.cell(j - m + 1);
    const double a = u.values[j - 1] + c * (-sigma_at(j) - hist);
    u.values[j] = solve_implicit(a, c, problem.rhs, u.values[j - 1]);
  }
  return u;
}

ConvergenceReport verify_convolved_rhs(const symbols::SymbolSpec& spec,
                                       double a, double c, double T,
                                       double dt0, int levels) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw DomainError("verify_convolved_rhs: decay rate a must be positive");
  if (!(T > 0.0) || !(dt0 > 0.0) || dt0 > T)
    throw DomainError("verify_convolved_rhs: need 0 < dt0 <= T");
  if (levels < 1) throw DomainError("verify_convolved_rhs: levels must be >= 1");

  ConvergenceReport report;
  report.dts.resize(levels);
  report.max_residual.resize(levels);
  auto v = [&](double t) { return c * std::exp(-a * t); };

  double dt = dt0;
  for (int lev = 0; lev < levels; ++lev, dt *= 0.5) {
    const auto n = static_cast<Eigen::Index>(std::llround(T / dt));
    grid::GridFunction vg = grid::sample(v, dt, n);
    ConvolutionWeights w(spec, dt, n);
    const Eigen::ArrayXd lhs = apply_caputo_type(w, vg);
    double worst = 0.0;
    for (Eigen::Index j = 1; j <= n; ++j) {
      const double tj = static_cast<double>(j) * dt;
      double rhs = 0.0;  // midpoint of f(v) against exact cell masses
      for (Eigen::Index m = 1; m <= j; ++m)
        rhs += -a * v(tj - (static_cast<double>(m) - 0.5) * dt) * w.cell(m);
      worst = std::max(worst, std::abs(lhs[j] - rhs));
    }
    report.dts[lev] = dt;
    report.max_residual[lev] = worst;
  }
  return report;
}

DelayedRushedReport delayed_rushed_ratio(const symbols::SymbolSpec& spec,
                                         const grid::GridFunction& v,
                                         double integral_u_mean,
                                         double integral_u_stderr) {
  if (v.steps() < 1)
    throw DomainError("delayed_rushed_ratio: v grid needs at least one step");
  DelayedRushedReport report;
  report.lhs_mean = integral_u_mean;
  report.lhs_stderr = integral_u_stderr;
  report.v_integral = grid::trapezoid(v);
  report.limit = symbols::phi_over_lambda_limit(spec);
  if (std::isinf(report.limit)) {
    report.rhs = std::numeric_limits<double>::infinity();
    report.classification = GrowthClass::divergent;
    report.within_3stderr = false;
    return report;
  }
  report.rhs = report.limit * report.v_integral;
  const double eps = 1e-12;
  if (report.limit > 1.0 + eps)
    report.classification = GrowthClass::delayed;
  else if (report.limit < 1.0 - eps)
    report.classification = GrowthClass::rushed;
  else
    report.classification = GrowthClass::neutral;
  report.within_3stderr =
      std::abs(report.lhs_mean - report.rhs) <= 3.0 * integral_u_stderr;
  return report;
}

const char* growth_class_name(GrowthClass c) {
  switch (c) {
    case GrowthClass::delayed: return "delayed";
    case GrowthClass::neutral: return "neutral";
    case GrowthClass::rushed: return "rushed";
    case GrowthClass::divergent: return "divergent";
  }
  return "unknown";
}

}  // namespace plateau::solver
