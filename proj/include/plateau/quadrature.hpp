#pragma once

#include <cmath>
#include <limits>

#include "plateau/errors.hpp"

namespace plateau::quad {

// Adaptive Gauss-Kronrod (G7,K15) with recursive bisection.
// Nodes/weights from the standard QUADPACK tables.

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F>
void gk15(const F& f, double a, double b, double& result, double& err) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    res_k += kWgk[i] * (f1 + f2);
    if (i % 2 == 1) res_g += kWg[i / 2] * (f1 + f2);
  }
  result = res_k * half;
  err = std::abs((res_k - res_g) * half);
}

template <typename F>
double adapt(const F& f, double a, double b, double abs_tol, int depth) {
  double result, err;
  gk15(f, a, b, result, err);
  if (err <= abs_tol || depth <= 0) {
    if (depth <= 0 && err > 64.0 * abs_tol)
      throw NumericalToleranceError(
          "adaptive quadrature failed to converge on subinterval");
    return result;
  }
  const double mid = 0.5 * (a + b);
  return adapt(f, a, mid, 0.5 * abs_tol, depth - 1) +
         adapt(f, mid, b, 0.5 * abs_tol, depth - 1);
}

}  // namespace detail

// Integral of f over the finite interval [a, b].
template <typename F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-10,
                 int max_depth = 40) {
  if (!(b > a)) return 0.0;
  return detail::adapt(f, a, b, abs_tol, max_depth);
}

// Integral of f over [a, inf) via the rational stretch x = a + u/(1-u).
template <typename F>
double integrate_upper(const F& f, double a, double abs_tol = 1e-10,
                       int max_depth = 40) {
  auto g = [&](double u) {
    const double om = 1.0 - u;
    const double x = a + u / om;
    return f(x) / (om * om);
  };
  return detail::adapt(g, 0.0, 1.0, abs_tol, max_depth);
}

namespace detail {

inline constexpr double kHalfPi = 1.5707963267948966;

// Shared level-doubling driver for the double-exponential rules below.
// `term(t)` evaluates integrand * weight at abscissa parameter t.
template <typename Term>
double de_levels(const Term& term, double tmax, double abs_tol) {
  double h = 1.0;
  double sum = term(0.0);
  for (int k = 1; k * h <= tmax; ++k) sum += term(k * h) + term(-k * h);
  double integral = h * sum;
  for (int level = 1; level <= 7; ++level) {
    h *= 0.5;
    for (int k = 1; k * h <= tmax; k += 2) sum += term(k * h) + term(-k * h);
    const double next = h * sum;
    const double diff = std::abs(next - integral);
    integral = next;
    if (level >= 3 && diff <= std::max(abs_tol, 1e-14 * std::abs(next)))
      return integral;
  }
  return integral;
}

}  // namespace detail

// tanh-sinh rule on the finite interval (a, b); tolerates integrable
// endpoint singularities. Endpoint distances are formed directly from
// 1 - |tanh(u)| = 2 / (exp(2|u|) + 1) to avoid cancellation.
template <typename F>
double tanh_sinh(const F& f, double a, double b, double abs_tol = 1e-12) {
  if (!(b > a)) return 0.0;
  const double half = 0.5 * (b - a);
  auto term = [&](double t) -> double {
    const double u = detail::kHalfPi * std::sinh(t);
    const double au = std::abs(u);
    const double d = 2.0 / (std::exp(2.0 * au) + 1.0);
    if (d <= 0.0) return 0.0;
    const double x = (t >= 0.0) ? b - half * d : a + half * d;
    const double ch = std::cosh(u);
    const double w = detail::kHalfPi * std::cosh(t) / (ch * ch);
    if (!(w > 0.0) || !std::isfinite(w)) return 0.0;
    const double v = f(x) * half * w;
    return std::isfinite(v) ? v : 0.0;
  };
  return detail::de_levels(term, 4.3, abs_tol);
}

// exp-sinh rule on (0, inf): x = exp((pi/2) sinh t). Handles a power
// singularity at 0 together with (super)exponential decay at infinity.
template <typename F>
double exp_sinh(const F& f, double abs_tol = 1e-12) {
  auto term = [&](double t) -> double {
    const double u = detail::kHalfPi * std::sinh(t);
    if (u > 300.0) return 0.0;  // integrand has decayed to nothing
    const double x = std::exp(u);
    const double w = x * detail::kHalfPi * std::cosh(t);
    const double v = f(x) * w;
    return std::isfinite(v) ? v : 0.0;
  };
  return detail::de_levels(term, 6.5, abs_tol);
}

}  // namespace plateau::quad
