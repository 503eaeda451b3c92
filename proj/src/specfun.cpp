#include "plateau/specfun.hpp"

#include <cmath>
#include <limits>

#include "plateau/errors.hpp"

namespace plateau::specfun {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr int kMaxIter = 400;

// Lentz continued-fraction evaluation of Gamma(a, x) * e^x * x^{-a}.
double upper_gamma_cf(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return h;
  }
  throw NumericalToleranceError("incomplete gamma continued fraction stalled");
}

// Series for the lower incomplete gamma, as gamma(a,x)*x^{-a}*e^{x}.
double lower_gamma_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) return sum;
  }
  throw NumericalToleranceError("incomplete gamma series stalled");
}

}  // namespace

double exp_integral_e1(double x) {
  if (!(x > 0.0)) throw DomainError("exp_integral_e1 requires x > 0");
  if (x <= 1.0) {
    // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k * k!)
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k <= kMaxIter; ++k) {
      term *= -x / k;
      const double add = -term / k;
      sum += add;
      if (std::abs(add) < 1e-18 * (std::abs(sum) + 1.0)) break;
    }
    return sum - kEulerGamma - std::log(x);
  }
  // E1(x) = e^{-x} * (1/(x+1- 1/(x+3- 4/(x+5- ...))))  [A&S 5.1.22]
  const double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

double upper_gamma(double a, double x) {
  if (!(a > 0.0) || a >= 2.0) throw DomainError("upper_gamma requires a in (0, 2)");
  if (x < 0.0) throw DomainError("upper_gamma requires x >= 0");
  if (x == 0.0) return std::tgamma(a);
  if (x < a + 1.0) return std::tgamma(a) - lower_gamma(a, x);
  return upper_gamma_cf(a, x) * std::exp(-x + a * std::log(x));
}

double lower_gamma(double a, double x) {
  if (!(a > 0.0) || a >= 2.0) throw DomainError("lower_gamma requires a in (0, 2)");
  if (x < 0.0) throw DomainError("lower_gamma requires x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0)
    return lower_gamma_series(a, x) * std::exp(-x + a * std::log(x));
  return std::tgamma(a) - upper_gamma(a, x);
}

double gamma_p(double a, double x) { return lower_gamma(a, x) / std::tgamma(a); }

double gamma_q(double a, double x) { return upper_gamma(a, x) / std::tgamma(a); }

double upper_gamma_neg(double alpha, double x) {
  if (!(alpha > 0.0) || alpha >= 1.0)
    throw DomainError("upper_gamma_neg requires alpha in (0, 1)");
  if (!(x > 0.0)) throw DomainError("upper_gamma_neg requires x > 0");
  const double a = -alpha;
  if (x >= 1.0) return upper_gamma_cf(a, x) * std::exp(-x + a * std::log(x));
  // Gamma(-alpha) - gamma(-alpha, x); the series helper is valid for a < 0.
  const double whole = -std::tgamma(1.0 - alpha) / alpha;
  return whole - lower_gamma_series(a, x) * std::exp(-x + a * std::log(x));
}

}  // namespace plateau::specfun
