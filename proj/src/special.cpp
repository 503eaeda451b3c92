#include "plateau/special.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "plateau/errors.hpp"
#include "plateau/quadrature.hpp"

namespace plateau::special {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr long double kPiL = 3.14159265358979323846264338327950288L;
constexpr double kLn2 = 0.69314718055994530941723212145817657;

double ml_series(double alpha, double z) {
  // sum_k z^k / Gamma(alpha k + 1); each term formed from scratch so the
  // recursion cannot drift.
  const long double lnz = std::log(std::fabs(z));
  long double sum = 1.0L;
  long double prev_mag = 1.0L;
  for (int k = 1; k <= 4000; ++k) {
    const long double mag =
        std::exp(k * lnz - std::lgamma(static_cast<long double>(alpha) * k + 1.0L));
    long double term = mag;
    if (z < 0.0 && (k & 1)) term = -term;
    sum += term;
    if (mag < prev_mag && mag < 1e-20L * (std::fabs(sum) + 1e-30L)) break;
    prev_mag = mag;
  }
  return static_cast<double>(sum);
}

double ml_spectral(double alpha, double x) {
  // Complete-monotone form: E_a(-x) = e_a(t) at t = x^{1/a}, with the
  // spectral integral folded onto (0, 1) by r -> 1/r symmetry.
  const double t = std::pow(x, 1.0 / alpha);
  const double c = std::cos(alpha * kPi);
  const double inv_a = 1.0 / alpha;
  auto f = [&](double w) {
    const double p = std::pow(w, inv_a);
    double num = std::exp(-t * p);
    if (p > 0.0) num += std::exp(-t / p);
    return num / ((w + 2.0 * c) * w + 1.0);
  };
  const double integral = quad::integrate(f, 0.0, 1.0, 1e-13, 48);
  return std::sin(alpha * kPi) / (alpha * kPi) * integral;
}

double mainardi_asymptotic(double alpha, double r) {
  // Saddle point of the Wright function: exponent r^{1/(1-a)}.
  const double ex = 1.0 / (1.0 - alpha);
  const double b = (1.0 - alpha) * std::pow(alpha, alpha * ex);
  const double a = std::pow(alpha, (2.0 * alpha - 1.0) / (2.0 - 2.0 * alpha)) /
                   std::sqrt(2.0 * kPi * (1.0 - alpha));
  return a * std::pow(r, (alpha - 0.5) * ex) * std::exp(-b * std::pow(r, ex));
}

std::vector<long double> gaver_coefficients(int m) {
  // zeta_k = (-1)^{m+k} sum_j j^{m+1}/m! C(m,j) C(2j,j) C(j,k-j),
  // j from floor((k+1)/2) to min(k,m); exact in a 64-bit mantissa for
  // the orders used here.
  std::vector<long double> fact(2 * m + 3, 1.0L);
  for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * i;
  auto choose = [&](int n, int k) -> long double {
    return fact[n] / (fact[k] * fact[n - k]);
  };
  std::vector<long double> zeta(2 * m + 1, 0.0L);
  for (int k = 1; k <= 2 * m; ++k) {
    long double s = 0.0L;
    for (int j = (k + 1) / 2; j <= std::min(k, m); ++j) {
      long double term = std::pow(static_cast<long double>(j), m + 1) / fact[m];
      term *= choose(m, j) * choose(2 * j, j) * choose(j, k - j);
      s += term;
    }
    zeta[k] = ((m + k) % 2 == 0) ? s : -s;
  }
  return zeta;
}

}  // namespace

double mittag_leffler(double alpha, double z) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw DomainError("mittag_leffler requires alpha in (0, 1]");
  if (alpha == 1.0) return std::exp(z);
  if (z == 0.0) return 1.0;
  if (z >= -1.0) return ml_series(alpha, z);
  return ml_spectral(alpha, -z);
}

double mainardi(double alpha, double r) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw DomainError("mainardi requires alpha in (0, 1)");
  if (!(r >= 0.0)) throw DomainError("mainardi requires r >= 0");
  if (r == 0.0) return 1.0 / std::tgamma(1.0 - alpha);

  const long double lnr = std::log(static_cast<long double>(r));
  long double sum = 0.0L;
  long double max_mag = 0.0L;
  long double prev_mag = std::numeric_limits<long double>::infinity();
  bool converged = false;
  for (int k = 0; k <= 20000; ++k) {
    const long double ak = static_cast<long double>(alpha) * (k + 1.0L);
    const long double mag =
        std::exp(k * lnr - std::lgamma(k + 1.0L) + std::lgamma(ak));
    long double term = mag * std::sin(kPiL * ak);
    if (k & 1) term = -term;
    sum += term;
    if (mag > max_mag) max_mag = mag;
    if (mag < prev_mag && mag < 1e-22L * (max_mag + 1.0L)) {
      converged = true;
      break;
    }
    prev_mag = mag;
  }
  sum /= kPiL;
  // The alternating series is hopeless once rounding in the largest term
  // swamps the result; hand over to the saddle-point tail.
  if (!converged || max_mag * 1e-19L > 1e-11L * std::fabs(sum))
    return mainardi_asymptotic(alpha, r);
  return static_cast<double>(sum);
}

double inv_stable_density(double alpha, double t, double x) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw DomainError("inv_stable_density requires alpha in (0, 1)");
  if (!(t > 0.0)) throw DomainError("inv_stable_density requires t > 0");
  if (!(x >= 0.0)) throw DomainError("inv_stable_density requires x >= 0");
  const double scale = std::pow(t, -alpha);
  return scale * mainardi(alpha, x * scale);
}

double gaver_stehfest(const RealTransform& transform, double t, int m) {
  if (!(t > 0.0)) throw DomainError("laplace inversion requires t > 0");
  if (m < 2 || m > 12) throw DomainError("gaver_stehfest order out of range");
  const auto zeta = gaver_coefficients(m);
  const double step = kLn2 / t;
  long double sum = 0.0L;
  for (int k = 1; k <= 2 * m; ++k)
    sum += zeta[k] * static_cast<long double>(transform(k * step));
  return static_cast<double>(step * sum);
}

double talbot(const ComplexTransform& transform, double t, int n) {
  if (!(t > 0.0)) throw DomainError("laplace inversion requires t > 0");
  if (n < 8 || n > 256) throw DomainError("talbot point count out of range");
  const double r = 2.0 * n / (5.0 * t);
  double acc = 0.5 * std::exp(r * t) *
               transform(std::complex<double>(r, 0.0)).real();
  for (int k = 1; k < n; ++k) {
    const double th = k * kPi / n;
    const double cot = std::cos(th) / std::sin(th);
    const std::complex<double> s(r * th * cot, r * th);
    const double sigma = th + (th * cot - 1.0) * cot;
    const std::complex<double> val =
        std::exp(t * s) * transform(s) * std::complex<double>(1.0, sigma);
    acc += val.real();
  }
  return r / n * acc;
}

double laplace_invert(const ComplexTransform& transform, double t,
                      InversionMethod method) {
  if (method == InversionMethod::talbot) return talbot(transform, t);
  return gaver_stehfest(
      [&](double x) { return transform(std::complex<double>(x, 0.0)).real(); },
      t);
}

namespace {

double moment_closed_form(const symbols::SymbolSpec& spec, int k, double t,
                          bool* found) {
  *found = true;
  switch (spec.family()) {
    case symbols::Family::identity:
      return std::exp(k * std::log(t) - std::lgamma(k + 1.0));
    case symbols::Family::stable: {
      const double ak = spec.alpha() * k;
      return std::pow(t, ak) / std::tgamma(ak + 1.0);
    }
    default:
      *found = false;
      return 0.0;
  }
}

}  // namespace

double moment_phi_k(const symbols::SymbolSpec& spec, int k, double t) {
  if (k < 0) throw DomainError("moment_phi_k requires k >= 0");
  if (!(t >= 0.0)) throw DomainError("moment_phi_k requires t >= 0");
  if (k == 0) return 1.0;
  if (t == 0.0) return 0.0;
  bool found = false;
  const double closed = moment_closed_form(spec, k, t, &found);
  if (found) return closed;
  return moment_phi_k(spec, k, t, InversionMethod::gaver_stehfest);
}

double moment_phi_k(const symbols::SymbolSpec& spec, int k, double t,
                    InversionMethod method) {
  if (k < 0) throw DomainError("moment_phi_k requires k >= 0");
  if (!(t >= 0.0)) throw DomainError("moment_phi_k requires t >= 0");
  if (k == 0) return 1.0;
  if (t == 0.0) return 0.0;
  if (method == InversionMethod::gaver_stehfest)
    return gaver_stehfest(
        [&](double l) {
          return 1.0 / (l * std::pow(symbols::phi(spec, l), k));
        },
        t);
  return talbot(
      [&](std::complex<double> s) {
        return 1.0 / (s * std::pow(symbols::phi(spec, s), k));
      },
      t);
}

}  // namespace plateau::special
