#include "plateau/series.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "plateau/special.hpp"

namespace plateau::series {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  LineFit f;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

}  // namespace

double frac_binom(double alpha, int k, int i) {
  require(alpha > 0.0 && alpha <= 1.0, "frac_binom requires alpha in (0, 1]");
  require(k >= 0, "frac_binom requires k >= 0");
  require(i >= 0 && i <= k, "frac_binom requires i in [0, k]");
  return std::exp(std::lgamma(alpha * k + 1.0) - std::lgamma(alpha * i + 1.0) -
                  std::lgamma(alpha * (k - i) + 1.0));
}

SeriesCoefficients frac_euler_numbers(double alpha, double u0, int K,
                                      bool literal_recursion) {
  require(alpha > 0.0 && alpha <= 1.0,
          "frac_euler_numbers requires alpha in (0, 1]");
  require(u0 > 0.0 && u0 < 1.0, "frac_euler_numbers requires u0 in (0, 1)");
  require(K >= 1, "frac_euler_numbers requires K >= 1");
  SeriesCoefficients out;
  out.kind = (alpha == 1.0) ? CoeffKind::classical_euler
                            : CoeffKind::frac_euler_alpha;
  out.alpha = alpha;
  out.u0 = u0;
  out.e.resize(K + 1);
  out.e[0] = u0;
  if (K >= 1) out.e[1] = u0 * (1.0 - u0);
  const int i0 = literal_recursion ? 1 : 0;
  for (int k = 1; k < K; ++k) {
    long double conv = 0.0L;
    for (int i = i0; i <= k; ++i)
      conv += static_cast<long double>(frac_binom(alpha, k, i)) * out.e[i] *
              out.e[k - i];
    const long double next = out.e[k] - conv;
    if (!std::isfinite(static_cast<double>(next)))
      throw NumericalToleranceError(
          "fractional Euler recursion overflowed the double range; lower K");
    out.e[k + 1] = static_cast<double>(next);
  }
  return out;
}

SeriesCoefficients geometric_coefficients(double a, double alpha, int K) {
  require(K >= 1, "geometric_coefficients requires K >= 1");
  SeriesCoefficients out;
  out.kind = CoeffKind::geometric;
  out.alpha = alpha;
  out.u0 = 1.0;
  out.e.resize(K + 1);
  double p = 1.0;
  for (int k = 0; k <= K; ++k) {
    out.e[k] = p;
    p *= -a;
  }
  return out;
}

SeriesValue eval_series(const SeriesCoefficients& coeffs,
                        const symbols::SymbolSpec& spec, double t) {
  require(t >= 0.0, "eval_series requires t >= 0");
  const int K = coeffs.order();
  SeriesValue out;
  long double sum = 0.0L;
  double last = 0.0;
  for (int k = 0; k <= K; ++k) {
    const double term = coeffs.e[k] * special::moment_phi_k(spec, k, t);
    sum += term;
    last = term;
  }
  out.value = static_cast<double>(sum);
  out.trunc_bound = std::fabs(last);
  return out;
}

WestValue west_series(double alpha, double u0, double t, int K) {
  require(alpha > 0.0 && alpha <= 1.0, "west_series requires alpha in (0, 1]");
  require(t >= 0.0, "west_series requires t >= 0");
  require(K >= 1, "west_series requires K >= 1");
  if (!(u0 > 0.5))
    throw DomainError(
        "west_series diverges term-by-term for u0 <= 1/2 (the ratio "
        "(u0-1)/u0 leaves (-1, 0)); use the Monte Carlo representation");
  const double ratio = (u0 - 1.0) / u0;
  const double ta = std::pow(t, alpha);
  long double sum = 0.0L;
  double rk = 1.0;
  for (int k = 0; k <= K; ++k) {
    sum += rk * special::mittag_leffler(alpha, -static_cast<double>(k) * ta);
    rk *= ratio;
  }
  WestValue out;
  out.value = static_cast<double>(sum);
  out.tail_bound =
      std::fabs(rk) * special::mittag_leffler(alpha, -(K + 1.0) * ta);
  return out;
}

RadiusEstimate estimate_radius(const SeriesCoefficients& coeffs) {
  const int K = coeffs.order();
  require(K >= 8, "estimate_radius requires at least 8 coefficients");
  const bool rescale = coeffs.kind != CoeffKind::custom;

  // a_k in the natural series variable; zero entries are skipped.
  std::vector<int> ks;
  std::vector<double> ln_a;
  for (int k = 0; k <= K; ++k) {
    const double ek = coeffs.e[k];
    if (ek == 0.0) continue;
    double la = std::log(std::fabs(ek));
    if (rescale) la -= std::lgamma(coeffs.alpha * k + 1.0);
    ks.push_back(k);
    ln_a.push_back(la);
  }
  if (ks.size() < 5 || ks.back() < K / 2)
    throw DomainError(
        "estimate_radius: coefficient tail is identically zero, radius "
        "undefined");

  // Root test sequence rho_k = |a_k|^{-1/k} on k >= 3.
  std::vector<double> rk, ln_rho, inv_k, ln_k;
  for (std::size_t j = 0; j < ks.size(); ++j) {
    if (ks[j] < 3) continue;
    rk.push_back(ks[j]);
    ln_rho.push_back(-ln_a[j] / ks[j]);
    inv_k.push_back(1.0 / ks[j]);
    ln_k.push_back(std::log(static_cast<double>(ks[j])));
  }
  const std::size_t half = rk.size() / 2;
  auto tail = [&](const std::vector<double>& v) {
    return std::vector<double>(v.begin() + half, v.end());
  };

  RadiusEstimate out;
  // Super-geometric decay shows up as ln rho growing like a positive
  // power of ln k instead of flattening.
  const LineFit growth = fit_line(tail(ln_k), tail(ln_rho));
  if (growth.slope > 0.05 && ln_rho.back() > ln_rho.front() + 0.1) {
    out.r = std::numeric_limits<double>::infinity();
    out.ratio_estimate = out.r;
    out.root_estimate = out.r;
    out.method = RadiusMethod::root;
    return out;
  }

  const LineFit root_fit = fit_line(tail(inv_k), tail(ln_rho));
  out.root_estimate = std::exp(root_fit.intercept);

  // Ratio test across consecutive nonzero indices.
  std::vector<double> ln_ratio, inv_k2;
  for (std::size_t j = half; j + 1 < ks.size(); ++j) {
    const int gap = ks[j + 1] - ks[j];
    ln_ratio.push_back((ln_a[j] - ln_a[j + 1]) / gap);
    inv_k2.push_back(1.0 / ks[j + 1]);
  }
  if (ln_ratio.size() >= 3) {
    const LineFit ratio_fit = fit_line(inv_k2, ln_ratio);
    out.ratio_estimate = std::exp(ratio_fit.intercept);
  } else {
    out.ratio_estimate = out.root_estimate;
  }

  if (out.ratio_estimate <= out.root_estimate) {
    out.r = out.ratio_estimate;
    out.method = RadiusMethod::ratio;
  } else {
    out.r = out.root_estimate;
    out.method = RadiusMethod::root;
  }
  out.unstable = std::fabs(out.ratio_estimate - out.root_estimate) >
                 0.2 * std::max(out.ratio_estimate, out.root_estimate);
  return out;
}

}  // namespace plateau::series
