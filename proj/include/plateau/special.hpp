#pragma once

#include <complex>
#include <functional>

#include "plateau/symbols.hpp"

namespace plateau::special {

// Mittag-Leffler E_alpha(z) for alpha in (0, 1]. Power series around the
// origin; for z < -1 the completely monotone spectral representation
//   E_alpha(-x) = (sin(a pi)/(a pi)) int_0^1 [e^{-x w^{1/a}} + e^{-x w^{-1/a}}]
//                 / (w^2 + 2 w cos(a pi) + 1) dw
// whose integrand is positive, so no cancellation for strongly negative z.
double mittag_leffler(double alpha, double z);

// Mainardi function M_alpha(r), r >= 0: the series
//   (1/pi) sum_k (-r)^k / k! Gamma(alpha(k+1)) sin(pi alpha (k+1))
// with a saddle-point tail for r past the cancellation threshold.
double mainardi(double alpha, double r);

// Density in x >= 0 of the inverse alpha-stable subordinator at t > 0:
// t^{-alpha} M_alpha(x t^{-alpha}).
double inv_stable_density(double alpha, double t, double x);

using RealTransform = std::function<double(double)>;
using ComplexTransform =
    std::function<std::complex<double>(std::complex<double>)>;

enum class InversionMethod { gaver_stehfest, talbot };

// Gaver-Stehfest of order 2m; samples the transform on the real axis
// only, with long double accumulation against the binomial blow-up.
double gaver_stehfest(const RealTransform& transform, double t, int m = 7);

// Fixed-Talbot rule with n contour points (Abate-Valko parametrization).
double talbot(const ComplexTransform& transform, double t, int n = 32);

double laplace_invert(const ComplexTransform& transform, double t,
                      InversionMethod method);

// phi_k(t) = E[L_t^k] / k!, i.e. the inverse transform of
// 1/(lambda Phi(lambda)^k). Closed forms for the identity and stable
// families, Gaver-Stehfest otherwise; the two-argument overload forces a
// specific numeric inversion (used for cross-checking).
double moment_phi_k(const symbols::SymbolSpec& spec, int k, double t);
double moment_phi_k(const symbols::SymbolSpec& spec, int k, double t,
                    InversionMethod method);

}  // namespace plateau::special
