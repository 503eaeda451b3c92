#pragma once

namespace plateau::specfun {

// Exponential integral E1(x) = int_x^inf exp(-t)/t dt, x > 0.
// Series for x <= 1 (Abramowitz & Stegun 5.1.11), continued fraction
// otherwise (5.1.22, evaluated with modified Lentz).
double exp_integral_e1(double x);

// Upper incomplete gamma Gamma(a, x) = int_x^inf t^{a-1} e^{-t} dt
// for a in (0, 2), x >= 0. Series below the a+1 crossover, continued
// fraction above.
double upper_gamma(double a, double x);

// Lower incomplete gamma gamma(a, x) = Gamma(a) - Gamma(a, x).
double lower_gamma(double a, double x);

// Regularized versions P = gamma/Gamma, Q = Gamma(a,x)/Gamma(a).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Gamma(-alpha, x) for alpha in (0, 1), x > 0. Continued fraction for
// x >= 1, reflection through the lower series otherwise.
double upper_gamma_neg(double alpha, double x);

}  // namespace plateau::specfun
