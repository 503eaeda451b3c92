#pragma once

#include <string>

#include <Eigen/Core>

#include "plateau/errors.hpp"
#include "plateau/symbols.hpp"

namespace plateau::series {

enum class CoeffKind { classical_euler, frac_euler_alpha, geometric, custom };

// Coefficient sequence {E_k} of u(t) ~ sum_k E_k phi_k(t) together with
// the data that generated it.
struct SeriesCoefficients {
  CoeffKind kind = CoeffKind::custom;
  double alpha = 1.0;  // generating order; 1 for classical_euler
  double u0 = 0.0;     // initial datum when the sequence is a logistic ladder
  Eigen::ArrayXd e;    // E[0..K]

  int order() const { return static_cast<int>(e.size()) - 1; }
};

// Fractional binomial coefficient Gamma(ak+1)/(Gamma(ai+1) Gamma(a(k-i)+1)).
double frac_binom(double alpha, int k, int i);

// Fractional Euler numbers via E_{k+1} = E_k - sum_i [k i]_a E_i E_{k-i},
// E_0 = u0, E_1 = u0(1-u0). The sum runs over i = 0..k, which is what the
// alpha=1 reduction to the classical Taylor ladder forces; literal_recursion
// reproduces the printed i = 1..k variant for comparison.
SeriesCoefficients frac_euler_numbers(double alpha, double u0, int K,
                                      bool literal_recursion = false);

// E_k = (-a)^k, the ladder of u(t) = E[exp(-a L_t)].
SeriesCoefficients geometric_coefficients(double a, double alpha, int K);

struct SeriesValue {
  double value = 0.0;
  double trunc_bound = 0.0;  // magnitude of the last retained term
};

// u(t) = sum_k E_k phi_k(t) with phi_k from the moment ladder of spec.
SeriesValue eval_series(const SeriesCoefficients& coeffs,
                        const symbols::SymbolSpec& spec, double t);

struct WestValue {
  double value = 0.0;
  double tail_bound = 0.0;  // first omitted term (alternating series)
};

// u(t) = sum_{k=0}^{K} ((u0-1)/u0)^k E_alpha(-k t^alpha); requires
// u0 > 1/2 so the ratio lies in (-1, 0).
WestValue west_series(double alpha, double u0, double t, int K);

enum class RadiusMethod { ratio, root };

struct RadiusEstimate {
  double r = 0.0;  // +inf when the terms decay super-geometrically
  RadiusMethod method = RadiusMethod::root;  // which test produced r
  double ratio_estimate = 0.0;
  double root_estimate = 0.0;
  bool unstable = false;  // ratio and root disagree by more than 20%
};

// Convergence radius of sum_k a_k x^k in x = t^alpha, where a_k is the
// raw E_k for custom sequences and E_k / Gamma(alpha k + 1) for ladder
// kinds (their natural series variable). Ratio and root tests with a
// 1/k extrapolation fit; zero coefficients are skipped via index gaps.
RadiusEstimate estimate_radius(const SeriesCoefficients& coeffs);

}  // namespace plateau::series
