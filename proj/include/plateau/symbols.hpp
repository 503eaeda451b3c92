#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>

#include <Eigen/Core>

#include "plateau/errors.hpp"

namespace plateau::symbols {

// Laplace exponents of driftless, killing-free subordinators:
//   identity          Phi(l) = l                     (pure drift benchmark)
//   stable            Phi(l) = l^alpha
//   tempered_stable   Phi(l) = (l+gamma)^alpha - gamma^alpha
//   gamma             Phi(l) = a ln(1 + l/b)
//   inverse_gaussian  Phi(l) = (sqrt(2 l sigma^2 + mu^2) - mu) / sigma^2
//   custom            user-supplied evaluators
enum class Family {
  identity,
  stable,
  tempered_stable,
  gamma,
  inverse_gaussian,
  custom
};

std::string family_name(Family f);

// Custom symbols must declare everything the named families derive:
// the exponent, its Levy tail, and the small-lambda limit of Phi/lambda.
struct CustomSymbol {
  std::function<double(double)> phi;
  std::function<double(double)> tail;
  double limit_phi_over_lambda = 0.0;  // may be +inf
  // Optional extras; absent ones fall back to quadrature / capability errors.
  std::function<double(double)> integrated_tail;  // int_0^z tail
  std::function<std::complex<double>(std::complex<double>)> phi_complex;
};

class SymbolSpec {
public:
  static SymbolSpec identity();
  static SymbolSpec stable(double alpha);
  static SymbolSpec tempered_stable(double alpha, double gamma);
  static SymbolSpec gamma(double a, double b);
  static SymbolSpec inverse_gaussian(double sigma, double mu);
  // Asserts the Laplace consistency of tail vs phi at construction.
  static SymbolSpec custom(CustomSymbol sym);

  Family family() const noexcept { return family_; }
  bool has_levy_tail() const noexcept { return family_ != Family::identity; }

  // Family parameters; throws DomainError when queried on the wrong family.
  double alpha() const;
  double tempering() const;
  double gamma_shape() const;
  double gamma_rate() const;
  double ig_sigma() const;
  double ig_mu() const;
  const CustomSymbol& custom_symbol() const;

  std::string describe() const;

private:
  SymbolSpec(Family f, double p0, double p1);
  explicit SymbolSpec(std::shared_ptr<const CustomSymbol> sym);

  Family family_;
  double p0_ = 0.0;
  double p1_ = 0.0;
  std::shared_ptr<const CustomSymbol> custom_;
};

// Phi(lambda), lambda >= 0.
double phi(const SymbolSpec& spec, double lambda);

// Phi on the right complex half-plane (principal branches); used by the
// Talbot inverter. Custom specs require phi_complex.
std::complex<double> phi(const SymbolSpec& spec, std::complex<double> lambda);

Eigen::ArrayXd phi(const SymbolSpec& spec, const Eigen::ArrayXd& lambdas);

// lim_{lambda -> 0+} Phi(lambda)/lambda; +inf reported explicitly.
double phi_over_lambda_limit(const SymbolSpec& spec);

enum class EvalMode { closed_form, quadrature };

// Levy tail Pi((z, inf)) plus its running integral int_0^z tail.
// The integral is what the convolution quadrature consumes; all named
// families have closed forms, custom specs fall back to quadrature.
class TailKernel {
public:
  explicit TailKernel(SymbolSpec spec);

  double operator()(double z) const;         // tail at z > 0
  double integrated(double z) const;         // int_0^z tail(u) du
  const SymbolSpec& spec() const noexcept { return spec_; }
  EvalMode mode() const noexcept { return mode_; }

private:
  SymbolSpec spec_;
  EvalMode mode_;
};

inline double levy_tail(const TailKernel& kernel, double z) { return kernel(z); }

}  // namespace plateau::symbols
