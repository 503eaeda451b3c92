#include "plateau/symbols.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "plateau/quadrature.hpp"
#include "plateau/specfun.hpp"

namespace plateau::symbols {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}

// int_0^inf e^{-lz} tail(z) dz = phi(l)/l for a driftless, killing-free
// subordinator; enforced on custom symbols before they are accepted.
void check_laplace_consistency(const CustomSymbol& sym) {
  for (double l : {0.5, 2.0}) {
    const double lhs = quad::exp_sinh(
        [&](double z) { return std::exp(-l * z) * sym.tail(z); }, 1e-11);
    const double rhs = sym.phi(l) / l;
    if (!(std::abs(lhs - rhs) <= 1e-4 * (std::abs(rhs) + 1e-12)))
      throw DomainError(
          "custom symbol: Laplace transform of the declared tail does not "
          "match phi(lambda)/lambda");
  }
}

double ig_tail(double sigma, double mu, double z) {
  const double s2 = sigma * sigma;
  const double c = mu * mu / (2.0 * s2);
  const double x = c * z;
  if (x <= 25.0)
    return 2.0 * std::exp(-x) / std::sqrt(2.0 * kPi * s2 * z) -
           (mu / s2) * std::erfc(std::sqrt(x));
  // Both terms agree to leading order; switch to the erfcx expansion
  // 1/sqrt(pi x) - erfcx(sqrt(x)) = (1/sqrt(pi x)) sum (-1)^{k+1} (2k-1)!!/(2x)^k.
  double sum = 0.0;
  double term = -1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= -(2.0 * k - 1.0) / (2.0 * x);
    sum += term;
  }
  return (mu / s2) * std::exp(-x) * sum / std::sqrt(kPi * x);
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::identity: return "identity";
    case Family::stable: return "stable";
    case Family::tempered_stable: return "tempered_stable";
    case Family::gamma: return "gamma";
    case Family::inverse_gaussian: return "inverse_gaussian";
    case Family::custom: return "custom";
  }
  return "unknown";
}

SymbolSpec::SymbolSpec(Family f, double p0, double p1)
    : family_(f), p0_(p0), p1_(p1) {}

SymbolSpec::SymbolSpec(std::shared_ptr<const CustomSymbol> sym)
    : family_(Family::custom), custom_(std::move(sym)) {}

SymbolSpec SymbolSpec::identity() { return SymbolSpec(Family::identity, 0.0, 0.0); }

SymbolSpec SymbolSpec::stable(double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "stable symbol requires alpha in (0, 1)");
  return SymbolSpec(Family::stable, alpha, 0.0);
}

SymbolSpec SymbolSpec::tempered_stable(double alpha, double gamma) {
  require(alpha > 0.0 && alpha < 1.0,
          "tempered_stable symbol requires alpha in (0, 1)");
  require(gamma > 0.0 && std::isfinite(gamma),
          "tempered_stable symbol requires gamma > 0");
  return SymbolSpec(Family::tempered_stable, alpha, gamma);
}

SymbolSpec SymbolSpec::gamma(double a, double b) {
  require(a > 0.0 && std::isfinite(a), "gamma symbol requires a > 0");
  require(b > 0.0 && std::isfinite(b), "gamma symbol requires b > 0");
  return SymbolSpec(Family::gamma, a, b);
}

SymbolSpec SymbolSpec::inverse_gaussian(double sigma, double mu) {
  require(sigma != 0.0 && std::isfinite(sigma),
          "inverse_gaussian symbol requires sigma != 0");
  require(mu > 0.0 && std::isfinite(mu),
          "inverse_gaussian symbol requires mu > 0");
  return SymbolSpec(Family::inverse_gaussian, sigma, mu);
}

SymbolSpec SymbolSpec::custom(CustomSymbol sym) {
  require(static_cast<bool>(sym.phi), "custom symbol requires a phi evaluator");
  require(static_cast<bool>(sym.tail), "custom symbol requires a tail evaluator");
  require(sym.limit_phi_over_lambda > 0.0,
          "custom symbol must declare lim phi(lambda)/lambda > 0 (may be +inf)");
  check_laplace_consistency(sym);
  return SymbolSpec(std::make_shared<const CustomSymbol>(std::move(sym)));
}

double SymbolSpec::alpha() const {
  require(family_ == Family::stable || family_ == Family::tempered_stable,
          "alpha is a stable / tempered_stable parameter");
  return p0_;
}

double SymbolSpec::tempering() const {
  require(family_ == Family::tempered_stable,
          "tempering is a tempered_stable parameter");
  return p1_;
}

double SymbolSpec::gamma_shape() const {
  require(family_ == Family::gamma, "shape is a gamma-family parameter");
  return p0_;
}

double SymbolSpec::gamma_rate() const {
  require(family_ == Family::gamma, "rate is a gamma-family parameter");
  return p1_;
}

double SymbolSpec::ig_sigma() const {
  require(family_ == Family::inverse_gaussian,
          "sigma is an inverse_gaussian parameter");
  return p0_;
}

double SymbolSpec::ig_mu() const {
  require(family_ == Family::inverse_gaussian,
          "mu is an inverse_gaussian parameter");
  return p1_;
}

const CustomSymbol& SymbolSpec::custom_symbol() const {
  require(custom_ != nullptr, "not a custom symbol");
  return *custom_;
}

std::string SymbolSpec::describe() const {
  std::ostringstream os;
  os << family_name(family_);
  switch (family_) {
    case Family::stable: os << "(alpha=" << p0_ << ")"; break;
    case Family::tempered_stable:
      os << "(alpha=" << p0_ << ",gamma=" << p1_ << ")";
      break;
    case Family::gamma: os << "(a=" << p0_ << ",b=" << p1_ << ")"; break;
    case Family::inverse_gaussian:
      os << "(sigma=" << p0_ << ",mu=" << p1_ << ")";
      break;
    default: break;
  }
  return os.str();
}

double phi(const SymbolSpec& spec, double lambda) {
  require(lambda >= 0.0 && std::isfinite(lambda), "phi requires lambda >= 0");
  switch (spec.family()) {
    case Family::identity:
      return lambda;
    case Family::stable:
      return std::pow(lambda, spec.alpha());
    case Family::tempered_stable: {
      // gamma^alpha * ((1 + lambda/gamma)^alpha - 1), stable as lambda -> 0
      const double a = spec.alpha();
      const double g = spec.tempering();
      return std::pow(g, a) * std::expm1(a * std::log1p(lambda / g));
    }
    case Family::gamma:
      return spec.gamma_shape() * std::log1p(lambda / spec.gamma_rate());
    case Family::inverse_gaussian: {
      const double s2 = spec.ig_sigma() * spec.ig_sigma();
      const double mu = spec.ig_mu();
      return 2.0 * lambda / (std::sqrt(2.0 * lambda * s2 + mu * mu) + mu);
    }
    case Family::custom:
      return spec.custom_symbol().phi(lambda);
  }
  throw DomainError("unknown symbol family");
}

std::complex<double> phi(const SymbolSpec& spec, std::complex<double> lambda) {
  using C = std::complex<double>;
  switch (spec.family()) {
    case Family::identity:
      return lambda;
    case Family::stable:
      return std::pow(lambda, C(spec.alpha(), 0.0));
    case Family::tempered_stable: {
      const double a = spec.alpha();
      const double g = spec.tempering();
      return std::pow(lambda + g, C(a, 0.0)) - std::pow(g, a);
    }
    case Family::gamma:
      return spec.gamma_shape() * std::log(1.0 + lambda / spec.gamma_rate());
    case Family::inverse_gaussian: {
      const double s2 = spec.ig_sigma() * spec.ig_sigma();
      const double mu = spec.ig_mu();
      return 2.0 * lambda / (std::sqrt(2.0 * lambda * s2 + mu * mu) + mu);
    }
    case Family::custom: {
      const auto& sym = spec.custom_symbol();
      if (!sym.phi_complex)
        throw CapabilityError(
            "custom symbol does not provide a complex-plane phi evaluator");
      return sym.phi_complex(lambda);
    }
  }
  throw DomainError("unknown symbol family");
}

Eigen::ArrayXd phi(const SymbolSpec& spec, const Eigen::ArrayXd& lambdas) {
  Eigen::ArrayXd out(lambdas.size());
  for (Eigen::Index i = 0; i < lambdas.size(); ++i)
    out[i] = phi(spec, lambdas[i]);
  return out;
}

double phi_over_lambda_limit(const SymbolSpec& spec) {
  switch (spec.family()) {
    case Family::identity:
      return 1.0;
    case Family::stable:
      return std::numeric_limits<double>::infinity();
    case Family::tempered_stable: {
      const double a = spec.alpha();
      return a * std::pow(spec.tempering(), a - 1.0);
    }
    case Family::gamma:
      return spec.gamma_shape() / spec.gamma_rate();
    case Family::inverse_gaussian:
      return 1.0 / spec.ig_mu();
    case Family::custom:
      return spec.custom_symbol().limit_phi_over_lambda;
  }
  throw DomainError("unknown symbol family");
}

TailKernel::TailKernel(SymbolSpec spec)
    : spec_(std::move(spec)), mode_(EvalMode::closed_form) {
  if (!spec_.has_levy_tail())
    throw DomainError(
        "identity symbol is pure drift: it has no Levy tail to evaluate");
  if (spec_.family() == Family::custom &&
      !spec_.custom_symbol().integrated_tail)
    mode_ = EvalMode::quadrature;
}

double TailKernel::operator()(double z) const {
  require(z > 0.0 && std::isfinite(z), "levy tail requires z > 0");
  switch (spec_.family()) {
    case Family::stable: {
      const double a = spec_.alpha();
      return std::pow(z, -a) / std::tgamma(1.0 - a);
    }
    case Family::tempered_stable: {
      // Integrating the density by parts collapses the usual two-term
      // expression to a single incomplete gamma, which stays accurate
      // in the far tail where the printed form cancels.
      const double a = spec_.alpha();
      const double g = spec_.tempering();
      return a * std::pow(g, a) * specfun::upper_gamma_neg(a, g * z) /
             std::tgamma(1.0 - a);
    }
    case Family::gamma:
      return spec_.gamma_shape() *
             specfun::exp_integral_e1(spec_.gamma_rate() * z);
    case Family::inverse_gaussian:
      return ig_tail(spec_.ig_sigma(), spec_.ig_mu(), z);
    case Family::custom:
      return spec_.custom_symbol().tail(z);
    default:
      break;
  }
  throw DomainError("no levy tail for this family");
}

double TailKernel::integrated(double z) const {
  require(z >= 0.0 && std::isfinite(z), "integrated tail requires z >= 0");
  if (z == 0.0) return 0.0;
  switch (spec_.family()) {
    case Family::stable: {
      const double a = spec_.alpha();
      return std::pow(z, 1.0 - a) / std::tgamma(2.0 - a);
    }
    case Family::tempered_stable: {
      const double a = spec_.alpha();
      const double g = spec_.tempering();
      return z * (*this)(z) +
             a * std::pow(g, a - 1.0) * specfun::gamma_p(1.0 - a, g * z);
    }
    case Family::gamma: {
      const double a = spec_.gamma_shape();
      const double b = spec_.gamma_rate();
      return a * (z * specfun::exp_integral_e1(b * z) - std::expm1(-b * z) / b);
    }
    case Family::inverse_gaussian: {
      const double mu = spec_.ig_mu();
      const double s2 = spec_.ig_sigma() * spec_.ig_sigma();
      const double c = mu * mu / (2.0 * s2);
      return z * (*this)(z) + std::erf(std::sqrt(c * z)) / mu;
    }
    case Family::custom: {
      const auto& sym = spec_.custom_symbol();
      if (sym.integrated_tail) return sym.integrated_tail(z);
      return quad::tanh_sinh([&](double u) { return sym.tail(u); }, 0.0, z,
                             1e-11);
    }
    default:
      break;
  }
  throw DomainError("no levy tail for this family");
}

}  // namespace plateau::symbols
