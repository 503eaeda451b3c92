#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include <doctest.h>

#include <Eigen/Core>

#include "plateau/errors.hpp"
#include "plateau/symbols.hpp"

using plateau::DomainError;
using plateau::symbols::CustomSymbol;
using plateau::symbols::EvalMode;
using plateau::symbols::SymbolSpec;
using plateau::symbols::TailKernel;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b,
               int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Independent route from the tail to the exponent:
// Phi(lambda) = lambda^2 int_0^inf e^{-lambda z} T(z) dz with T = int_0^z tail.
// The cubic substitution z = x^3 tames the fractional power of T at zero.
double phi_from_integrated_tail(const TailKernel& kernel, double lambda) {
  const double zmax = 70.0 / lambda;
  const double xmax = std::cbrt(zmax);
  auto g = [&](double x) {
    const double z = x * x * x;
    if (z == 0.0) return 0.0;
    return 3.0 * x * x * std::exp(-lambda * z) * kernel.integrated(z);
  };
  return lambda * lambda * simpson(g, 0.0, xmax, 30000);
}

}  // namespace

TEST_CASE("identity symbol is multiplication by lambda") {
  const auto spec = SymbolSpec::identity();
  CHECK(!spec.has_levy_tail());
  CHECK(phi(spec, 0.0) == 0.0);
  CHECK(phi(spec, 3.25) == doctest::Approx(3.25).epsilon(1e-15));
  CHECK(phi_over_lambda_limit(spec) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(TailKernel(SymbolSpec::identity()), DomainError);
}

TEST_CASE("closed-form exponents match their definitions") {
  CHECK(phi(SymbolSpec::stable(0.5), 4.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(phi(SymbolSpec::stable(0.25), 16.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(phi(SymbolSpec::gamma(2.0, 3.0), 1.5) ==
        doctest::Approx(2.0 * std::log1p(1.5 / 3.0)).epsilon(1e-14));
  const double a = 0.6, g = 2.0;
  CHECK(phi(SymbolSpec::tempered_stable(a, g), 1.0) ==
        doctest::Approx(std::pow(1.0 + g, a) - std::pow(g, a)).epsilon(1e-13));
}

TEST_CASE("phi is zero at zero, increasing and midpoint-concave") {
  const SymbolSpec specs[] = {
      SymbolSpec::stable(0.3),          SymbolSpec::stable(0.8),
      SymbolSpec::tempered_stable(0.6, 2.0), SymbolSpec::gamma(1.5, 2.0),
      SymbolSpec::inverse_gaussian(1.2, 0.8)};
  for (const auto& spec : specs) {
    CHECK(phi(spec, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
    double prev = 0.0;
    for (double l = 0.25; l <= 64.0; l *= 2.0) {
      const double v = phi(spec, l);
      CHECK(v > prev);
      CHECK(phi(spec, 0.5 * (l + 2.0 * l)) >=
            0.5 * (v + phi(spec, 2.0 * l)) - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("vector and complex evaluations agree with the scalar one") {
  const auto spec = SymbolSpec::gamma(1.0, 1.0);
  Eigen::ArrayXd l(3);
  l << 0.5, 1.0, 7.0;
  const Eigen::ArrayXd v = phi(spec, l);
  for (int i = 0; i < 3; ++i)
    CHECK(v[i] == doctest::Approx(phi(spec, l[i])).epsilon(1e-15));
  const std::complex<double> z = phi(spec, std::complex<double>(2.0, 0.0));
  CHECK(z.real() == doctest::Approx(phi(spec, 2.0)).epsilon(1e-13));
  CHECK(std::abs(z.imag()) < 1e-13);
}

TEST_CASE("stable tail and integrated tail have the literature closed form") {
  const double alpha = 0.5;
  const TailKernel kernel{SymbolSpec::stable(alpha)};
  CHECK(kernel.mode() == EvalMode::closed_form);
  for (double z : {0.1, 1.0, 3.7}) {
    CHECK(kernel(z) ==
          doctest::Approx(std::pow(z, -alpha) / std::tgamma(1.0 - alpha))
              .epsilon(1e-13));
    CHECK(kernel.integrated(z) ==
          doctest::Approx(std::pow(z, 1.0 - alpha) / std::tgamma(2.0 - alpha))
              .epsilon(1e-13));
  }
}

TEST_CASE("gamma tail is the exponential integral") {
  // tail(z) = a E1(b z); at a = b = 1, E1(1) = 0.21938393439552029.
  const TailKernel kernel{SymbolSpec::gamma(1.0, 1.0)};
  CHECK(kernel(1.0) == doctest::Approx(0.21938393439552029).epsilon(1e-12));
  const double T1 = 0.21938393439552029 + 1.0 - std::exp(-1.0);
  CHECK(kernel.integrated(1.0) == doctest::Approx(T1).epsilon(1e-12));

  const TailKernel scaled{SymbolSpec::gamma(2.0, 4.0)};
  CHECK(scaled(0.25) == doctest::Approx(2.0 * 0.21938393439552029).epsilon(1e-12));
}

TEST_CASE("tempered stable tail matches direct quadrature of the density") {
  const double alpha = 0.6, g = 2.0;
  const TailKernel kernel{SymbolSpec::tempered_stable(alpha, g)};
  const double c = alpha / std::tgamma(1.0 - alpha);
  for (double z : {0.2, 0.7, 2.0}) {
    auto density = [&](double u) {
      return c * std::pow(u, -1.0 - alpha) * std::exp(-g * u);
    };
    const double direct = simpson(density, z, z + 60.0 / g, 40000);
    CHECK(kernel(z) == doctest::Approx(direct).epsilon(1e-7));
  }
}

TEST_CASE("inverse gaussian tail is continuous and decreasing") {
  const TailKernel kernel{SymbolSpec::inverse_gaussian(1.0, 1.0)};
  double prev = kernel(1e-3);
  double zprev = 1e-3;
  for (double z = 2e-3; z < 80.0; z *= 1.03) {
    const double v = kernel(z);
    CHECK(v < prev);
    CHECK(v > 0.0);
    // No jump anywhere: successive values stay within the secant scale.
    CHECK(prev - v < prev * (z / zprev));
    prev = v;
    zprev = z;
  }
}

TEST_CASE("tail kernels reproduce the exponent through the Laplace transform") {
  const SymbolSpec specs[] = {
      SymbolSpec::stable(0.3),          SymbolSpec::stable(0.5),
      SymbolSpec::stable(0.8),          SymbolSpec::tempered_stable(0.6, 2.0),
      SymbolSpec::gamma(1.5, 2.0),      SymbolSpec::inverse_gaussian(1.2, 0.8)};
  for (const auto& spec : specs) {
    const TailKernel kernel{spec};
    for (double lambda : {0.3, 1.0, 4.0}) {
      const double via_tail = phi_from_integrated_tail(kernel, lambda);
      CHECK(via_tail == doctest::Approx(phi(spec, lambda)).epsilon(5e-5));
    }
  }
}

TEST_CASE("integrated tail saturates at the phi-over-lambda limit") {
  CHECK(phi_over_lambda_limit(SymbolSpec::gamma(1.5, 2.0)) ==
        doctest::Approx(0.75).epsilon(1e-13));
  CHECK(phi_over_lambda_limit(SymbolSpec::inverse_gaussian(1.2, 0.8)) ==
        doctest::Approx(1.0 / 0.8).epsilon(1e-12));
  const double a = 0.6, g = 2.0;
  CHECK(phi_over_lambda_limit(SymbolSpec::tempered_stable(a, g)) ==
        doctest::Approx(a * std::pow(g, a - 1.0)).epsilon(1e-12));

  CHECK(TailKernel{SymbolSpec::gamma(1.5, 2.0)}.integrated(200.0) ==
        doctest::Approx(0.75).epsilon(1e-9));
  CHECK(TailKernel{SymbolSpec::tempered_stable(a, g)}.integrated(100.0) ==
        doctest::Approx(a * std::pow(g, a - 1.0)).epsilon(1e-9));
  CHECK(TailKernel{SymbolSpec::inverse_gaussian(1.2, 0.8)}.integrated(800.0) ==
        doctest::Approx(1.0 / 0.8).epsilon(1e-5));

  CHECK(std::isinf(phi_over_lambda_limit(SymbolSpec::stable(0.5))));
  CHECK(TailKernel{SymbolSpec::stable(0.5)}.integrated(1e8) > 1e3);

  // Small-lambda secant converges to the same limit.
  const auto spec = SymbolSpec::gamma(1.5, 2.0);
  CHECK(phi(spec, 1e-8) / 1e-8 == doctest::Approx(0.75).epsilon(1e-6));
}

TEST_CASE("custom symbols run through the quadrature fallback") {
  CustomSymbol sym;
  sym.phi = [](double l) { return std::sqrt(l); };
  sym.tail = [](double z) {
    return std::pow(z, -0.5) / std::tgamma(0.5);
  };
  sym.limit_phi_over_lambda = std::numeric_limits<double>::infinity();
  const auto spec = SymbolSpec::custom(sym);
  CHECK(spec.has_levy_tail());
  CHECK(phi(spec, 9.0) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(std::isinf(phi_over_lambda_limit(spec)));

  const TailKernel kernel{spec};
  CHECK(kernel.mode() == EvalMode::quadrature);
  for (double z : {0.4, 1.0, 2.5}) {
    const double exact = std::pow(z, 0.5) / std::tgamma(1.5);
    CHECK(kernel.integrated(z) == doctest::Approx(exact).epsilon(1e-6));
  }
}

TEST_CASE("parameter validation rejects out-of-range families") {
  CHECK_THROWS_AS(SymbolSpec::stable(0.0), DomainError);
  CHECK_THROWS_AS(SymbolSpec::stable(1.2), DomainError);
  CHECK_THROWS_AS(SymbolSpec::gamma(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(SymbolSpec::gamma(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(SymbolSpec::tempered_stable(0.5, -2.0), DomainError);
  CHECK_THROWS_AS(SymbolSpec::inverse_gaussian(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(SymbolSpec::stable(0.5).gamma_shape(), DomainError);

  CustomSymbol missing_tail;
  missing_tail.phi = [](double l) { return l; };
  missing_tail.limit_phi_over_lambda = 1.0;
  CHECK_THROWS_AS(SymbolSpec::custom(missing_tail), DomainError);
}
