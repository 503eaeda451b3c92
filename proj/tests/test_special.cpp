#include <cmath>
#include <complex>
#include <functional>

#include <doctest.h>

#include "plateau/errors.hpp"
#include "plateau/special.hpp"
#include "plateau/symbols.hpp"

using namespace plateau::special;
using plateau::DomainError;
using plateau::symbols::SymbolSpec;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b,
               int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("mittag-leffler reduces to exp at alpha one") {
  for (double z : {-2.0, -1.0, -0.25, 0.5}) {
    CHECK(mittag_leffler(1.0, z) == doctest::Approx(std::exp(z)).epsilon(1e-12));
  }
}

TEST_CASE("mittag-leffler at one half is the scaled complementary error function") {
  // E_{1/2}(z) = e^{z^2} erfc(-z); covers both the series branch (z >= -1)
  // and the spectral-integral branch (z < -1).
  for (double x : {0.3, 0.7, 1.0, 1.5, 2.0, 4.0, 6.0, 10.0}) {
    const double exact = std::exp(x * x) * std::erfc(x);
    CHECK(mittag_leffler(0.5, -x) == doctest::Approx(exact).epsilon(1e-9));
  }
  CHECK(mittag_leffler(0.5, -1.0) ==
        doctest::Approx(0.427583576155807).epsilon(1e-12));
}

TEST_CASE("mittag-leffler of a negative argument lies in (0,1] and decreases") {
  for (double alpha : {0.3, 0.5, 0.8}) {
    double prev = mittag_leffler(alpha, 0.0);
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-14));
    for (double x = 0.25; x <= 64.0; x *= 2.0) {
      const double v = mittag_leffler(alpha, -x);
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("mittag-leffler rejects orders outside (0,1]") {
  CHECK_THROWS_AS(mittag_leffler(0.0, -1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler(1.5, -1.0), DomainError);
}

TEST_CASE("mainardi at one half is a gaussian") {
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::acos(-1.0));
  for (double r : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const double exact = inv_sqrt_pi * std::exp(-0.25 * r * r);
    CHECK(mainardi(0.5, r) == doctest::Approx(exact).epsilon(1e-10));
  }
  CHECK(mainardi(0.5, 1.0) ==
        doctest::Approx(0.43939128946772243).epsilon(1e-12));
}

TEST_CASE("mainardi is a density with the inverse-subordinator moments") {
  for (double alpha : {0.4, 0.5, 0.7}) {
    auto f = [&](double r) { return mainardi(alpha, r); };
    CHECK(simpson(f, 0.0, 60.0, 12000) == doctest::Approx(1.0).epsilon(1e-6));
    auto m1 = [&](double r) { return r * mainardi(alpha, r); };
    CHECK(simpson(m1, 0.0, 60.0, 12000) ==
          doctest::Approx(1.0 / std::tgamma(1.0 + alpha)).epsilon(1e-6));
    auto m2 = [&](double r) { return r * r * mainardi(alpha, r); };
    CHECK(simpson(m2, 0.0, 60.0, 12000) ==
          doctest::Approx(2.0 / std::tgamma(1.0 + 2.0 * alpha)).epsilon(1e-6));
  }
}

TEST_CASE("inverse stable density is the self-similar rescaling of mainardi") {
  const double alpha = 0.6, t = 2.0;
  const double scale = std::pow(t, -alpha);
  for (double x : {0.1, 0.7, 1.9}) {
    CHECK(inv_stable_density(alpha, t, x) ==
          doctest::Approx(scale * mainardi(alpha, x * scale)).epsilon(1e-12));
  }
  auto f = [&](double x) { return inv_stable_density(alpha, t, x); };
  CHECK(simpson(f, 0.0, 80.0, 16000) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("laplace inversion rules agree on smooth reference transforms") {
  auto one_over = [](std::complex<double> s) { return 1.0 / s; };
  auto shifted = [](std::complex<double> s) { return 1.0 / (s + 1.0); };
  auto sqrt_growth = [](std::complex<double> s) {
    return 1.0 / (s * std::sqrt(s));
  };
  const double g32 = std::tgamma(1.5);
  for (double t : {0.5, 1.0, 2.0}) {
    for (auto method : {InversionMethod::gaver_stehfest, InversionMethod::talbot}) {
      // Stehfest cancellation grows with t on decaying transforms;
      // 7.5e-5 relative at t = 2 is the measured worst case here.
      const double eps =
          (method == InversionMethod::gaver_stehfest) ? 2e-4 : 1e-9;
      CHECK(laplace_invert(one_over, t, method) ==
            doctest::Approx(1.0).epsilon(eps));
      CHECK(laplace_invert(shifted, t, method) ==
            doctest::Approx(std::exp(-t)).epsilon(eps));
      CHECK(laplace_invert(sqrt_growth, t, method) ==
            doctest::Approx(std::sqrt(t) / g32).epsilon(eps));
    }
  }
  auto real_sqrt = [](double s) { return 1.0 / (s * std::sqrt(s)); };
  CHECK(gaver_stehfest(real_sqrt, 1.0) ==
        doctest::Approx(1.0 / g32).epsilon(1e-6));
  CHECK(talbot([](std::complex<double> s) { return 1.0 / (s * s); }, 3.0) ==
        doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("moment ladder closed forms") {
  const auto identity = SymbolSpec::identity();
  CHECK(moment_phi_k(identity, 3, 2.0) ==
        doctest::Approx(8.0 / 6.0).epsilon(1e-14));
  const double alpha = 0.5;
  const auto stable = SymbolSpec::stable(alpha);
  for (int k : {1, 2, 3}) {
    for (double t : {0.3, 1.0, 2.5}) {
      const double exact =
          std::pow(t, alpha * k) / std::tgamma(alpha * k + 1.0);
      CHECK(moment_phi_k(stable, k, t) == doctest::Approx(exact).epsilon(1e-13));
    }
  }
  // k = 0 is the constant one; t = 0 collapses to the Kronecker delta.
  CHECK(moment_phi_k(stable, 0, 1.7) == 1.0);
  CHECK(moment_phi_k(stable, 2, 0.0) == 0.0);
  CHECK(moment_phi_k(stable, 0, 0.0) == 1.0);
}

TEST_CASE("numeric inversion reproduces the stable ladder") {
  const auto stable = SymbolSpec::stable(0.5);
  for (int k : {1, 2}) {
    for (double t : {0.5, 1.0, 2.0}) {
      const double exact = std::pow(t, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
      CHECK(moment_phi_k(stable, k, t, InversionMethod::gaver_stehfest) ==
            doctest::Approx(exact).epsilon(1e-6));
      CHECK(moment_phi_k(stable, k, t, InversionMethod::talbot) ==
            doctest::Approx(exact).epsilon(1e-9));
    }
  }
}

TEST_CASE("both inverters agree on the gamma ladder") {
  const auto spec = SymbolSpec::gamma(1.0, 1.0);
  for (int k : {1, 2}) {
    for (double t : {0.5, 1.0, 2.0}) {
      const double gs = moment_phi_k(spec, k, t, InversionMethod::gaver_stehfest);
      const double tb = moment_phi_k(spec, k, t, InversionMethod::talbot);
      CHECK(gs == doctest::Approx(tb).epsilon(1e-5));
      CHECK(moment_phi_k(spec, k, t) == doctest::Approx(gs).epsilon(1e-12));
      CHECK(gs > 0.0);
    }
  }
}

TEST_CASE("moment ladder rejects bad orders") {
  CHECK_THROWS_AS(moment_phi_k(SymbolSpec::stable(0.5), -1, 1.0), DomainError);
  CHECK_THROWS_AS(moment_phi_k(SymbolSpec::stable(0.5), 1, -0.5), DomainError);
}
