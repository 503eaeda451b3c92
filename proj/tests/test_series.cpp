#include <cmath>
#include <limits>

#include <doctest.h>

#include "plateau/errors.hpp"
#include "plateau/mc.hpp"
#include "plateau/series.hpp"
#include "plateau/special.hpp"
#include "plateau/symbols.hpp"

using namespace plateau::series;
using plateau::DomainError;
using plateau::mc::logistic_solution;
using plateau::special::mittag_leffler;
using plateau::symbols::SymbolSpec;

TEST_CASE("fractional binomials reduce to pascal at order one") {
  long long pascal[11][11] = {};
  for (int k = 0; k <= 10; ++k) {
    pascal[k][0] = pascal[k][k] = 1;
    for (int i = 1; i < k; ++i)
      pascal[k][i] = pascal[k - 1][i - 1] + pascal[k - 1][i];
  }
  for (int k = 0; k <= 10; ++k)
    for (int i = 0; i <= k; ++i)
      CHECK(frac_binom(1.0, k, i) ==
            doctest::Approx(double(pascal[k][i])).epsilon(1e-11));
}

TEST_CASE("fractional binomials are symmetric and hit the four-over-pi value") {
  const double pi = std::acos(-1.0);
  CHECK(frac_binom(0.5, 2, 1) == doctest::Approx(4.0 / pi).epsilon(1e-13));
  for (double alpha : {0.3, 0.5, 0.9}) {
    for (int k = 1; k <= 8; ++k) {
      for (int i = 0; i <= k; ++i) {
        CHECK(frac_binom(alpha, k, i) ==
              doctest::Approx(frac_binom(alpha, k, k - i)).epsilon(1e-12));
        CHECK(frac_binom(alpha, k, i) > 0.0);
      }
    }
  }
}

TEST_CASE("order-one ladder at the symmetric point is the classical one") {
  const auto c = frac_euler_numbers(1.0, 0.5, 10);
  CHECK(c.kind == CoeffKind::classical_euler);
  CHECK(c.order() == 10);
  const double expected[6] = {0.5, 0.25, 0.0, -0.125, 0.0, 0.25};
  for (int k = 0; k <= 5; ++k)
    CHECK(std::abs(c.e[k] - expected[k]) < 1e-12);
  // Odd-index tail keeps alternating, even entries past zero vanish.
  CHECK(std::abs(c.e[6]) < 1e-12);
  CHECK(std::abs(c.e[8]) < 1e-12);
}

TEST_CASE("half-order ladder matches the printed low-order values") {
  const double pi = std::acos(-1.0);
  const auto c = frac_euler_numbers(0.5, 0.5, 6);
  CHECK(c.kind == CoeffKind::frac_euler_alpha);
  CHECK(c.e[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c.e[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(c.e[2]) < 1e-14);
  CHECK(c.e[3] == doctest::Approx(-1.0 / (4.0 * pi)).epsilon(1e-12));
  CHECK(std::abs(c.e[4]) < 1e-13);
  CHECK(c.e[5] == doctest::Approx(0.06754745576155852).epsilon(1e-10));
}

TEST_CASE("the literal recursion variant differs from the self-consistent one") {
  const auto fixed = frac_euler_numbers(1.0, 0.5, 6, false);
  const auto literal = frac_euler_numbers(1.0, 0.5, 6, true);
  // The i = 0 term is what the order-one reduction needs; dropping it
  // breaks the classical ladder.
  CHECK(std::abs(fixed.e[3] + 0.125) < 1e-12);
  CHECK(std::abs(literal.e[3] + 0.125) > 1e-3);
}

TEST_CASE("ladder evaluation reproduces the logistic flow for the local symbol") {
  const auto spec = SymbolSpec::identity();
  const auto c = frac_euler_numbers(1.0, 0.3, 24);
  for (double t : {0.05, 0.2, 0.5, 1.0}) {
    const auto v = eval_series(c, spec, t);
    CHECK(v.value ==
          doctest::Approx(logistic_solution(0.3, t)).epsilon(1e-9));
    CHECK(v.trunc_bound >= 0.0);
  }
}

TEST_CASE("geometric ladders sum to the mittag-leffler function") {
  const double a = 1.0, alpha = 0.5;
  const auto c = geometric_coefficients(a, alpha, 80);
  CHECK(c.kind == CoeffKind::geometric);
  for (int k = 0; k <= 6; ++k)
    CHECK(c.e[k] == doctest::Approx(std::pow(-a, k)).epsilon(1e-14));
  const auto spec = SymbolSpec::stable(alpha);
  for (double t : {0.1, 0.4, 0.9}) {
    const auto v = eval_series(c, spec, t);
    const double exact = mittag_leffler(alpha, -a * std::pow(t, alpha));
    CHECK(v.value == doctest::Approx(exact).epsilon(1e-9));
    CHECK(std::abs(v.value - exact) <= 10.0 * v.trunc_bound + 1e-9);
  }
}

TEST_CASE("alternating tail series evaluates the logistic flow at order one") {
  const auto w = west_series(1.0, 0.6, 1.0, 200);
  CHECK(w.value == doctest::Approx(logistic_solution(0.6, 1.0)).epsilon(1e-10));
  CHECK(w.tail_bound < 1e-12);
  CHECK(logistic_solution(0.6, 1.0) ==
        doctest::Approx(0.8030496866860281).epsilon(1e-12));
}

TEST_CASE("alternating tail series starts at the initial value") {
  for (double u0 : {0.55, 0.8, 0.95}) {
    const auto w = west_series(0.5, u0, 0.0, 220);
    CHECK(w.value == doctest::Approx(u0).epsilon(1e-10));
  }
}

TEST_CASE("alternating tail series needs a ratio inside the unit disc") {
  CHECK_THROWS_AS(west_series(0.5, 0.5, 1.0, 50), DomainError);
  CHECK_THROWS_AS(west_series(0.5, 0.3, 1.0, 50), DomainError);
}

TEST_CASE("radius estimates recover the three reference behaviours") {
  SeriesCoefficients ones;
  ones.kind = CoeffKind::custom;
  ones.e = Eigen::ArrayXd::Ones(201);
  const auto r1 = estimate_radius(ones);
  CHECK(r1.r == doctest::Approx(1.0).epsilon(0.05));

  // Logistic ladder in its natural variable: nearest pole at pi.
  const double pi = std::acos(-1.0);
  const auto ladder = frac_euler_numbers(1.0, 0.5, 60);
  const auto r2 = estimate_radius(ladder);
  CHECK(r2.r == doctest::Approx(pi).epsilon(0.15));

  const auto geo = geometric_coefficients(1.0, 0.5, 60);
  const auto r3 = estimate_radius(geo);
  CHECK(std::isinf(r3.r));
}
