#include <doctest.h>

#include <cmath>
#include <limits>

#include "subfp/quadrature.hpp"

using namespace subfp;

static_assert(rule_node_count(QuadratureRule::newton_cotes_2) == 1);
static_assert(rule_node_count(QuadratureRule::newton_cotes_4) == 3);
static_assert(rule_node_count(QuadratureRule::newton_cotes_6) == 5);
static_assert(rule_node_count(QuadratureRule::gauss_legendre_10) == 10);
static_assert(rule_polynomial_degree(QuadratureRule::newton_cotes_2) == 1);
static_assert(rule_polynomial_degree(QuadratureRule::newton_cotes_4) == 3);
static_assert(rule_polynomial_degree(QuadratureRule::newton_cotes_6) == 5);
static_assert(rule_polynomial_degree(QuadratureRule::gauss_legendre_10) == 19);

TEST_CASE("single panels integrate polynomials up to the rule degree exactly") {
  auto lin = [](double x) { return 2.0 * x + 1.0; };
  auto cub = [](double x) { return x * x * x; };
  auto quin = [](double x) { return x * x * x * x * x; };
  auto p19 = [](double x) { return std::pow(x, 19); };

  CHECK(integrate_finite(lin, 0.0, 1.0, QuadratureRule::newton_cotes_2) ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK(integrate_finite(cub, 0.0, 1.0, QuadratureRule::newton_cotes_4) ==
        doctest::Approx(0.25).epsilon(1e-15));
  CHECK(integrate_finite(quin, 0.0, 1.0, QuadratureRule::newton_cotes_6) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(integrate_finite(p19, 0.0, 1.0, QuadratureRule::gauss_legendre_10) ==
        doctest::Approx(0.05).epsilon(1e-13));
}

TEST_CASE("rules one degree past their exactness show the textbook defect") {
  auto sq = [](double x) { return x * x; };
  auto qua = [](double x) { return x * x * x * x; };
  // Midpoint of x^2 on [0,1] evaluates to 1/4, not 1/3.
  CHECK(integrate_finite(sq, 0.0, 1.0, QuadratureRule::newton_cotes_2) ==
        doctest::Approx(0.25).epsilon(1e-15));
  // The 3-node open rule on x^4: 2/3*(1/4)^4 - 1/3*(1/2)^4 + 2/3*(3/4)^4.
  CHECK(integrate_finite(qua, 0.0, 1.0, QuadratureRule::newton_cotes_4) ==
        doctest::Approx(148.0 / 768.0).epsilon(1e-15));
}

TEST_CASE("composite panels converge on a smooth integral") {
  auto f = [](double x) { return std::sin(x); };
  const double pi = M_PI;
  CHECK(integrate_finite(f, 0.0, pi, QuadratureRule::newton_cotes_2, 1024) ==
        doctest::Approx(2.0).epsilon(1e-5));
  CHECK(integrate_finite(f, 0.0, pi, QuadratureRule::newton_cotes_4, 64) ==
        doctest::Approx(2.0).epsilon(1e-6));
  CHECK(integrate_finite(f, 0.0, pi, QuadratureRule::newton_cotes_6, 64) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK(integrate_finite(f, 0.0, pi, QuadratureRule::gauss_legendre_10, 8) ==
        doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("degenerate and invalid finite intervals") {
  auto f = [](double x) { return x; };
  CHECK(integrate_finite(f, 2.0, 2.0, QuadratureRule::gauss_legendre_10) == 0.0);
  CHECK_THROWS_AS(integrate_finite(f, 0.0, 1.0, QuadratureRule::newton_cotes_2, 0),
                  NumericalError);
  CHECK_THROWS_AS(
      integrate_finite(f, 0.0, std::numeric_limits<double>::infinity(),
                       QuadratureRule::newton_cotes_2),
      NumericalError);
}

TEST_CASE("a non-finite integrand value is reported, not averaged over") {
  auto f = [](double x) { return 1.0 / x; };  // pole at the NC4 center node
  CHECK_THROWS_AS(integrate_finite(f, -1.0, 1.0, QuadratureRule::newton_cotes_4),
                  NumericalError);
}

TEST_CASE("half-line integrals reach the requested accuracy") {
  auto gauss = [](double z) { return std::exp(-0.5 * z * z); };
  auto zgauss = [](double z) { return z * std::exp(-0.5 * z * z); };
  auto lorentz = [](double z) { return 1.0 / (1.0 + z * z); };

  CHECK(integrate_semi_infinite(gauss, 0.0) ==
        doctest::Approx(1.2533141373155003).epsilon(1e-12));
  CHECK(integrate_semi_infinite(zgauss, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // Slow 1/z^2 decay forces many doubling panels before the tail is spent.
  CHECK(integrate_semi_infinite(lorentz, 0.0) ==
        doctest::Approx(M_PI / 2.0).epsilon(1e-10));
  // Offset left endpoint against the complementary error function.
  const double expected = std::sqrt(M_PI / 2.0) * std::erfc(3.0 / std::sqrt(2.0));
  CHECK(integrate_semi_infinite(gauss, 3.0) ==
        doctest::Approx(expected).epsilon(1e-11));
}

TEST_CASE("half-line integration refuses non-integrable tails") {
  auto harmonic = [](double z) { return 1.0 / z; };
  CHECK_THROWS_AS(integrate_semi_infinite(harmonic, 1.0), NumericalError);
  auto f = [](double z) { return std::exp(-z); };
  CHECK_THROWS_AS(integrate_semi_infinite(f, std::numeric_limits<double>::quiet_NaN()),
                  NumericalError);
  CHECK_THROWS_AS(integrate_semi_infinite(f, 0.0, -1.0), NumericalError);
}
