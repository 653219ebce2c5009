#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mollicrit/constants.hpp"
#include "mollicrit/quad.hpp"
#include "mollicrit/specfun.hpp"
#include "oracles.hpp"

using namespace mollicrit;
using specfun::BernoulliTable;
using cdouble = std::complex<double>;

TEST_CASE("bernoulli table fixed values") {
  const auto& tab = BernoulliTable::standard();
  CHECK(tab.at(0) == 1.0);
  CHECK(tab.at(1) == -0.5);
  CHECK(tab.at(2) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(tab.at(12) == doctest::Approx(-691.0 / 2730.0).epsilon(1e-15));
  for (int m = 1; m <= 33; ++m) CHECK(tab.at(2 * m + 1) == 0.0);
}

TEST_CASE("bernoulli recurrence to the table end") {
  // sum_{j<=m} C(m+1,j) B_j = 0 for every m >= 1; scale by the biggest term.
  const auto& tab = BernoulliTable::standard();
  std::vector<std::vector<long double>> binom(70);
  for (int n = 0; n < 70; ++n) {
    binom[n].assign(n + 1, 1.0L);
    for (int k = 1; k < n; ++k)
      binom[n][k] = binom[n - 1][k - 1] + binom[n - 1][k];
  }
  for (int m = 1; m <= 67; ++m) {
    long double acc = 0.0L, biggest = 0.0L;
    for (int j = 0; j <= m; ++j) {
      const long double term = binom[m + 1][j] * tab.at_ld(j);
      acc += term;
      biggest = std::max(biggest, std::abs(term));
    }
    CHECK(std::abs(static_cast<double>(acc / biggest)) <= 1e-14);
  }
}

TEST_CASE("gamma at classical points") {
  CHECK(std::abs(specfun::gamma_complex(1.0) - 1.0) <= 1e-14);
  CHECK(std::abs(specfun::gamma_complex(0.5) - std::sqrt(constants::pi)) <=
        1e-12 * std::sqrt(constants::pi));
  CHECK(std::abs(specfun::gamma_complex(5.0) - 24.0) <= 1e-11);
  // |Gamma(i)|^2 = pi / sinh(pi)
  const double want = std::sqrt(constants::pi / std::sinh(constants::pi));
  CHECK(std::abs(std::abs(specfun::gamma_complex(cdouble(0.0, 1.0))) - want) <=
        1e-12 * want);
}

TEST_CASE("gamma recurrence and reflection") {
  const cdouble s(3.7, 2.1);
  const cdouble v = specfun::gamma_complex(s);
  const cdouble v1 = specfun::gamma_complex(s + 1.0);
  CHECK(std::abs(v1 - s * v) <= 1e-12 * std::abs(s * v));

  const cdouble r(0.3, 0.4);
  const cdouble lhs = specfun::gamma_complex(r) * specfun::gamma_complex(1.0 - r);
  const cdouble rhs = constants::pi / std::sin(constants::pi * r);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
}

TEST_CASE("gamma poles rejected") {
  CHECK_THROWS_AS(specfun::gamma_complex(0.0), std::domain_error);
  CHECK_THROWS_AS(specfun::gamma_complex(-3.0), std::domain_error);
}

TEST_CASE("log gamma stays accurate high on the line") {
  // ln|Gamma(1/2+it)| = (ln pi - ln cosh(pi t)) / 2
  const double t = 100.0;
  const double want =
      0.5 * (std::log(constants::pi) - (constants::pi * t - std::log(2.0)));
  const double got = specfun::log_gamma(cdouble(0.5, t)).real();
  CHECK(std::abs(got - want) <= 1e-10 * std::abs(want));
  const cdouble small(1.7, -0.3);
  CHECK(std::abs(std::exp(specfun::log_gamma(small)) -
                 specfun::gamma_complex(small)) <=
        1e-12 * std::abs(specfun::gamma_complex(small)));
}

TEST_CASE("hyp2f1 logarithm case") {
  // F(1,1;2;z) = -log(1-z)/z
  const cdouble got = specfun::hyp2f1({1.0, 1.0, 2.0, 0.5});
  CHECK(std::abs(got - 2.0 * std::log(2.0)) <= 1e-12);
  const cdouble z(0.3, -0.2);
  const cdouble want = -std::log(1.0 - z) / z;
  CHECK(std::abs(specfun::hyp2f1({1.0, 1.0, 2.0, z}) - want) <=
        1e-12 * std::abs(want));
}

TEST_CASE("hyp2f1 degenerate argument") {
  CHECK(specfun::hyp2f1({cdouble(2.0, 1.0), cdouble(-0.5, 0.3),
                         cdouble(3.0, -1.0), 0.0}) == cdouble(1.0, 0.0));
  CHECK_THROWS_AS(specfun::hyp2f1({1.0, 1.0, 2.0, cdouble(0.8, 0.8)}),
                  std::domain_error);
  CHECK_THROWS_AS(specfun::hyp2f1({1.0, 1.0, cdouble(-2.0, 0.0), 0.5}),
                  std::invalid_argument);
}

TEST_CASE("hyp2f1 linear transformation identity") {
  // F(a,b;c;z) = (1-z)^(c-a-b) F(c-a,c-b;c;z), real z on (0,1)
  const auto both_sides = [](cdouble a, cdouble b, cdouble c, double z) {
    const cdouble lhs = specfun::hyp2f1({a, b, c, z});
    const cdouble rhs = std::pow(cdouble(1.0 - z, 0.0), c - a - b) *
                        specfun::hyp2f1({c - a, c - b, c, z});
    return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
  };
  const double z0 = 1.0 / (std::exp(0.05) + 1.0);
  const cdouble w(-3.0, 5.0);
  CHECK(both_sides(1.0, 1.0, 2.0 - w, z0) <= tol().hyp2f1_transform);

  oracles::Rng rng;
  for (int i = 0; i < 100; ++i) {
    const cdouble a(rng.uniform(-1.5, 1.5), rng.uniform(-2.0, 2.0));
    const cdouble b(rng.uniform(-1.5, 1.5), rng.uniform(-2.0, 2.0));
    const cdouble c(rng.uniform(1.0, 4.0), rng.uniform(-3.0, 3.0));
    const double z = rng.uniform(0.05, 0.45);
    CHECK(both_sides(a, b, c, z) <= tol().hyp2f1_transform);
  }
}

TEST_CASE("hyp2f1 with a very large lower parameter") {
  // the continuation work uses c = 2 - (1-s) log T / alpha, which reaches
  // |c| ~ 1e4..1e5; the series must still terminate and stay near 1
  const double L = std::log(200.0);
  const cdouble s(0.5, 200.0);
  const cdouble c = 2.0 - (1.0 - s) * L / 0.1;
  const double z = 1.0 / (std::exp(0.05) + 1.0);
  const cdouble f = specfun::hyp2f1({1.0, 1.0, c, z});
  CHECK(std::abs(f - 1.0) <= 1e-4);
  CHECK(std::abs(f - 1.0) >= 1e-7);  // and it is not returning exactly 1
}

TEST_CASE("incomplete beta trivial kernels") {
  CHECK(std::abs(specfun::incomplete_beta(0.37, 1.0, 1.0) - 0.37) <= 1e-14);
  CHECK(std::abs(specfun::incomplete_beta(1.0, 2.0, 3.0) - 1.0 / 12.0) <=
        1e-12 / 12.0);
  CHECK_THROWS_AS(specfun::incomplete_beta(1.2, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(specfun::incomplete_beta(-0.1, 1.0, 1.0), std::domain_error);
}

TEST_CASE("incomplete beta against a substituted quadrature") {
  // B_x(a,b) = int_{-ln x}^{inf} e^{-a v} (1-e^{-v})^{b-1} dv after w = e^{-v};
  // the substitution tames the oscillation of w^{a-1} near w = 0.
  const double alpha = 0.5, k = 1.0, x = 0.5;
  const cdouble a(1.0, -k / alpha), b(0.0, k / alpha);
  const double lo = -std::log(x), hi = 45.0;
  const int n = 200000;
  const double h = (hi - lo) / n;
  const auto f = [&](double v) -> cdouble {
    return std::exp(-a * v) * std::exp((b - 1.0) * std::log1p(-std::exp(-v)));
  };
  cdouble acc = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) acc += ((i % 2) ? 4.0 : 2.0) * f(lo + i * h);
  const cdouble oracle = acc * (h / 3.0);
  const cdouble got = specfun::incomplete_beta(x, a, b);
  CHECK(std::abs(got - oracle) <= 1e-9 * (1.0 + std::abs(oracle)));
}

TEST_CASE("incomplete beta completes to the gamma quotient") {
  const cdouble a(1.3, 0.2), b(0.7, -0.1);
  const cdouble complete = specfun::gamma_complex(a) *
                           specfun::gamma_complex(b) /
                           specfun::gamma_complex(a + b);
  const cdouble got = specfun::incomplete_beta(1.0, a, b);
  CHECK(std::abs(got - complete) <= tol().incbeta_rel * std::abs(complete));
}

TEST_CASE("zeta at even integers") {
  CHECK(std::abs(specfun::zeta_even(2) - constants::pi * constants::pi / 6.0) <=
        1e-14);
  const double pi4 = std::pow(constants::pi, 4);
  CHECK(std::abs(specfun::zeta_even(4) - pi4 / 90.0) <= 1e-14 * pi4);
  double direct = 0.0;
  for (long n = 1000000; n >= 1; --n)
    direct += std::pow(static_cast<double>(n), -8.0);
  CHECK(std::abs(specfun::zeta_even(8) - direct) <= 1e-12);
  CHECK_THROWS_AS(specfun::zeta_even(3), std::domain_error);
  CHECK_THROWS_AS(specfun::zeta_even(68), std::domain_error);
}

TEST_CASE("even zeta matches the odd-denominator series") {
  // zeta(k)(1 - 2^-k) = sum over odd n of n^-k; tail restored by the integral
  for (int k : {4, 6, 8}) {
    const double N = 20000.0;
    double partial = 0.0;
    for (long n = 19999; n >= 1; n -= 2)
      partial += std::pow(static_cast<double>(n), -k);
    const double tail = std::pow(N, 1.0 - k) / (2.0 * (k - 1.0));
    const double want = specfun::zeta_even(k) * (1.0 - std::pow(2.0, -k));
    CHECK(std::abs(want - partial - tail) <= 1e-12);
  }
}

TEST_CASE("gauss-legendre exactness and caching") {
  const auto& rule = quad::gauss_legendre(8);
  double wsum = 0.0;
  for (double w : rule.w) wsum += w;
  CHECK(std::abs(wsum - 2.0) <= 1e-14);
  // degree 15 is exact for an 8-node rule
  const double got =
      quad::gl_integrate([](double x) { return std::pow(x, 9.0); }, 0.0, 2.0, 8);
  CHECK(std::abs(got - 1024.0 / 10.0) <= 1e-12 * 102.4);
}

TEST_CASE("adaptive quadrature on a smooth integrand") {
  const auto res = quad::integrate_adaptive(
      [](double x) { return std::sin(x); }, 0.0, constants::pi, 1e-11);
  CHECK(res.converged);
  CHECK(std::abs(res.value - 2.0) <= 1e-10);
}
