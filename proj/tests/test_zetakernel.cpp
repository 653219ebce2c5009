#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"
#include "mollicrit/constants.hpp"
#include "mollicrit/parallel.hpp"
#include "mollicrit/zetakernel.hpp"
#include "oracles.hpp"

using namespace mollicrit;
using cdouble = std::complex<double>;

TEST_CASE("zeta at reference points") {
  CHECK(std::abs(zetakernel::zeta(2.0) - constants::pi * constants::pi / 6.0) <=
        1e-12);
  // Apery's constant
  CHECK(std::abs(zetakernel::zeta(3.0) - 1.2020569031595943) <= 1e-12);
  CHECK(std::abs(zetakernel::zeta(-2.0)) <= 1e-12);
  CHECK(std::abs(zetakernel::zeta(0.0) + 0.5) <= 1e-12);
  CHECK(std::abs(zetakernel::zeta(cdouble(0.5, 14.134725))) <= 1e-5);
  CHECK_THROWS_AS(zetakernel::zeta(1.0), std::domain_error);
}

TEST_CASE("zeta against a padded direct sum") {
  // at Re s = 4 the truncated series plus integral tail is accurate enough
  const cdouble s(4.0, 7.3);
  cdouble direct = 0.0;
  for (long n = 40000; n >= 1; --n)
    direct += std::pow(cdouble(static_cast<double>(n), 0.0), -s);
  const cdouble tail = std::pow(cdouble(40000.5, 0.0), 1.0 - s) / (s - 1.0);
  CHECK(std::abs(zetakernel::zeta(s) - direct - tail) <= 1e-10);
}

TEST_CASE("completed prefactor at fixed points") {
  CHECK(std::abs(zetakernel::h_factor(1.0)) == 0.0);
  CHECK(std::abs(zetakernel::h_factor(2.0) + 1.0 / constants::pi) <= 1e-13);
  // continuity limit at the gamma pole: s Gamma(s/2) -> 2
  CHECK(std::abs(zetakernel::h_factor(0.0) - 1.0) <= 1e-12);
  const cdouble s(0.5, 20.0);
  const cdouble xi_via_parts = zetakernel::h_factor(s) * zetakernel::zeta(s);
  CHECK(std::abs(xi_via_parts - zetakernel::xi(s)) <=
        1e-10 * std::abs(zetakernel::xi(s)));
}

TEST_CASE("log prefactor matches the direct form") {
  const cdouble s(0.7, 30.0);
  CHECK(std::abs(std::exp(zetakernel::log_h_factor(s)) -
                 zetakernel::h_factor(s)) <=
        1e-11 * std::abs(zetakernel::h_factor(s)));
  CHECK_THROWS_AS(zetakernel::log_h_factor(1.0), std::domain_error);
}

TEST_CASE("xi functional equation across the strip") {
  oracles::Rng rng;
  double worst = 0.0;
  for (int i = 0; i < 60; ++i) {
    const cdouble s(rng.uniform(-0.4, 1.4), rng.uniform(0.05, 45.0));
    const cdouble a = zetakernel::xi(s), b = zetakernel::xi(1.0 - s);
    worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a)));
  }
  CHECK(worst <= tol().xi_funceq_rel);
}

TEST_CASE("xi special values") {
  CHECK(std::abs(zetakernel::xi(0.0) + 0.5) <= 1e-12);
  CHECK(std::abs(zetakernel::xi(1.0) + 0.5) <= 1e-12);
  CHECK(std::abs(zetakernel::xi(0.5).imag()) <= 1e-14);
  const cdouble z(0.5, 14.134725);
  CHECK(std::abs(zetakernel::xi(z)) <=
        1e-6 * std::abs(zetakernel::h_factor(z)));
}

TEST_CASE("xi is continuous across the reflection seam") {
  // values left of Re s = -1/2 come from the reflected point; flanking
  // evaluations must still satisfy the functional equation
  for (double eps : {0.01, 0.001}) {
    const cdouble left(-0.5 - eps, 12.0), right(-0.5 + eps, 12.0);
    CHECK(std::abs(zetakernel::xi(left) - zetakernel::xi(1.0 - left)) <=
          1e-10 * (1.0 + std::abs(zetakernel::xi(left))));
    CHECK(std::abs(zetakernel::xi(right) - zetakernel::xi(1.0 - right)) <=
          1e-10 * (1.0 + std::abs(zetakernel::xi(right))));
    CHECK(std::abs(zetakernel::xi(left) - zetakernel::xi(right)) <=
          0.1 * std::abs(zetakernel::xi(left)));
  }
}

TEST_CASE("hardy function modulus and first sign change") {
  CHECK(std::abs(std::abs(zetakernel::hardy_z(10.0)) -
                 std::abs(zetakernel::zeta(cdouble(0.5, 10.0)))) <= 1e-12);
  CHECK(std::abs(zetakernel::hardy_z(14.134725)) <= 1e-5);
  CHECK(zetakernel::hardy_z(14.0) * zetakernel::hardy_z(14.2) < 0.0);
}

TEST_CASE("hardy grid equals pointwise evaluation") {
  const auto grid = zetakernel::hardy_z_grid(12.0, 0.37, 40);
  REQUIRE(grid.size() == 40);
  for (int j = 0; j < 40; ++j) {
    const double want = zetakernel::hardy_z(12.0 + 0.37 * j);
    CHECK(std::abs(grid[j] - want) <= 1e-11 * (1.0 + std::abs(want)));
  }
  // worker count must not change a single bit
  par::set_thread_count(1);
  const auto one = zetakernel::hardy_z_grid(5.0, 0.11, 257);
  par::set_thread_count(4);
  const auto four = zetakernel::hardy_z_grid(5.0, 0.11, 257);
  CHECK(one == four);
}

TEST_CASE("zero counting at desk heights") {
  const auto rep15 = zetakernel::count_zeros({1e-3, 15.0});
  CHECK(rep15.n_sign_changes == 1);
  REQUIRE(rep15.zero_locations.size() == 1);
  CHECK(std::abs(rep15.zero_locations[0] - 14.134725) <= 1e-4);

  const auto thin = zetakernel::count_zeros({50.0, 50.0001});
  CHECK(thin.n_sign_changes == 0);
  CHECK(std::abs(thin.n_rvm) <= 0.01);

  for (double hi : {50.0, 100.0, 200.0}) {
    const auto rep = zetakernel::count_zeros({1e-3, hi});
    CHECK(std::abs(rep.s_residual) < 2.0);
  }
  const auto rep100 = zetakernel::count_zeros({1e-3, 100.0});
  CHECK(rep100.n_sign_changes == 29);

  CHECK_THROWS_AS(zetakernel::count_zeros({0.0, 10.0}), std::domain_error);
  CHECK_THROWS_AS(zetakernel::count_zeros({1.0, 2e5}), std::domain_error);
}

TEST_CASE("sign changes line up with small zeta modulus") {
  // every refined location is a genuine dip of |zeta(1/2+it)|
  const auto rep = zetakernel::count_zeros({1e-3, 60.0});
  for (double t : rep.zero_locations)
    CHECK(std::abs(zetakernel::zeta(cdouble(0.5, t))) <= 1e-4);
}

TEST_CASE("zero report serialization") {
  const auto rep = zetakernel::count_zeros({1e-3, 15.0});
  const auto csv = zetakernel::report_to_csv(rep);
  CHECK(csv.rfind("t_lo,t_hi,n_sign_changes,n_rvm,s_residual\r\n", 0) == 0);
  const auto js = zetakernel::report_to_json(rep);
  CHECK(js.find("\"n_sign_changes\": 1") != std::string::npos);
}

TEST_CASE("xi derivatives by contour") {
  const cdouble s(0.8, 3.0);
  const auto d0 = zetakernel::xi_derivative_ex(s, 0);
  CHECK(std::abs(d0.value - zetakernel::xi(s)) <=
        1e-10 * (1.0 + std::abs(d0.value)));
  CHECK(d0.node_agreement <= 1e-9);

  const cdouble hi(0.5, 30.0);
  const auto d1 = zetakernel::xi_derivative_ex(hi, 1);
  // purely imaginary on the half line
  CHECK(std::abs(d1.value.real()) <= 1e-8 * std::abs(d1.value));
  const cdouble fd = oracles::central_diff(
      [](cdouble w) { return zetakernel::xi(w); }, hi, 1e-4);
  CHECK(std::abs(d1.value - fd) <= 1e-6 * std::abs(fd));

  CHECK_THROWS_AS(zetakernel::xi_derivative(s, 41), std::domain_error);
  CHECK_THROWS_AS(zetakernel::xi_derivative(s, 1, 0.7), std::domain_error);
}

TEST_CASE("batched xi derivatives agree with single calls") {
  const cdouble s(0.6, 8.0);
  const auto batch = zetakernel::xi_derivatives_upto(s, 5);
  REQUIRE(batch.size() == 6);
  for (int k = 0; k <= 5; ++k) {
    const cdouble single = zetakernel::xi_derivative(s, k);
    CHECK(std::abs(batch[k] - single) <= 1e-9 * (1.0 + std::abs(single)));
  }
}

TEST_CASE("scaled xi derivatives undo the damping factor") {
  const cdouble s(0.6, 8.0);
  const double c = zetakernel::log_h_factor(s).real();
  const auto plain = zetakernel::xi_derivatives_upto(s, 3);
  const auto scaled = zetakernel::xi_derivatives_upto_scaled(s, 3, c);
  for (int k = 0; k <= 3; ++k) {
    const cdouble undone = scaled[k] * std::exp(cdouble(c, 0.0));
    CHECK(std::abs(undone - plain[k]) <= 1e-9 * (1.0 + std::abs(plain[k])));
  }
  // and it stays finite where xi itself underflows
  const cdouble high(0.5, 400.0);
  const double ch = zetakernel::log_h_factor(high).real();
  const auto hs = zetakernel::xi_derivatives_upto_scaled(high, 3, ch);
  for (const auto& v : hs) {
    CHECK(std::isfinite(v.real()));
    CHECK(std::isfinite(v.imag()));
  }
  CHECK(std::abs(hs[1]) > 1e-12);  // nontrivial after rescaling
}

TEST_CASE("counting main terms track the running count") {
  const double n100 =
      zetakernel::rvm_main_terms(100.0) - zetakernel::rvm_main_terms(1e-3);
  CHECK(std::abs(n100 - 29.0) < 2.0);
}
