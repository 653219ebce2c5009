#pragma once

#include <complex>
#include <vector>

namespace mollicrit::specfun {

using cdouble = std::complex<double>;

// Bernoulli numbers B_0..B_max with B_1 = -1/2. Built once through the
// tangent-number triangle, which involves only positive integer-like
// additions and so keeps full long-double accuracy up to B_68.
struct BernoulliTable {
  std::vector<double> values;          // B_0..B_max
  std::vector<long double> values_ld;  // same, extended precision

  int max_index() const { return static_cast<int>(values.size()) - 1; }
  double at(int k) const;
  long double at_ld(int k) const;

  static const BernoulliTable& standard();  // B_0..B_68
};

// Principal-branch-consistent log Gamma: Lanczos in the right half-plane,
// argument lifting on -1.5 <= Re s < 0.5, reflection further left.
cdouble log_gamma(cdouble s);

// Gamma itself; throws std::domain_error at non-positive integers.
cdouble gamma_complex(cdouble s);

struct HypergeometricQuery {
  cdouble a, b, c, z;
};

// Gauss hypergeometric series with a geometric tail bound; requires |z| < 1
// and c away from non-positive integers.
cdouble hyp2f1(const HypergeometricQuery& q);

struct IncompleteBetaResult {
  cdouble value;
  // Forward rounding-error proxy: eps * sum of absolute summed terms. Large
  // values flag cancellation-dominated evaluations.
  double condition;
};

// B_x(a,b) = int_0^x w^(a-1) (1-w)^(b-1) dw for real x in [0,1] and complex
// parameters. Power series for x <= 0.75, the mirrored series (requires
// Re b > 0) above, complete beta via log Gamma at x = 1.
IncompleteBetaResult incomplete_beta_ex(double x, cdouble a, cdouble b);
cdouble incomplete_beta(double x, cdouble a, cdouble b);

// zeta(k) for even k in [2, 66] through the Bernoulli closed form.
double zeta_even(int k);

}  // namespace mollicrit::specfun
