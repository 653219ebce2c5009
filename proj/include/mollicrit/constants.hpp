#pragma once

// Central numerical-policy record. Every tolerance used by the library lives
// here so accuracy targets can be tightened or relaxed in one place.

namespace mollicrit {

struct Tolerances {
  // Special functions
  double gamma_rel = 1e-12;       // complex gamma, |s| <= 100
  double hyp2f1_tail = 1e-13;     // series truncation target for 2F1
  double hyp2f1_transform = 1e-10;// linear-transformation consistency
  double incbeta_rel = 1e-10;     // incomplete beta
  double bernoulli_recurrence = 1e-14;

  // Zeta / xi kernel
  double zeta_rel = 1e-10;        // Euler-Maclaurin zeta, |Im s| <= im_ceiling
  double xi_funceq_rel = 1e-10;   // |xi(s) - xi(1-s)| <= tol * (1 + |xi(s)|)
  double zero_bisect = 1e-6;      // bracketing refinement width
  double xi_deriv_agree = 1e-9;   // node-doubling agreement (relative)

  // Shift calculus
  double g_coeff_series_rel = 1e-12; // closed form vs odd-series summation
  double shift_residual = 1e-10;     // exact-derivative probes
  double tanh_limit = 1e-8;          // K=41 partial sum vs tanh

  // g-function
  double s1_defect = 1e-13;
  double g_overlap_rel = 1e-6;    // analytic continuation vs direct sum
  double bk_dual = 1e-8;          // beta formula vs quadrature

  // Pipeline
  double convolution_rel = 1e-10; // eval(F) vs eval(G)*eval(M)
  double grid_identity = 1e-12;   // polynomial identities on [0,1] grids

  // Domain ceilings
  double zeta_im_ceiling = 1e4;
  double window_ceiling = 1e5;    // zero-counting ordinate ceiling
  long long sieve_ceiling = 10'000'000;
  long long convolution_ceiling = 10'000'000;
};

inline const Tolerances& tol() {
  static const Tolerances t;
  return t;
}

namespace constants {
inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double ln_pi = 1.14472988584940017414342735135305871;
inline constexpr double ln_two_pi = 1.83787706640934548356065947281123527;
// Euler-Mascheroni and the next Stieltjes constants; these drive the Laurent
// expansion of (1-s)*zeta(s) used to evaluate xi near its removable point s=1.
inline constexpr double stieltjes[6] = {
    0.57721566490153286061,
    -0.072815845483676724861,
    -0.0096903631928723184845,
    0.0020538344203033458662,
    0.0023253700654673000575,
    0.00079332381730106270175,
};
}  // namespace constants

}  // namespace mollicrit
