#pragma once

#include <complex>
#include <string>
#include <vector>

#include "mollicrit/polynomial.hpp"

namespace mollicrit::gfun {

using cdouble = std::complex<double>;

// Parameters of the tanh-weighted Dirichlet series
//   g(s) = -1/2 sum_{l>=1} tanh(alpha/2 (log l / log T - 1/2)) l^{-s}.
struct GFunParams {
  double alpha = 0.1;
  double T = 100.0;
  long long N_truncation = 100;  // continuation cutoff, integer >= T

  // N < 0 picks the smallest admissible cutoff ceil(T).
  static GFunParams make(double alpha, double T, long long N = -1);
  void validate() const;
};

struct GDirectResult {
  cdouble value = 0.0;     // sum truncated at N_truncation
  double tail_bound = 0.0; // integral bound N^{1-sigma}/(sigma-1) on the rest
};

// Truncated series, convergent region only (Re s >= 1 + margin).
GDirectResult g_direct_ex(cdouble s, const GFunParams& p, double margin = 0.1);
cdouble g_direct(cdouble s, const GFunParams& p, double margin = 0.1);

// Full series value: explicit sum extended as needed, remainder restored by
// midpoint Euler-Maclaurin corrections at a half-integer cutoff. Shares no
// structure with g_analytic, which makes it a useful cross-check.
cdouble g_direct_completed(cdouble s, const GFunParams& p, double margin = 0.1);

// Termwise defect of the exponential-shift rewrite of the series weight at
// u = log l / log T; identically zero in exact arithmetic.
double s1_symmetry_defect(double u, double alpha);

struct GAnalyticResult {
  cdouble value = 0.0;
  // The five pieces, paired with the signs used in `value`:
  //   value = -1/2 (finite_sum + hyp_term + pole_term
  //                 - middle_integral + psi_sech_term - psi_tanh_term)
  cdouble finite_sum = 0.0;      // sum_{n<=N} tanh(.) n^{-s}
  cdouble hyp_term = 0.0;        // 2F1 piece, its leading minus included
  cdouble pole_term = 0.0;       // T^{1-s}/(s-1)
  cdouble middle_integral = 0.0; // int_T^{N+1/2} tanh(.) u^{-s} du
  cdouble psi_sech_term = 0.0;   // alpha/(2 log T) int psi sech^2(.) u^{-s-1}
  cdouble psi_tanh_term = 0.0;   // s int psi tanh(.) u^{-s-1}
  std::vector<std::string> warnings;
};

// Analytic continuation to Re s > 0, 0 < |Im s| <= 2T.
GAnalyticResult g_analytic_ex(cdouble s, const GFunParams& p);
cdouble g_analytic(cdouble s, const GFunParams& p);

struct GApproxResult {
  cdouble value = 0.0;
  double deviation = 0.0;       // |value - g_analytic(s)|
  double scaled_constant = 0.0; // deviation * T^{Re s}
  std::vector<std::string> warnings;
};

// Three-term approximate equation (finite sum to T, 2F1 piece, pole piece);
// the dropped remainder decays like T^{-Re s}.
GApproxResult g_approx_ex(cdouble s, const GFunParams& p);
cdouble g_approx(cdouble s, const GFunParams& p);

// Sine coefficients on (0, pi) of the kernel -2/(e^{alpha x}+1), k = 1..K:
// closed form through the incomplete beta function, and the defining
// integral by quadrature. The two must agree to ~1e-8.
std::vector<double> fourier_tanh_coefficients_beta(double alpha, int K);
std::vector<double> fourier_tanh_coefficients_quadrature(double alpha, int K);

// Sine coefficients of tanh(alpha x / 2) itself. Since
// tanh(alpha x/2) = 1 - 2/(e^{alpha x}+1), these are the kernel coefficients
// above plus the square-wave series of the constant 1, (2/pi)(1-(-1)^k)/k.
// Uses the closed form where it is well conditioned, quadrature otherwise.
std::vector<double> fourier_tanh_coefficients(double alpha, int K);

struct FourierTanhExpansion {
  int K = 0;                // sine terms
  int M = 0;                // Taylor order: odd powers up to 2M-1
  std::vector<double> b;    // b_1..b_K, tanh coefficients
  RealPolynomial q;         // expanded monomial form
};

// q(x) = -1/2 sum_{k<=K} b_k sum_{m<=M} (-1)^{m-1} k^{2m-1}/(2m-1)!
//        (x-1/2)^{2m-1}, the polynomial proxy for -1/2 tanh(alpha/2 (x-1/2)).
// Terms are assembled in log space to dodge k^{2m-1}/(2m-1)! overflow.
RealPolynomial q_poly_from_expansion(double alpha, int K, int M);
FourierTanhExpansion fourier_tanh_expansion(double alpha, int K, int M);

struct XiMatchResult {
  // Both sides carry a common factor exp(-log_scale) chosen from the local
  // magnitude of the completed-zeta prefactor, so they stay representable at
  // large heights. rel_error and the purely-imaginary structure on the
  // critical line are unaffected by the shared positive factor.
  cdouble lhs = 0.0;
  cdouble rhs = 0.0;
  double rel_error = 0.0;
  double log_scale = 0.0;
  std::vector<double> g_odd; // g_1, g_3, ..., g_{2M-1}
  std::vector<std::string> warnings;
};

// Compares 2 H(s) sum_{l<=T} q(log l/log T + delta(s)) l^{-s}, with
// delta(s) = log(2 pi T / s)/(2 log T), against a real combination of the
// odd xi derivatives sum_m g_{2m-1} xi^{(2m-1)}(s). The coefficients are fit
// by least squares on probe points of matching real part rather than by the
// classical derivative dictionary; rel_error reports the match at s.
XiMatchResult xi_odd_derivative_match(cdouble s, double alpha, double T, int M);

}  // namespace mollicrit::gfun
