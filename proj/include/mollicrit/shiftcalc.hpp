#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace mollicrit::shiftcalc {

using cdouble = std::complex<double>;

struct ShiftParams {
  double alpha = 0.0;
  double T = 0.0;
  int K = 1;                 // odd
  double delta_sigma = 0.0;  // alpha / log T

  static ShiftParams make(double alpha, double T, int K);
};

// An analytic function bundled with exact derivatives of every order; lets
// the shift identity be checked without symbolic differentiation.
struct AnalyticProbe {
  std::function<cdouble(cdouble)> evaluator;
  std::function<cdouble(cdouble, int)> derivative_evaluator;
  std::string description;
};

AnalyticProbe probe_constant(cdouble c);
AnalyticProbe probe_linear();
AnalyticProbe probe_exp();
AnalyticProbe probe_sin();
// f(w) = zeta(w + offset); keep Re(offset + probe region) away from 1.
AnalyticProbe probe_zeta_shifted(cdouble offset);

// g_k(ds) = -(ds/2)^k (2^(k+1) - 4^(k+1)) B_(k+1) / (k+1)!   (k odd <= 63)
double g_coefficient(int k, double ds);
// Same number through 4 (-1)^((k-1)/2) ds^k / pi^(k+1) * zeta(k+1) (1 - 2^-(k+1)).
double g_coefficient_series(int k, double ds);

// |f(s+ds) - f(s) - sum_k g_k (f^(k)(s) + f^(k)(s+ds)) - remainder| where the
// remainder integral runs along [s, s+ds] against the truncated odd-sine
// series. The composite quadrature grid resolves the highest retained sine
// frequency, so the residual reflects the identity itself rather than
// quadrature noise.
double shift_identity_residual(const AnalyticProbe& f, cdouble s,
                               const ShiftParams& p, int n_sin = 200);

// Partial sums of sum_{k odd <= K_max} 4 (-1)^((k+1)/2) pi^-(k+1)
// zeta(k+1)(1-2^-(k+1)) z^k at z = alpha (1/2 - x). This is the
// (-g_k)(log T)^k (1/2-x)^k series rewritten T-free via ds log T = alpha.
// Converges to -tanh(alpha/2 (1/2 - x)) for |z| < pi (tanh singularity at
// +/- i pi); *diverged is set when |z| >= pi.
double tanh_series_sum(double x, double alpha, int K_max,
                       bool* diverged = nullptr);

struct HRatioResult {
  cdouble ratio;
  double deviation = 0.0;  // |ratio - e^(alpha/2)|
};

// H(s + ds)/H(s) inside the rectangle 1/3 <= Re s <= A, T <= Im s <= 2T;
// computed in log space so it stays meaningful where H itself underflows.
HRatioResult h_ratio_check(cdouble s, const ShiftParams& p);

struct ResidualRow {
  std::string probe;
  double s_re, s_im, alpha;
  int K;
  double residual;
};
std::string residual_sweep_csv(const std::vector<ResidualRow>& rows);

}  // namespace mollicrit::shiftcalc
