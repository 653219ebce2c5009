#include "mollicrit/shiftcalc.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mollicrit/constants.hpp"
#include "mollicrit/csvio.hpp"
#include "mollicrit/quad.hpp"
#include "mollicrit/specfun.hpp"
#include "mollicrit/zetakernel.hpp"

namespace mollicrit::shiftcalc {

ShiftParams ShiftParams::make(double alpha, double T, int K) {
  if (K < 1 || K % 2 == 0)
    throw std::domain_error("ShiftParams requires odd K >= 1");
  if (!(T > 2.718281828459045))
    throw std::domain_error("ShiftParams requires T > e");
  ShiftParams p;
  p.alpha = alpha;
  p.T = T;
  p.K = K;
  p.delta_sigma = alpha / std::log(T);
  return p;
}

AnalyticProbe probe_constant(cdouble c) {
  return {[c](cdouble) { return c; },
          [c](cdouble, int k) { return k == 0 ? c : cdouble(0.0, 0.0); },
          "constant"};
}

AnalyticProbe probe_linear() {
  return {[](cdouble w) { return w; },
          [](cdouble w, int k) {
            if (k == 0) return w;
            return k == 1 ? cdouble(1.0, 0.0) : cdouble(0.0, 0.0);
          },
          "linear"};
}

AnalyticProbe probe_exp() {
  return {[](cdouble w) { return std::exp(w); },
          [](cdouble w, int) { return std::exp(w); }, "exp"};
}

AnalyticProbe probe_sin() {
  return {[](cdouble w) { return std::sin(w); },
          [](cdouble w, int k) {
            switch (k % 4) {
              case 0: return std::sin(w);
              case 1: return std::cos(w);
              case 2: return -std::sin(w);
              default: return -std::cos(w);
            }
          },
          "sin"};
}

AnalyticProbe probe_zeta_shifted(cdouble offset) {
  auto eval = [offset](cdouble w) { return zetakernel::zeta(w + offset); };
  auto deriv = [offset](cdouble w, int k) -> cdouble {
    if (k == 0) return zetakernel::zeta(w + offset);
    // Cauchy ring around w + offset; radius kept inside the pole-free zone
    // assumed by the probe contract.
    const int n = 96;
    const double r = 0.4;
    cdouble acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double phi = constants::two_pi * j / n;
      acc += zetakernel::zeta(w + offset + r * cdouble(std::cos(phi), std::sin(phi))) *
             std::exp(cdouble(0.0, -k * phi));
    }
    double kfact = 1.0;
    for (int i = 2; i <= k; ++i) kfact *= i;
    return acc * kfact / (double(n) * std::pow(r, k));
  };
  return {eval, deriv, "zeta-shifted"};
}

double g_coefficient(int k, double ds) {
  if (k < 1 || k > 63 || k % 2 == 0)
    throw std::domain_error("g_coefficient requires odd k in [1, 63]");
  const auto& bern = specfun::BernoulliTable::standard();
  const long double half_ds = 0.5L * static_cast<long double>(ds);
  long double pw = 1.0L, fact = 1.0L;
  for (int i = 0; i < k; ++i) pw *= half_ds;
  for (int i = 1; i <= k + 1; ++i) fact *= i;
  const long double two_pow = std::pow(2.0L, static_cast<long double>(k + 1));
  const long double four_pow = two_pow * two_pow;
  return static_cast<double>(-pw * (two_pow - four_pow) * bern.at_ld(k + 1) /
                             fact);
}

double g_coefficient_series(int k, double ds) {
  if (k < 1 || k > 63 || k % 2 == 0)
    throw std::domain_error("g_coefficient requires odd k in [1, 63]");
  const double sign = ((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  long double pw = 4.0L;
  const long double ratio = static_cast<long double>(ds) / constants::pi;
  for (int i = 0; i < k; ++i) pw *= ratio;
  pw /= constants::pi;
  return static_cast<double>(pw) * sign * specfun::zeta_even(k + 1) *
         (1.0 - std::pow(2.0, -(k + 1)));
}

namespace {

void validate_probe(const AnalyticProbe& f, cdouble at) {
  const cdouble direct = f.evaluator(at);
  const cdouble order0 = f.derivative_evaluator(at, 0);
  if (std::abs(direct - order0) > 1e-12 * (1.0 + std::abs(direct)))
    throw std::invalid_argument("probe '" + f.description +
                                "': derivative order 0 disagrees with evaluator");
  const double h = 1e-5;
  const cdouble fd =
      (f.evaluator(at + h) - f.evaluator(at - h)) / cdouble(2.0 * h, 0.0);
  const cdouble d1 = f.derivative_evaluator(at, 1);
  if (std::abs(fd - d1) > 1e-6 * (1.0 + std::abs(d1)))
    throw std::invalid_argument("probe '" + f.description +
                                "': first derivative fails the finite-difference check");
}

// Remainder integral of the shift identity:
//   4 (-1)^((K+1)/2) ds^(K+1) / pi^(K+2)
//     * ds * int_0^1 f^(K+2)(s + u ds) S_{K+2}(1 - u) du,
// S_p(v) = sum_{n<=n_sin} sin((2n-1) pi v) / (2n-1)^p.
// The composite Gauss grid uses enough panels that the highest retained
// frequency is resolved to ~1e-14 per panel.
cdouble remainder_integral(const AnalyticProbe& f, cdouble s, double ds, int K,
                           int n_sin, int panels) {
  const int p = K + 2;
  std::vector<double> coeff(n_sin);
  for (int n = 1; n <= n_sin; ++n)
    coeff[n - 1] = std::pow(2.0 * n - 1.0, -double(p));
  const auto& rule = quad::gauss_legendre(24);
  cdouble total = 0.0;
  for (int pn = 0; pn < panels; ++pn) {
    const double a = double(pn) / panels, b = double(pn + 1) / panels;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    cdouble acc = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double u = mid + half * rule.x[i];
      double series = 0.0;
      for (int n = n_sin; n >= 1; --n)
        series += std::sin((2.0 * n - 1.0) * constants::pi * (1.0 - u)) *
                  coeff[n - 1];
      acc += rule.w[i] * series * f.derivative_evaluator(s + u * ds, p);
    }
    total += half * acc;
  }
  const double sign = ((K + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  return 4.0 * sign * std::pow(ds, K + 1) / std::pow(constants::pi, K + 2) *
         ds * total;
}

}  // namespace

double shift_identity_residual(const AnalyticProbe& f, cdouble s,
                               const ShiftParams& p, int n_sin) {
  validate_probe(f, s);
  const double ds = p.delta_sigma;
  const cdouble lhs = f.evaluator(s + ds);

  cdouble rhs = f.evaluator(s);
  for (int k = 1; k <= p.K; k += 2) {
    const double gk = g_coefficient(k, ds);
    rhs += gk * (f.derivative_evaluator(s, k) +
                 f.derivative_evaluator(s + ds, k));
  }
  // Base panel count resolves the top sine frequency; doubling confirms the
  // quadrature has converged, and the finer value is the one used.
  const int base_panels = std::max(4, (2 * n_sin - 1) / 6 + 1);
  const cdouble rem_fine =
      remainder_integral(f, s, ds, p.K, n_sin, 2 * base_panels);
  return std::abs(lhs - (rhs + rem_fine));
}

double tanh_series_sum(double x, double alpha, int K_max, bool* diverged) {
  if (K_max < 1 || K_max % 2 == 0 || K_max > 63)
    throw std::domain_error("tanh_series_sum requires odd K_max in [1, 63]");
  const double z = alpha * (0.5 - x);
  // The limit function -tanh(z/2) has poles at z = +/- i pi, so the power
  // series diverges once |z| >= pi.
  if (diverged) *diverged = std::abs(z) >= constants::pi;
  double sum = 0.0;
  double zp = z;                     // z^k
  const double z2 = z * z;
  for (int k = 1; k <= K_max; k += 2) {
    const double sign = ((k + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    sum += 4.0 * sign / std::pow(constants::pi, k + 1) *
           specfun::zeta_even(k + 1) * (1.0 - std::pow(2.0, -(k + 1))) * zp;
    zp *= z2;
  }
  return sum;
}

HRatioResult h_ratio_check(cdouble s, const ShiftParams& p) {
  const double A = std::max(3.0, s.real());
  if (s.real() < 1.0 / 3.0)
    throw std::domain_error("h_ratio_check requires Re s >= 1/3");
  if (!(p.T >= 2.0 * A))
    throw std::domain_error("h_ratio_check requires T >= 2 max(3, Re s)");
  if (!(s.imag() >= p.T && s.imag() <= 2.0 * p.T))
    throw std::domain_error("h_ratio_check requires T <= Im s <= 2T");
  HRatioResult r;
  if (p.alpha == 0.0) {
    r.ratio = 1.0;
    r.deviation = 0.0;
    return r;
  }
  r.ratio = std::exp(zetakernel::log_h_factor(s + p.delta_sigma) -
                     zetakernel::log_h_factor(s));
  r.deviation = std::abs(r.ratio - std::exp(0.5 * p.alpha));
  return r;
}

std::string residual_sweep_csv(const std::vector<ResidualRow>& rows) {
  std::ostringstream os;
  os << "probe,s_re,s_im,alpha,K,residual\r\n";
  for (const auto& r : rows) {
    os << csvio::csv_field(r.probe) << ',' << csvio::format_real(r.s_re) << ','
       << csvio::format_real(r.s_im) << ',' << csvio::format_real(r.alpha)
       << ',' << r.K << ',' << csvio::format_real(r.residual) << "\r\n";
  }
  return os.str();
}

}  // namespace mollicrit::shiftcalc
