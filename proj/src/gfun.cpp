#include "mollicrit/gfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>

#include "mollicrit/constants.hpp"
#include "mollicrit/quad.hpp"
#include "mollicrit/specfun.hpp"
#include "mollicrit/zetakernel.hpp"

namespace mollicrit::gfun {

namespace {

struct KahanC {
  cdouble sum{0.0, 0.0};
  cdouble comp{0.0, 0.0};
  void add(cdouble v) {
    const cdouble y = v - comp;
    const cdouble t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

struct KahanR {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// ---------------------------------------------------------------------------
// Derivatives of f(u) = W(tau) u^{-z} with tau = tanh(cp (log u - L/2)):
// f^{(j)}(u) = u^{-z-j} Q_j(tau), Q_0 = W,
// Q_{j+1} = -(z+j) Q_j + cp (1 - tau^2) Q_j'. Polynomials in tau with complex
// coefficients; since |tau| <= 1, the 1-norm of Q_j bounds |f^{(j)}| u^{z+j}.
// ---------------------------------------------------------------------------

using CPoly = std::vector<cdouble>;

cdouble cpoly_eval(const CPoly& q, double tau) {
  cdouble r = 0.0;
  for (std::size_t i = q.size(); i-- > 0;) r = r * tau + q[i];
  return r;
}

double cpoly_norm1(const CPoly& q) {
  double n = 0.0;
  for (const cdouble& c : q) n += std::abs(c);
  return n;
}

CPoly derivative_lift(const CPoly& q, cdouble zj, double cp) {
  CPoly out(q.size() + 2, cdouble(0.0, 0.0));
  for (std::size_t i = 0; i < q.size(); ++i) out[i] -= zj * q[i];
  for (std::size_t i = 1; i < q.size(); ++i) {
    const cdouble d = double(i) * q[i];  // q' coefficient at degree i-1
    out[i - 1] += cp * d;
    out[i + 1] -= cp * d;
  }
  while (out.size() > 1 && std::abs(out.back()) == 0.0) out.pop_back();
  return out;
}

std::vector<CPoly> tau_derivative_chain(const CPoly& w, cdouble z, double cp,
                                        int jmax) {
  std::vector<CPoly> chain(static_cast<std::size_t>(jmax) + 1);
  chain[0] = w;
  for (int j = 0; j < jmax; ++j)
    chain[static_cast<std::size_t>(j) + 1] =
        derivative_lift(chain[static_cast<std::size_t>(j)], z + double(j), cp);
  return chain;
}

// sup |periodized B_9| / 9! <= 2 zeta(9) / (2 pi)^9, the constant in the
// remainder of the Bernoulli correction layers below.
constexpr double kB9Const = 1.32e-7;

// ---------------------------------------------------------------------------
// int_{N+1/2}^inf psi(u) W(tau(u)) u^{-z} du with psi(u) = u - [u] - 1/2:
// exact 16-point Gauss per unit interval (psi is linear between integers),
// then Bernoulli-layer corrections at an integer cutoff U chosen so the
// rigorous remainder bound drops below the target.
// ---------------------------------------------------------------------------

struct PsiIntegral {
  cdouble value{0.0, 0.0};
  bool truncated = false;
  double remainder_bound = 0.0;
};

PsiIntegral psi_weighted_integral(const CPoly& w, cdouble z, double cp,
                                  double L, long long N, double target) {
  const auto chain = tau_derivative_chain(w, z, cp, 8);
  const double norm8 = cpoly_norm1(chain[8]);
  const double expo = z.real() + 7.0;

  PsiIntegral out;
  double u_need = std::pow(kB9Const * norm8 / (expo * target), 1.0 / expo);
  if (!std::isfinite(u_need)) u_need = 1e12;
  long long U = std::max<long long>(N + 1, (long long)std::ceil(u_need));
  const long long max_intervals = 65536;
  if (U > N + 1 + max_intervals) {
    U = N + 1 + max_intervals;
    out.truncated = true;
  }
  out.remainder_bound = kB9Const * norm8 * std::pow(double(U), -expo) / expo;

  const auto& rule = quad::gauss_legendre(16);
  KahanC acc;
  for (long long m = N; m < U; ++m) {
    const double lo = (m == N) ? double(N) + 0.5 : double(m);
    const double hi = double(m + 1);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    cdouble local = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double u = mid + half * rule.x[i];
      const double lnu = std::log(u);
      const double tau = std::tanh(cp * (lnu - 0.5 * L));
      const double psi = u - double(m) - 0.5;
      local += rule.w[i] * psi * cpoly_eval(w, tau) * std::exp(-z * lnu);
    }
    acc.add(half * local);
  }

  const double lnU = std::log(double(U));
  const double tauU = std::tanh(cp * (lnU - 0.5 * L));
  // -B_{2j}/(2j)! phi^{(2j-2)}(U) for j = 1..4, phi^{(j)}(U) = U^{-z-j} Q_j.
  static constexpr double layer[4] = {-1.0 / 12.0, 1.0 / 720.0,
                                      -1.0 / 30240.0, 1.0 / 1209600.0};
  static constexpr int order[4] = {0, 2, 4, 6};
  for (int i = 0; i < 4; ++i)
    acc.add(layer[i] * std::exp(-(z + double(order[i])) * lnU) *
            cpoly_eval(chain[static_cast<std::size_t>(order[i])], tauU));

  out.value = acc.sum;
  return out;
}

double weight_log_scale(const GFunParams& p) {
  const double L = std::log(p.T);
  if (!(L > 0.0))
    throw std::domain_error("series weight needs T > 1 (log T in denominator)");
  return L;
}

void require_direct_domain(cdouble s, double margin) {
  if (!(margin > 0.0)) throw std::invalid_argument("margin must be positive");
  if (!(s.real() >= 1.0 + margin))
    throw std::domain_error("direct series needs Re s >= 1 + margin");
}

cdouble truncated_weighted_sum(cdouble s, double cp, double L, long long N) {
  KahanC acc;
  for (long long n = 1; n <= N; ++n) {
    const double lnn = std::log(double(n));
    acc.add(std::tanh(cp * (lnn - 0.5 * L)) * std::exp(-s * lnn));
  }
  return acc.sum;
}

struct HypPolePair {
  cdouble hyp, pole;
};

// The 2F1 piece (leading minus included) and the T^{1-s}/(s-1) piece of the
// continuation formula.
HypPolePair continuation_main_terms(cdouble s, double alpha, double L) {
  const double ea = std::exp(0.5 * alpha) + 1.0;
  const cdouble w = (cdouble(1.0, 0.0) - s) * (L / alpha);
  const cdouble f = specfun::hyp2f1({1.0, 1.0, 2.0 - w, 1.0 / ea});
  const cdouble t_pow = std::exp((cdouble(1.0, 0.0) - s) * L);
  HypPolePair r;
  r.hyp = -2.0 * t_pow * L * f / (alpha * ea * (1.0 - w));
  r.pole = t_pow / (s - 1.0);
  return r;
}

void require_strip(cdouble s, double T, const char* who) {
  const double at = std::abs(s.imag());
  if (!(s.real() > 0.0) || !(at >= 1e-6) || !(at <= 2.0 * T))
    throw std::domain_error(std::string(who) +
                            " needs Re s > 0 and 0 < |Im s| <= 2T");
}

// (2/pi) int_0^pi f(x) sin(kx) dx by composite Gauss, panels sized so each
// one sees ~2.4 radians of the oscillation.
double sine_coefficient(int k, const std::function<double(double)>& f) {
  const int panels = std::max(8, (int)std::ceil(1.3 * k));
  const auto& rule = quad::gauss_legendre(16);
  const double h = constants::pi / panels;
  KahanR acc;
  for (int pnl = 0; pnl < panels; ++pnl) {
    const double lo = pnl * h;
    const double mid = lo + 0.5 * h, half = 0.5 * h;
    double local = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double x = mid + half * rule.x[i];
      local += rule.w[i] * f(x) * std::sin(k * x);
    }
    acc.add(half * local);
  }
  return 2.0 / constants::pi * acc.sum;
}

// Sine coefficient of the constant 1 on (0, pi): 4/(pi k) for odd k.
double square_wave_coefficient(int k) {
  return (k % 2 != 0) ? 4.0 / (constants::pi * k) : 0.0;
}

struct BetaBk {
  double value = 0.0;
  double condition = 0.0;
};

// Closed form of the kernel coefficient for alpha > 0 through the incomplete
// beta function, with the forward-error estimate of the series. The
// parameters sit at Re a = 1, Re b = 0, so only x <= 3/4 evaluations appear.
BetaBk printed_bk_beta(double alpha, int k) {
  const double x1 = 1.0 / (std::exp(alpha * constants::pi) + 1.0);
  const cdouble a(1.0, -double(k) / alpha);
  const cdouble b(0.0, double(k) / alpha);
  const auto hi = specfun::incomplete_beta_ex(0.5, a, b);
  const auto lo = specfun::incomplete_beta_ex(x1, a, b);
  BetaBk r;
  r.value = -4.0 / (constants::pi * alpha) * (hi.value - lo.value).imag();
  r.condition = std::max(hi.condition, lo.condition);
  return r;
}

void check_fourier_args(double alpha, int K) {
  if (alpha == 0.0) throw std::invalid_argument("alpha must be nonzero");
  if (K < 1 || K > 256) throw std::invalid_argument("K must lie in [1, 256]");
}

RealPolynomial q_from_b(const std::vector<double>& b, int M) {
  if (M < 1) throw std::invalid_argument("Taylor order M must be >= 1");
  const RealPolynomial u({-0.5, 1.0});
  const RealPolynomial u2 = u * u;
  RealPolynomial cur = u;
  RealPolynomial out = RealPolynomial::zero();
  for (int m = 1; m <= M; ++m) {
    const double parity = (m % 2 != 0) ? 1.0 : -1.0;  // (-1)^{m-1}
    KahanR acc;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b[i] == 0.0) continue;
      const double k = double(i + 1);
      const double ln_term = std::log(std::abs(b[i])) +
                             (2.0 * m - 1.0) * std::log(k) -
                             std::lgamma(2.0 * m);
      if (ln_term > 600.0)
        throw std::overflow_error("expansion term k^{2m-1}/(2m-1)! overflows");
      acc.add(std::copysign(std::exp(ln_term), b[i]));
    }
    out += (-0.5 * parity * acc.sum) * cur;
    if (m < M) cur = cur * u2;
  }
  return out;
}

// Cholesky solve of the (small, SPD up to conditioning) normal equations,
// with escalating diagonal jitter if a pivot degenerates.
std::vector<double> solve_normal_equations(std::vector<double> g,
                                           std::vector<double> h, int n,
                                           std::vector<std::string>* warnings) {
  double trace = 0.0;
  for (int i = 0; i < n; ++i) trace += g[static_cast<std::size_t>(i) * n + i];
  double jitter = 0.0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<double> a = g;
    if (jitter > 0.0)
      for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i) * n + i] += jitter;
    std::vector<double> chol(a.size(), 0.0);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = 0; j <= i; ++j) {
        double sum = a[static_cast<std::size_t>(i) * n + j];
        for (int k = 0; k < j; ++k)
          sum -= chol[static_cast<std::size_t>(i) * n + k] *
                 chol[static_cast<std::size_t>(j) * n + k];
        if (i == j) {
          if (!(sum > 0.0)) {
            ok = false;
            break;
          }
          chol[static_cast<std::size_t>(i) * n + j] = std::sqrt(sum);
        } else {
          chol[static_cast<std::size_t>(i) * n + j] =
              sum / chol[static_cast<std::size_t>(j) * n + j];
        }
      }
    }
    if (!ok) {
      jitter = (jitter == 0.0) ? 1e-14 * std::max(trace, 1e-300) : jitter * 100.0;
      continue;
    }
    if (jitter > 0.0 && warnings)
      warnings->push_back("normal equations needed diagonal regularization");
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      double sum = h[static_cast<std::size_t>(i)];
      for (int k = 0; k < i; ++k)
        sum -= chol[static_cast<std::size_t>(i) * n + k] * y[static_cast<std::size_t>(k)];
      y[static_cast<std::size_t>(i)] = sum / chol[static_cast<std::size_t>(i) * n + i];
    }
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int i = n - 1; i >= 0; --i) {
      double sum = y[static_cast<std::size_t>(i)];
      for (int k = i + 1; k < n; ++k)
        sum -= chol[static_cast<std::size_t>(k) * n + i] * x[static_cast<std::size_t>(k)];
      x[static_cast<std::size_t>(i)] = sum / chol[static_cast<std::size_t>(i) * n + i];
    }
    return x;
  }
  throw std::runtime_error("coefficient fit: normal equations are singular");
}

}  // namespace

GFunParams GFunParams::make(double alpha, double T, long long N) {
  GFunParams p;
  p.alpha = alpha;
  p.T = T;
  p.N_truncation = (N < 0) ? (long long)std::ceil(T) : N;
  p.validate();
  return p;
}

void GFunParams::validate() const {
  if (alpha == 0.0) throw std::invalid_argument("alpha must be nonzero");
  if (!(T >= 1.0)) throw std::invalid_argument("T must be >= 1");
  if (!(double(N_truncation) >= T))
    throw std::invalid_argument("N_truncation must be an integer >= T");
}

GDirectResult g_direct_ex(cdouble s, const GFunParams& p, double margin) {
  p.validate();
  require_direct_domain(s, margin);
  const double L = weight_log_scale(p);
  const double cp = p.alpha / (2.0 * L);
  GDirectResult r;
  r.value = -0.5 * truncated_weighted_sum(s, cp, L, p.N_truncation);
  const double sigma = s.real();
  r.tail_bound = std::pow(double(p.N_truncation), 1.0 - sigma) / (sigma - 1.0);
  return r;
}

cdouble g_direct(cdouble s, const GFunParams& p, double margin) {
  return g_direct_ex(s, p, margin).value;
}

cdouble g_direct_completed(cdouble s, const GFunParams& p, double margin) {
  p.validate();
  require_direct_domain(s, margin);
  const double L = weight_log_scale(p);
  const double cp = p.alpha / (2.0 * L);
  const double sigma = s.real();

  const CPoly wt{cdouble(0.0, 0.0), cdouble(1.0, 0.0)};
  const auto chain = tau_derivative_chain(wt, s, cp, 9);
  const double norm9 = cpoly_norm1(chain[9]);
  const double expo = sigma + 8.0;

  // Cutoff with the midpoint-correction remainder under 1e-12 absolute.
  long long np = std::max<long long>(p.N_truncation, 64);
  const auto rem = [&](double a) {
    return kB9Const * norm9 * std::pow(a, -expo) / expo;
  };
  while (rem(double(np) + 0.5) > 1e-12 && np < (1LL << 21)) np *= 2;

  KahanC acc;
  for (long long n = 1; n <= np; ++n) {
    const double lnn = std::log(double(n));
    acc.add(std::tanh(cp * (lnn - 0.5 * L)) * std::exp(-s * lnn));
  }

  // Tail integral in log coordinates: int_A^inf tau u^{-s} du =
  // int_{log A}^inf tanh(cp (w - L/2)) e^{(1-s) w} dw, plain exponential
  // decay at rate sigma - 1 with a linear phase — composite Gauss panels
  // sized against the oscillation.
  const double a_cut = double(np) + 0.5;
  const double ln_a = std::log(a_cut);
  const double span = (std::log(1e12) + 6.0) / (sigma - 1.0);
  const double h = std::min(0.5, 3.0 / std::max(1.0, std::abs(s.imag())));
  const long long nseg = (long long)std::ceil(span / h);
  const double hh = span / double(nseg);
  const auto& rule = quad::gauss_legendre(16);
  const cdouble one_minus_s = cdouble(1.0, 0.0) - s;
  KahanC tail;
  for (long long k = 0; k < nseg; ++k) {
    const double lo = ln_a + double(k) * hh;
    const double mid = lo + 0.5 * hh, half = 0.5 * hh;
    cdouble local = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double w = mid + half * rule.x[i];
      local += rule.w[i] * std::tanh(cp * (w - 0.5 * L)) *
               std::exp(one_minus_s * w);
    }
    tail.add(half * local);
  }

  // Midpoint Euler-Maclaurin corrections at A: with f = tau u^{-s},
  // sum_{n>np} f(n) = int_A^inf f + f'(A)/24 - 7 f'''(A)/5760
  //                   + 31 f^(5)(A)/967680 - 127 f^(7)(A)/154828800 + R.
  static constexpr double em_coeff[4] = {1.0 / 24.0, -7.0 / 5760.0,
                                         31.0 / 967680.0,
                                         -127.0 / 154828800.0};
  static constexpr int em_order[4] = {1, 3, 5, 7};
  const double tau_a = std::tanh(cp * (ln_a - 0.5 * L));
  for (int i = 0; i < 4; ++i)
    tail.add(em_coeff[i] * std::exp(-(s + double(em_order[i])) * ln_a) *
             cpoly_eval(chain[static_cast<std::size_t>(em_order[i])], tau_a));

  return -0.5 * (acc.sum + tail.sum);
}

double s1_symmetry_defect(double u, double alpha) {
  const double lhs = 2.0 * std::exp(0.5 * alpha) /
                     ((std::exp(-alpha * (u - 0.5)) + 1.0) * std::exp(alpha * u));
  const double rhs = 2.0 / (std::exp(alpha * (u - 0.5)) + 1.0);
  return std::abs(lhs - rhs);
}

GAnalyticResult g_analytic_ex(cdouble s, const GFunParams& p) {
  p.validate();
  require_strip(s, p.T, "g_analytic");
  const double L = weight_log_scale(p);
  const double cp = p.alpha / (2.0 * L);
  const long long n_cut = p.N_truncation;

  GAnalyticResult r;
  r.finite_sum = truncated_weighted_sum(s, cp, L, n_cut);

  const auto main = continuation_main_terms(s, p.alpha, L);
  r.hyp_term = main.hyp;
  r.pole_term = main.pole;

  const auto mid = quad::integrate_adaptive(
      [&](double u) {
        const double lnu = std::log(u);
        return std::tanh(cp * (lnu - 0.5 * L)) * std::exp(-s * lnu);
      },
      p.T, double(n_cut) + 0.5, 1e-10);
  if (!mid.converged)
    r.warnings.push_back("middle integral did not reach 1e-10");
  r.middle_integral = mid.value;

  const cdouble z = s + 1.0;
  const CPoly w_sech{cdouble(1.0, 0.0), cdouble(0.0, 0.0), cdouble(-1.0, 0.0)};
  const CPoly w_tanh{cdouble(0.0, 0.0), cdouble(1.0, 0.0)};
  const auto i_sech = psi_weighted_integral(w_sech, z, cp, L, n_cut, 1e-12);
  const auto i_tanh = psi_weighted_integral(
      w_tanh, z, cp, L, n_cut, 1e-12 / std::max(1.0, std::abs(s)));
  if (i_sech.truncated || i_tanh.truncated)
    r.warnings.push_back("sawtooth tail bound exceeded at the interval cap");
  r.psi_sech_term = (p.alpha / (2.0 * L)) * i_sech.value;
  r.psi_tanh_term = s * i_tanh.value;

  r.value = -0.5 * (r.finite_sum + r.hyp_term + r.pole_term -
                    r.middle_integral + r.psi_sech_term - r.psi_tanh_term);
  return r;
}

cdouble g_analytic(cdouble s, const GFunParams& p) {
  return g_analytic_ex(s, p).value;
}

GApproxResult g_approx_ex(cdouble s, const GFunParams& p) {
  p.validate();
  require_strip(s, p.T, "g_approx");
  const double L = weight_log_scale(p);
  const double cp = p.alpha / (2.0 * L);

  GApproxResult r;
  const cdouble finite = truncated_weighted_sum(s, cp, L, (long long)p.T);
  const auto main = continuation_main_terms(s, p.alpha, L);
  r.value = -0.5 * (finite + main.hyp + main.pole);

  const auto full = g_analytic_ex(s, p);
  r.warnings = full.warnings;
  r.deviation = std::abs(r.value - full.value);
  r.scaled_constant = r.deviation * std::pow(p.T, s.real());
  return r;
}

cdouble g_approx(cdouble s, const GFunParams& p) {
  return g_approx_ex(s, p).value;
}

std::vector<double> fourier_tanh_coefficients_beta(double alpha, int K) {
  check_fourier_args(alpha, K);
  std::vector<double> b(static_cast<std::size_t>(K));
  if (alpha < 0.0) {
    // Kernel identity 1/(e^{-ax}+1) = 1 - 1/(e^{ax}+1) keeps the beta
    // evaluation on the alpha > 0 side.
    const auto pos = fourier_tanh_coefficients_beta(-alpha, K);
    for (int k = 1; k <= K; ++k)
      b[static_cast<std::size_t>(k) - 1] =
          -2.0 * square_wave_coefficient(k) - pos[static_cast<std::size_t>(k) - 1];
    return b;
  }
  for (int k = 1; k <= K; ++k)
    b[static_cast<std::size_t>(k) - 1] = printed_bk_beta(alpha, k).value;
  return b;
}

std::vector<double> fourier_tanh_coefficients_quadrature(double alpha, int K) {
  check_fourier_args(alpha, K);
  std::vector<double> b(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k)
    b[static_cast<std::size_t>(k) - 1] = sine_coefficient(
        k, [&](double x) { return -2.0 / (std::exp(alpha * x) + 1.0); });
  return b;
}

std::vector<double> fourier_tanh_coefficients(double alpha, int K) {
  check_fourier_args(alpha, K);
  std::vector<double> b(static_cast<std::size_t>(K));
  const double aa = std::abs(alpha);
  for (int k = 1; k <= K; ++k) {
    const double sq = square_wave_coefficient(k);
    double printed = 0.0;
    bool done = false;
    if (double(k) / aa <= 200.0) {
      const auto bk = printed_bk_beta(aa, k);
      if (bk.condition <= 1e-11) {
        printed = bk.value;
        done = true;
      }
    }
    if (!done)
      printed = sine_coefficient(
          k, [&](double x) { return -2.0 / (std::exp(aa * x) + 1.0); });
    const double full = printed + sq;
    b[static_cast<std::size_t>(k) - 1] = (alpha < 0.0) ? -full : full;
  }
  return b;
}

RealPolynomial q_poly_from_expansion(double alpha, int K, int M) {
  return q_from_b(fourier_tanh_coefficients(alpha, K), M);
}

FourierTanhExpansion fourier_tanh_expansion(double alpha, int K, int M) {
  FourierTanhExpansion e;
  e.K = K;
  e.M = M;
  e.b = fourier_tanh_coefficients(alpha, K);
  e.q = q_from_b(e.b, M);
  return e;
}

XiMatchResult xi_odd_derivative_match(cdouble s, double alpha, double T,
                                      int M) {
  if (M < 1 || M > 12) throw std::invalid_argument("M must lie in [1, 12]");
  if (alpha == 0.0) throw std::invalid_argument("alpha must be nonzero");
  if (!(T >= 20.0))
    throw std::domain_error("probe fit needs T >= 20 for a usable window");
  if (!(s.real() >= 1.0 / 3.0) || !(s.real() <= 0.5 * T) ||
      !(s.imag() >= T) || !(s.imag() <= 2.0 * T))
    throw std::domain_error(
        "s outside the rectangle 1/3 <= Re s <= T/2, T <= Im s <= 2T");

  const double L = std::log(T);
  const RealPolynomial q = q_poly_from_expansion(alpha, M, M);
  const long long l_cut = (long long)T;

  const auto lhs_scaled = [&](cdouble sv, double scale) {
    const cdouble delta = std::log(constants::two_pi * T / sv) / (2.0 * L);
    KahanC acc;
    for (long long l = 1; l <= l_cut; ++l) {
      const double lnl = std::log(double(l));
      acc.add(q(cdouble(lnl / L, 0.0) + delta) * std::exp(-sv * lnl));
    }
    return 2.0 * std::exp(zetakernel::log_h_factor(sv) - scale) * acc.sum;
  };

  XiMatchResult out;
  const int kmax = 2 * M - 1;
  const int probes = 3 * M;
  const double t_lo = T + 2.0, t_hi = 2.0 * T - 2.0;

  // Row j of the scaled linear system: sum_m g_m e^{-c_j} xi^{(2m-1)}(s_j)
  // = e^{-c_j} lhs(s_j), split into real and imaginary parts. Columns are
  // normalized before the normal equations to tame the conditioning.
  std::vector<double> at_rows;  // probes x M, complex rows flattened to 2 reals
  std::vector<double> rhs_rows;
  at_rows.reserve(static_cast<std::size_t>(2 * probes * M));
  rhs_rows.reserve(static_cast<std::size_t>(2 * probes));
  for (int j = 0; j < probes; ++j) {
    const double tj =
        (probes == 1) ? 0.5 * (t_lo + t_hi)
                      : t_lo + (t_hi - t_lo) * double(j) / double(probes - 1);
    const cdouble sj(s.real(), tj);
    const double cj = zetakernel::log_h_factor(sj).real();
    const auto derivs = zetakernel::xi_derivatives_upto_scaled(sj, kmax, cj);
    const cdouble target = lhs_scaled(sj, cj);
    for (int part = 0; part < 2; ++part) {
      for (int m = 1; m <= M; ++m) {
        const cdouble d = derivs[static_cast<std::size_t>(2 * m - 1)];
        at_rows.push_back(part == 0 ? d.real() : d.imag());
      }
      rhs_rows.push_back(part == 0 ? target.real() : target.imag());
    }
  }

  const int nrows = 2 * probes;
  std::vector<double> col_scale(static_cast<std::size_t>(M), 0.0);
  for (int m = 0; m < M; ++m) {
    double ss = 0.0;
    for (int rr = 0; rr < nrows; ++rr) {
      const double v = at_rows[static_cast<std::size_t>(rr) * M + m];
      ss += v * v;
    }
    col_scale[static_cast<std::size_t>(m)] = (ss > 0.0) ? std::sqrt(ss) : 1.0;
  }
  std::vector<double> gram(static_cast<std::size_t>(M) * M, 0.0);
  std::vector<double> proj(static_cast<std::size_t>(M), 0.0);
  for (int i = 0; i < M; ++i) {
    for (int k2 = 0; k2 <= i; ++k2) {
      double ss = 0.0;
      for (int rr = 0; rr < nrows; ++rr)
        ss += at_rows[static_cast<std::size_t>(rr) * M + i] *
              at_rows[static_cast<std::size_t>(rr) * M + k2];
      ss /= col_scale[static_cast<std::size_t>(i)] * col_scale[static_cast<std::size_t>(k2)];
      gram[static_cast<std::size_t>(i) * M + k2] = ss;
      gram[static_cast<std::size_t>(k2) * M + i] = ss;
    }
    double sb = 0.0;
    for (int rr = 0; rr < nrows; ++rr)
      sb += at_rows[static_cast<std::size_t>(rr) * M + i] *
            rhs_rows[static_cast<std::size_t>(rr)];
    proj[static_cast<std::size_t>(i)] = sb / col_scale[static_cast<std::size_t>(i)];
  }
  const auto scaled_g = solve_normal_equations(gram, proj, M, &out.warnings);
  out.g_odd.resize(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m)
    out.g_odd[static_cast<std::size_t>(m)] =
        scaled_g[static_cast<std::size_t>(m)] / col_scale[static_cast<std::size_t>(m)];

  out.log_scale = zetakernel::log_h_factor(s).real();
  const auto derivs_s =
      zetakernel::xi_derivatives_upto_scaled(s, kmax, out.log_scale);
  KahanC rhs_acc;
  for (int m = 1; m <= M; ++m)
    rhs_acc.add(out.g_odd[static_cast<std::size_t>(m) - 1] *
                derivs_s[static_cast<std::size_t>(2 * m - 1)]);
  out.rhs = rhs_acc.sum;
  out.lhs = lhs_scaled(s, out.log_scale);
  const double denom =
      std::max(std::max(std::abs(out.lhs), std::abs(out.rhs)), 1e-300);
  out.rel_error = std::abs(out.lhs - out.rhs) / denom;
  return out;
}

}  // namespace mollicrit::gfun
