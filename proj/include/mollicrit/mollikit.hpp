#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mollicrit/csvio.hpp"
#include "mollicrit/polynomial.hpp"

namespace mollicrit::mollikit {

using cdouble = std::complex<double>;

// Parameter bundle for the smoothing polynomials and the mollifier.
// P[0] is the leading mollifier polynomial (must satisfy P(0)=0, P(1)=1),
// P[1..I-1] the higher pieces (each vanishing at 0). Q_tilde is the
// symmetric reference polynomial; Q0 is the normalization companion used
// by the epsilon1 calibration (defaults to Q_tilde).
struct MollifierConfig {
  double theta = 4.0 / 7.0;
  double theta1 = 0.5;
  double R = 1.3025;
  int I = 5;
  double alpha = 0.1;
  int K = 5;
  int K0 = 5;
  double epsilon1 = 0.0;
  double T = 2000.0;
  std::vector<RealPolynomial> P;
  RealPolynomial Q_tilde;
  RealPolynomial Q0;

  double y() const;
  double y1() const;
  double delta_sigma() const;  // alpha / log T
  void validate() const;       // throws std::invalid_argument on violation
};

// The published parameter set: R=1.3025, I=5, alpha=0.1, K=5, theta=4/7,
// theta1=1/2, the five mollifier polynomials and the symmetric Q_tilde.
// epsilon1 comes out of calibrate_epsilon1.
MollifierConfig feng_polynomials_default(double T = 2000.0);

// Solves q_one_poly(0) = 1 for epsilon1 given cfg.Q0. Throws if Q0(0) = 0.
double calibrate_epsilon1(const MollifierConfig& cfg);

// Truncated odd series in (1-2x): 1/2 + (2/pi) sum_{k odd <= K}
// (alpha/2pi)^k zeta(k+1)(1-2^{-k-1}) (1-2x)^k with sign (-1)^{(k-1)/2}
// for the "one" family and (-1)^{(k+1)/2} for the "big" family.
// The two sum to 1 identically. K must be odd.
double q_one_series(double x, double alpha, int K);
double q_big_series(double x, double alpha, int K);

// Same series assembled as polynomials in x (monomial basis).
RealPolynomial q_one_series_polynomial(double alpha, int K);
RealPolynomial q_big_series_polynomial(double alpha, int K);

// Config-level evaluators: q_one adds epsilon1*Q0; q_big is the plain series.
double q_one_poly(double x, const MollifierConfig& cfg);
double q_big_poly(double x, const MollifierConfig& cfg);
RealPolynomial q_one_polynomial(const MollifierConfig& cfg);
RealPolynomial q_big_polynomial(const MollifierConfig& cfg);

// K -> infinity limits. q_one_limit re-enforces its own normalization,
// epsilon1*Q0(0) = 1/2 - 1/2 tanh(alpha/4); throws if Q0(0) = 0.
double q_one_limit(double x, const MollifierConfig& cfg);
double q_big_limit(double x, const MollifierConfig& cfg);

// max over a [0,1] grid of |Q(x) + Q(1-x) - (Q(0) + Q(1))|; zero means the
// reflection-sum of Q is constant.
double tilde_q_symmetry_defect(const RealPolynomial& q_tilde, int grid_points = 1001);

// Coefficients a_n of a finite Dirichlet sum a_1 1^{-s} + ... + a_N N^{-s}.
struct DirichletPolynomial {
  std::vector<cdouble> a;  // a[i] multiplies (i+1)^{-s}

  long length() const { return static_cast<long>(a.size()); }
  cdouble& at(long n) { return a[static_cast<size_t>(n - 1)]; }
  const cdouble& at(long n) const { return a[static_cast<size_t>(n - 1)]; }
  static DirichletPolynomial unit();  // single coefficient 1 at n=1
};

// Moebius values and smallest prime factors for 1..max_n (linear sieve).
// Factorizations are recovered on demand from the spf table.
struct ArithmeticTables {
  long max_n = 0;
  std::vector<int8_t> mu;     // index n
  std::vector<int32_t> spf;   // smallest prime factor, index n

  static ArithmeticTables build(long max_n);
  int mobius(long n) const;
  // distinct primes with exponents, ascending
  std::vector<std::pair<long, int>> factor(long n) const;
};

// Mollifier coefficients: mu(m) P1(log(y/m)/log y) m^{-R/log T} for m <= y,
// plus for squarefree m <= y1 the ordered-tuple prime sums
// sum_{j=2..I} j! e_j(log p) / log^j y1 * P_j(log(y1/m)/log y1)
// with the same mu(m) m^{-R/log T} weight. e_j is the elementary symmetric
// polynomial in the logs of the distinct primes of m; ordered tuples of
// distinct primes are counted, hence the j! factor.
DirichletPolynomial mollifier_coefficients(const MollifierConfig& cfg,
                                           const ArithmeticTables& tables);

// a_l = q_one(log l / log T + delta) for l = 1..floor(T). delta = 0 keeps the
// coefficients s-independent; a complex delta evaluates the same polynomial
// at the shifted argument (midpoint mode).
DirichletPolynomial g_dirichlet_poly(const MollifierConfig& cfg, cdouble delta = 0.0);

// Alternative builder splitting off the translatable part: the q_big family
// evaluated with the argument translation folded in as l^{-delta_sigma},
// plus the epsilon1*Q0 part. Remainder families with no closed form are
// omitted; intended for qualitative comparisons only.
DirichletPolynomial g_dirichlet_poly_translated(const MollifierConfig& cfg,
                                                cdouble delta = 0.0);

// Compensated single-point evaluation of sum a_n n^{-s}.
cdouble evaluate_dirichlet(const DirichletPolynomial& dp, cdouble s);

// Values of sum a_n n^{-(a + i t)} for t = t0 + j dt, j = 0..count-1.
// Per-n phase rotation with periodic resynchronization; blocked over n with
// a fixed-order combine, so results are identical for any worker count.
std::vector<cdouble> evaluate_dirichlet_grid(const DirichletPolynomial& dp,
                                             double a, double t0, double dt,
                                             int count, int resync_every = 256);

// Binary export: magic "MDP1", u64 coefficient count, then (re, im) pairs of
// little-endian IEEE f64 per coefficient.
void write_dirichlet_binary(const DirichletPolynomial& dp, const std::string& path);
DirichletPolynomial read_dirichlet_binary(const std::string& path);

// CSV (n, re, im) with 17 significant digits; intended for small N.
std::string dirichlet_to_csv(const DirichletPolynomial& dp);

// Reads the mollifier.* keys of a flat key=value config; unset keys keep the
// published defaults. epsilon1 is recalibrated unless given explicitly.
MollifierConfig config_from_map(const csvio::ConfigMap& m);

}  // namespace mollicrit::mollikit
