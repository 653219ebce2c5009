#pragma once

#include <complex>
#include <string>
#include <vector>

#include "mollicrit/mollikit.hpp"

namespace mollicrit::proportion {

using cdouble = std::complex<double>;
using mollikit::DirichletPolynomial;
using mollikit::MollifierConfig;

// Dirichlet convolution: c_n = sum_{l m = n} a_l b_m, length = len(a)*len(b).
// Index-ordered accumulation, deterministic for any worker count. Throws
// std::length_error past the configured ceiling.
DirichletPolynomial convolve(const DirichletPolynomial& a,
                             const DirichletPolynomial& b);

struct AssembleOptions {
  bool identity = false;      // skip the product entirely: F = 1 at n = 1
  bool translated_g = false;  // build G from the translated representation
  cdouble delta = 0.0;        // argument shift passed to the G builder
};

// F = G * M as coefficient arrays.
DirichletPolynomial assemble_f(const MollifierConfig& cfg);
DirichletPolynomial assemble_f(const MollifierConfig& cfg,
                               const AssembleOptions& opt);

struct IntegralEstimate {
  double value = 0.0;    // (1/T) int_T^{2T} |f(a+it)| dt
  double err_est = 0.0;  // half the fine/coarse Simpson discrepancy
  bool undersampled = false;
  long long grid_n = 0;  // intervals actually used (rounded up to mult. of 4)
};

// Default sampling density: 8 points per expected oscillation of |f| over
// [T, 2T] (top frequency log(len) in t).
long long default_grid_points(double T, long length);

// Composite Simpson of |f(a+it)| over the window, with the stride-2
// subsample of the same evaluations as the coarse comparator.
IntegralEstimate integrate_abs(const DirichletPolynomial& f, double a,
                               double T, long long grid_n);

struct ProportionRun {
  MollifierConfig cfg;
  bool identity = false;
  bool translated_g = false;
  double a = 0.0;  // 1/2 - R / log T
  long long grid = 0;
  double I_R = 0.0;
  double quadrature_error_estimate = 0.0;
  double bound = 0.0;  // 1 - (2/R) log I_R; the O(1/log T) term is excluded
  bool undersampled = false;
  long long n_window = -1;  // sign changes of Z on [T, 2T]; -1 when skipped
  double wall_time_seconds = 0.0;  // console diagnostics only, never serialized
  std::vector<std::string> warnings;
};

struct BoundRequest {
  MollifierConfig cfg;
  long long grid_n = 0;  // 0 picks the default density
  bool identity = false;
  bool translated_g = false;
  bool count_window_zeros = true;
};

ProportionRun bound_report(const BoundRequest& req);

// Deterministic serializations (wall time deliberately omitted).
std::string proportion_run_to_json(const ProportionRun& r);
std::string proportion_run_to_csv(const ProportionRun& r);  // header + row

}  // namespace mollicrit::proportion
