#pragma once

#include <complex>
#include <string>
#include <vector>

namespace mollicrit::zetakernel {

using cdouble = std::complex<double>;

// Euler-Maclaurin zeta with cutoff N = max(20, 2|Im s|) and 8 tail
// corrections; reliable for -2 <= Re s <= 10, |Im s| <= 1e4 (degrades
// gracefully above). Throws at the pole s = 1.
cdouble zeta(cdouble s);

// H(s) = (1-s) pi^(-s/2) Gamma(s/2 + 1), identically (1/2) s (1-s)
// pi^(-s/2) Gamma(s/2); the Gamma(s/2+1) form absorbs the s = 0 limit and
// gives H(1) = 0 exactly. Poles remain at s = -2, -4, ...
cdouble h_factor(cdouble s);

// log H(s); throws where H vanishes (s = 1) or has poles. Used for ratio
// work at heights where H itself underflows.
cdouble log_h_factor(cdouble s);

// Completed xi(s) = H(s) zeta(s): entire, xi(s) = xi(1-s). Near s = 1 the
// removable pole is handled through the Stieltjes expansion of (1-s) zeta(s);
// left of Re s = -1/2 the value is taken from the reflected point.
cdouble xi(cdouble s);

// Phase theta(t) with e^{i theta(t)} zeta(1/2 + it) real-valued.
double theta_phase(double t);
double hardy_z(double t);

// Batch of Z over the uniform grid t_j = t0 + j*h, j = 0..count-1. Each value
// matches hardy_z(t_j) to rounding; chunks are fixed so results do not depend
// on the worker count.
std::vector<double> hardy_z_grid(double t0, double h, int count);

struct CriticalWindow {
  double t_lo = 0.0;
  double t_hi = 0.0;
};

struct ZeroCountReport {
  CriticalWindow window;
  long long n_sign_changes = 0;
  double n_rvm = 0.0;      // main-terms count difference across the window
  double s_residual = 0.0; // n_sign_changes - n_rvm
  std::vector<double> zero_locations;
  std::vector<std::string> warnings;
};

// Sign-change scan of Z at the given step with bisection refinement.
ZeroCountReport count_zeros(const CriticalWindow& w, double scan_step = 0.05);

// Riemann-von Mangoldt main terms at height t.
double rvm_main_terms(double t);

std::string report_to_json(const ZeroCountReport& r);
std::string report_to_csv(const ZeroCountReport& r);  // header + one row

// k-th derivative of xi by the Cauchy integral over a circle of the given
// radius, trapezoidal in the angle (spectrally accurate). The node count is
// doubled internally; agreement between the two resolutions is reported.
struct XiDerivative {
  cdouble value;
  double node_agreement = 0.0;  // |fine - coarse| / (1 + |fine|)
  bool node_warning = false;
};
XiDerivative xi_derivative_ex(cdouble s, int k, double radius = 0.25,
                              int nodes = 128);
cdouble xi_derivative(cdouble s, int k, double radius = 0.25);

// All orders 0..k_max from a single sample ring.
std::vector<cdouble> xi_derivatives_upto(cdouble s, int k_max,
                                         double radius = 0.25,
                                         int nodes = 256);

// Same contour with every ring value damped by exp(-log_scale); pass the
// local size of Re log H so high-t derivatives stay inside double range.
std::vector<cdouble> xi_derivatives_upto_scaled(cdouble s, int k_max,
                                                double log_scale,
                                                double radius = 0.25,
                                                int nodes = 256);

}  // namespace mollicrit::zetakernel
