#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace mollicrit::quad {

struct GLRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;  // weights
};

// Gauss-Legendre rule of order n; nodes from Newton iteration on P_n,
// cached per order. Accurate to ~1e-15 for the orders used here (<= 256).
const GLRule& gauss_legendre(int n);

// Integrate a complex-valued function over the real interval [a, b] with a
// fixed Gauss-Legendre rule.
template <class F>
std::complex<double> gl_integrate(F&& f, double a, double b, int n) {
  const GLRule& r = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i)
    acc += r.w[i] * f(mid + half * r.x[i]);
  return half * acc;
}

// Integrate a complex-valued function along the straight segment [a, b] in
// the complex plane.
template <class F>
std::complex<double> gl_integrate_segment(F&& f, std::complex<double> a,
                                          std::complex<double> b, int n) {
  const GLRule& r = gauss_legendre(n);
  const std::complex<double> mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i)
    acc += r.w[i] * f(mid + half * r.x[i]);
  return half * acc;
}

struct AdaptiveResult {
  std::complex<double> value{0.0, 0.0};
  double error_estimate = 0.0;
  bool converged = true;
  int evaluations = 0;
};

// Adaptive bisection built on the classical 15-point Kronrod extension of
// 7-point Gauss; splits until the local Kronrod-Gauss discrepancy is below
// the requested absolute tolerance.
AdaptiveResult integrate_adaptive(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double abs_tol, int max_depth = 30);

}  // namespace mollicrit::quad
