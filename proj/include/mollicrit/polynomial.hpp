#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mollicrit {

// Dense real polynomial, coefficients in ascending degree. Evaluation is
// plain Horner; the coefficient vector keeps no hidden normalization beyond
// trimming trailing zeros.
class RealPolynomial {
 public:
  RealPolynomial() = default;
  explicit RealPolynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    trim();
  }

  static RealPolynomial zero() { return RealPolynomial{}; }
  static RealPolynomial constant(double a) { return RealPolynomial{{a}}; }

  const std::vector<double>& coefficients() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  double operator()(double x) const {
    double r = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
  }
  std::complex<double> operator()(std::complex<double> x) const {
    std::complex<double> r = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
  }

  double coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }

  RealPolynomial derivative() const {
    if (c_.size() <= 1) return zero();
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * double(i);
    return RealPolynomial(std::move(d));
  }

  RealPolynomial& operator+=(const RealPolynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  friend RealPolynomial operator+(RealPolynomial a, const RealPolynomial& b) {
    a += b;
    return a;
  }
  friend RealPolynomial operator*(double k, RealPolynomial p) {
    for (double& v : p.c_) v *= k;
    p.trim();
    return p;
  }
  friend RealPolynomial operator*(const RealPolynomial& a,
                                  const RealPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    std::vector<double> r(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return RealPolynomial(std::move(r));
  }

  // p(x + shift): expand around a translated argument, exact in coefficients.
  RealPolynomial shifted_argument(double shift) const {
    RealPolynomial result;
    RealPolynomial basis = constant(1.0);
    const RealPolynomial lin({shift, 1.0});
    for (std::size_t i = 0; i < c_.size(); ++i) {
      result += c_[i] * basis;
      basis = basis * lin;
    }
    return result;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }
  std::vector<double> c_;
};

}  // namespace mollicrit
