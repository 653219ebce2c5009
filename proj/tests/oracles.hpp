#pragma once

// Slow reference implementations, independent of the library code paths.
// Everything here favors obviousness over speed: plain loops, std::pow,
// left-to-right accumulation.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracles {

using cdouble = std::complex<double>;

struct Rng {
  uint64_t x = 0x2545f4914f6cdd1dull;
  double next01() {
    x = x * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(x >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * next01(); }
};

inline cdouble dirichlet_series(const std::vector<cdouble>& a, cdouble s) {
  cdouble sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    sum += a[i] * std::pow(cdouble(static_cast<double>(i + 1), 0.0), -s);
  return sum;
}

// Truncated weighted sum accumulated largest-l first.
inline cdouble g_sum_reversed(cdouble s, double alpha, double T, long long N) {
  const double L = std::log(T);
  cdouble sum = 0.0;
  for (long long l = N; l >= 1; --l) {
    const double u = std::log(static_cast<double>(l)) / L;
    sum += std::tanh(alpha / 2.0 * (u - 0.5)) *
           std::pow(cdouble(static_cast<double>(l), 0.0), -s);
  }
  return -0.5 * sum;
}

inline double simpson(const std::function<double(double)>& f, double lo,
                      double hi, int n) {
  if (n % 2) ++n;
  const double h = (hi - lo) / n;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) acc += ((i % 2) ? 4.0 : 2.0) * f(lo + i * h);
  return acc * h / 3.0;
}

inline double midpoint_abs_integral(const std::function<cdouble(double)>& f,
                                    double lo, double hi, long long n) {
  const double h = (hi - lo) / static_cast<double>(n);
  double acc = 0.0;
  for (long long i = 0; i < n; ++i)
    acc += std::abs(f(lo + (static_cast<double>(i) + 0.5) * h));
  return acc * h;
}

inline cdouble central_diff(const std::function<cdouble(cdouble)>& f,
                            cdouble s, double h) {
  return (f(s + cdouble(h, 0.0)) - f(s - cdouble(h, 0.0))) / (2.0 * h);
}

inline int mobius_trial(long n) {
  int count = 0;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    ++count;
  }
  if (n > 1) ++count;
  return (count % 2) ? -1 : 1;
}

inline std::vector<long> distinct_primes_trial(long n) {
  std::vector<long> out;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Sum over ordered j-tuples of distinct primes dividing m of the product of
// their logs, by explicit enumeration.
inline double ordered_tuple_log_sum(long m, int j) {
  const auto primes = distinct_primes_trial(m);
  const int np = static_cast<int>(primes.size());
  if (j > np) return 0.0;
  double total = 0.0;
  std::vector<int> idx(j, 0);
  std::vector<bool> used(np, false);
  std::function<void(int, double)> rec = [&](int depth, double prod) {
    if (depth == j) {
      total += prod;
      return;
    }
    for (int i = 0; i < np; ++i) {
      if (used[i]) continue;
      used[i] = true;
      rec(depth + 1, prod * std::log(static_cast<double>(primes[i])));
      used[i] = false;
    }
  };
  rec(0, 1.0);
  return total;
}

}  // namespace oracles
