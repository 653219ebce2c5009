#include "mollicrit/mollikit.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mollicrit/constants.hpp"
#include "mollicrit/parallel.hpp"
#include "mollicrit/specfun.hpp"

namespace mollicrit::mollikit {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// (1-2x)^k expanded in the monomial basis.
RealPolynomial one_minus_2x_pow(int k) {
  RealPolynomial base({1.0, -2.0});
  RealPolynomial acc = RealPolynomial::constant(1.0);
  for (int i = 0; i < k; ++i) acc = acc * base;
  return acc;
}

// Shared skeleton of the two odd (1-2x)-series; sign_offset 1 selects
// (-1)^{(k-1)/2}, -1 selects (-1)^{(k+1)/2}.
RealPolynomial odd_series_polynomial(double alpha, int K, int sign_offset) {
  require(K >= 1 && K % 2 == 1, "series order K must be a positive odd integer");
  RealPolynomial sum = RealPolynomial::constant(0.5);
  const double ratio = alpha / constants::two_pi;  // (sgn alpha)^k (1-eps/2pi)^k
  double ratio_pow = ratio;
  for (int k = 1; k <= K; k += 2) {
    const int half = (sign_offset > 0) ? (k - 1) / 2 : (k + 1) / 2;
    const double sign = (half % 2 == 0) ? 1.0 : -1.0;
    const double coeff = (2.0 / constants::pi) * sign * ratio_pow *
                         specfun::zeta_even(k + 1) * (1.0 - std::ldexp(1.0, -(k + 1)));
    sum += coeff * one_minus_2x_pow(k);
    ratio_pow *= ratio * ratio;
  }
  return sum;
}

double series_value(double x, double alpha, int K, int sign_offset) {
  require(K >= 1 && K % 2 == 1, "series order K must be a positive odd integer");
  const double z = 1.0 - 2.0 * x;
  const double ratio = alpha / constants::two_pi;
  double zp = ratio * z;
  double acc = 0.5;
  for (int k = 1; k <= K; k += 2) {
    const int half = (sign_offset > 0) ? (k - 1) / 2 : (k + 1) / 2;
    const double sign = (half % 2 == 0) ? 1.0 : -1.0;
    acc += (2.0 / constants::pi) * sign * zp * specfun::zeta_even(k + 1) *
           (1.0 - std::ldexp(1.0, -(k + 1)));
    zp *= (ratio * z) * (ratio * z);
  }
  return acc;
}

void append_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_f64_le(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  append_u64_le(out, bits);
}

std::uint64_t read_u64_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

constexpr char kBinaryMagic[4] = {'M', 'D', 'P', '1'};

}  // namespace

double MollifierConfig::y() const { return std::pow(T, theta); }
double MollifierConfig::y1() const { return std::pow(T, theta1); }
double MollifierConfig::delta_sigma() const { return alpha / std::log(T); }

void MollifierConfig::validate() const {
  require(R > 0.0, "R must be positive");
  require(I >= 2, "I must be at least 2");
  require(K >= 1 && K % 2 == 1, "K must be a positive odd integer");
  require(K0 >= 1 && K0 % 2 == 1, "K0 must be a positive odd integer");
  require(T > 1.0, "T must exceed 1");
  require(theta <= 4.0 / 7.0 + 1e-12, "theta must not exceed 4/7");
  require(theta1 <= 0.5 + 1e-12, "theta1 must not exceed 1/2");
  require(y() >= 2.0, "T^theta must be at least 2");
  require(y1() >= 2.0, "T^theta1 must be at least 2");
  require(static_cast<int>(P.size()) == I, "need exactly I polynomials");
  require(std::abs(P[0](0.0)) <= 1e-12, "leading polynomial must vanish at 0");
  require(std::abs(P[0](1.0) - 1.0) <= 1e-12, "leading polynomial must be 1 at 1");
  for (int l = 1; l < I; ++l)
    require(std::abs(P[static_cast<size_t>(l)](0.0)) <= 1e-12,
            "higher polynomials must vanish at 0");
  require(std::abs(Q_tilde(0.0) - 1.0) <= 1e-12, "Q_tilde must be 1 at 0");
}

MollifierConfig feng_polynomials_default(double T) {
  MollifierConfig cfg;
  cfg.T = T;

  // Leading piece in the x(1-x)^j basis, expanded.
  const RealPolynomial x({0.0, 1.0});
  const RealPolynomial omx({1.0, -1.0});
  RealPolynomial p1 = x;
  const double c1[5] = {0.138173, -0.445606, -4.039834, 7.506942, -3.239261};
  RealPolynomial basis = x;
  for (int j = 0; j < 5; ++j) {
    basis = basis * omx;  // x (1-x)^{j+1}
    p1 += c1[j] * basis;
  }
  cfg.P.push_back(p1);
  cfg.P.push_back(RealPolynomial({0.0, -0.101269, 3.571698, -1.807283, -0.929884}));
  cfg.P.push_back(RealPolynomial({0.0, 1.334025, -3.018815, 1.133072}));
  cfg.P.push_back(RealPolynomial({0.0, -0.546630, 0.372783}));
  cfg.P.push_back(RealPolynomial({0.0, -1.029768}));

  // 1 - 0.6684 x - 1.0798 (x^2/2 - x^3/3) - 5.0447 (x^3/3 - x^4/2 + x^5/5)
  cfg.Q_tilde = RealPolynomial({1.0}) + (-0.6684) * x +
                (-1.0798) * RealPolynomial({0.0, 0.0, 0.5, -1.0 / 3.0}) +
                (-5.0447) * RealPolynomial({0.0, 0.0, 0.0, 1.0 / 3.0, -0.5, 0.2});
  cfg.Q0 = cfg.Q_tilde;

  cfg.epsilon1 = calibrate_epsilon1(cfg);
  cfg.validate();
  return cfg;
}

double calibrate_epsilon1(const MollifierConfig& cfg) {
  const double q00 = cfg.Q0(0.0);
  if (q00 == 0.0)
    throw std::invalid_argument("epsilon1 normalization undefined: Q0(0) = 0");
  return (1.0 - q_one_series(0.0, cfg.alpha, cfg.K)) / q00;
}

double q_one_series(double x, double alpha, int K) { return series_value(x, alpha, K, +1); }
double q_big_series(double x, double alpha, int K) { return series_value(x, alpha, K, -1); }

RealPolynomial q_one_series_polynomial(double alpha, int K) {
  return odd_series_polynomial(alpha, K, +1);
}
RealPolynomial q_big_series_polynomial(double alpha, int K) {
  return odd_series_polynomial(alpha, K, -1);
}

double q_one_poly(double x, const MollifierConfig& cfg) {
  return q_one_series(x, cfg.alpha, cfg.K) + cfg.epsilon1 * cfg.Q0(x);
}

double q_big_poly(double x, const MollifierConfig& cfg) {
  return q_big_series(x, cfg.alpha, cfg.K);
}

RealPolynomial q_one_polynomial(const MollifierConfig& cfg) {
  return q_one_series_polynomial(cfg.alpha, cfg.K) + cfg.epsilon1 * cfg.Q0;
}

RealPolynomial q_big_polynomial(const MollifierConfig& cfg) {
  return q_big_series_polynomial(cfg.alpha, cfg.K);
}

double q_one_limit(double x, const MollifierConfig& cfg) {
  const double q00 = cfg.Q0(0.0);
  if (q00 == 0.0)
    throw std::invalid_argument("limit normalization undefined: Q0(0) = 0");
  const double cap = 0.5 - 0.5 * std::tanh(cfg.alpha / 4.0);
  return 0.5 - 0.5 * std::tanh(cfg.alpha / 2.0 * (x - 0.5)) + cap / q00 * cfg.Q0(x);
}

double q_big_limit(double x, const MollifierConfig& cfg) {
  return 0.5 + 0.5 * std::tanh(cfg.alpha / 2.0 * (x - 0.5));
}

double tilde_q_symmetry_defect(const RealPolynomial& q_tilde, int grid_points) {
  require(grid_points >= 2, "grid must have at least two points");
  const double target = q_tilde(0.0) + q_tilde(1.0);
  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double t = static_cast<double>(i) / (grid_points - 1);
    worst = std::max(worst, std::abs(q_tilde(t) + q_tilde(1.0 - t) - target));
  }
  return worst;
}

DirichletPolynomial DirichletPolynomial::unit() {
  DirichletPolynomial dp;
  dp.a.assign(1, cdouble(1.0, 0.0));
  return dp;
}

ArithmeticTables ArithmeticTables::build(long max_n) {
  require(max_n >= 1, "table size must be positive");
  if (max_n > static_cast<long>(tol().sieve_ceiling))
    throw std::invalid_argument("sieve table size exceeds the supported ceiling");
  ArithmeticTables t;
  t.max_n = max_n;
  t.mu.assign(static_cast<size_t>(max_n) + 1, 0);
  t.spf.assign(static_cast<size_t>(max_n) + 1, 0);
  t.mu[1] = 1;
  std::vector<int32_t> primes;
  for (long i = 2; i <= max_n; ++i) {
    if (t.spf[static_cast<size_t>(i)] == 0) {
      t.spf[static_cast<size_t>(i)] = static_cast<int32_t>(i);
      t.mu[static_cast<size_t>(i)] = -1;
      primes.push_back(static_cast<int32_t>(i));
    }
    for (int32_t p : primes) {
      if (p > t.spf[static_cast<size_t>(i)] || p > max_n / i) break;
      const size_t ip = static_cast<size_t>(p) * static_cast<size_t>(i);
      t.spf[ip] = p;
      t.mu[ip] = (p == t.spf[static_cast<size_t>(i)])
                     ? 0
                     : static_cast<int8_t>(-t.mu[static_cast<size_t>(i)]);
    }
  }
  return t;
}

int ArithmeticTables::mobius(long n) const {
  require(n >= 1 && n <= max_n, "Moebius query outside table range");
  return mu[static_cast<size_t>(n)];
}

std::vector<std::pair<long, int>> ArithmeticTables::factor(long n) const {
  require(n >= 1 && n <= max_n, "factor query outside table range");
  std::vector<std::pair<long, int>> out;
  while (n > 1) {
    const long p = spf[static_cast<size_t>(n)];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  return out;
}

DirichletPolynomial mollifier_coefficients(const MollifierConfig& cfg,
                                           const ArithmeticTables& tables) {
  cfg.validate();
  const double y = cfg.y();
  const double y1 = cfg.y1();
  const long n_coeffs = static_cast<long>(std::floor(y));
  if (tables.max_n < n_coeffs)
    throw std::invalid_argument("arithmetic tables smaller than T^theta");

  const double log_y = std::log(y);
  const double log_y1 = std::log(y1);
  const double damp = cfg.R / std::log(cfg.T);
  const int max_j = cfg.I;

  DirichletPolynomial dp;
  dp.a.assign(static_cast<size_t>(n_coeffs), cdouble(0.0, 0.0));
  par::parallel_for(static_cast<size_t>(n_coeffs), [&](size_t idx) {
    const long m = static_cast<long>(idx) + 1;
    const int mob = tables.mu[static_cast<size_t>(m)];
    if (mob == 0) return;
    const double weight = mob * std::pow(static_cast<double>(m), -damp);
    double value = cfg.P[0](std::log(y / m) / log_y);
    if (m <= static_cast<long>(std::floor(y1))) {
      // Elementary symmetric sums of the prime logs; ordered tuples of
      // distinct primes contribute j! times the unordered subset.
      std::vector<double> e(static_cast<size_t>(max_j) + 1, 0.0);
      e[0] = 1.0;
      int omega = 0;
      long rest = m;
      while (rest > 1) {
        const long p = tables.spf[static_cast<size_t>(rest)];
        rest /= p;  // squarefree: each prime appears once
        ++omega;
        const double lp = std::log(static_cast<double>(p));
        for (int j = std::min(omega, max_j); j >= 1; --j)
          e[static_cast<size_t>(j)] += e[static_cast<size_t>(j - 1)] * lp;
      }
      const double x1 = std::log(y1 / m) / log_y1;
      double fact = 1.0;   // j!
      double scale = 1.0;  // log^{-j} y1
      for (int j = 1; j <= std::min(omega, max_j); ++j) {
        fact *= j;
        scale /= log_y1;
        if (j >= 2) value += fact * e[static_cast<size_t>(j)] * scale *
                             cfg.P[static_cast<size_t>(j - 1)](x1);
      }
    }
    dp.a[idx] = weight * value;
  });
  return dp;
}

DirichletPolynomial g_dirichlet_poly(const MollifierConfig& cfg, cdouble delta) {
  cfg.validate();
  const long n_coeffs = static_cast<long>(std::floor(cfg.T));
  const double log_t = std::log(cfg.T);
  const RealPolynomial q1 = q_one_polynomial(cfg);
  DirichletPolynomial dp;
  dp.a.assign(static_cast<size_t>(n_coeffs), cdouble(0.0, 0.0));
  par::parallel_for(static_cast<size_t>(n_coeffs), [&](size_t idx) {
    const cdouble arg = std::log(static_cast<double>(idx + 1)) / log_t + delta;
    dp.a[idx] = q1(arg);
  });
  return dp;
}

DirichletPolynomial g_dirichlet_poly_translated(const MollifierConfig& cfg, cdouble delta) {
  cfg.validate();
  const long n_coeffs = static_cast<long>(std::floor(cfg.T));
  const double log_t = std::log(cfg.T);
  const double ds = cfg.delta_sigma();
  const double lift = std::exp(cfg.alpha / 2.0);
  const RealPolynomial qb = q_big_polynomial(cfg);
  DirichletPolynomial dp;
  dp.a.assign(static_cast<size_t>(n_coeffs), cdouble(0.0, 0.0));
  par::parallel_for(static_cast<size_t>(n_coeffs), [&](size_t idx) {
    const double l = static_cast<double>(idx + 1);
    const cdouble arg = std::log(l) / log_t + delta;
    dp.a[idx] = lift * qb(arg) * std::pow(l, -ds) + cfg.epsilon1 * cfg.Q0(arg);
  });
  return dp;
}

cdouble evaluate_dirichlet(const DirichletPolynomial& dp, cdouble s) {
  double sum_re = 0.0, sum_im = 0.0, c_re = 0.0, c_im = 0.0;
  for (size_t i = 0; i < dp.a.size(); ++i) {
    const cdouble term =
        dp.a[i] * std::exp(-s * std::log(static_cast<double>(i + 1)));
    const double yr = term.real() - c_re;
    const double tr = sum_re + yr;
    c_re = (tr - sum_re) - yr;
    sum_re = tr;
    const double yi = term.imag() - c_im;
    const double ti = sum_im + yi;
    c_im = (ti - sum_im) - yi;
    sum_im = ti;
  }
  return {sum_re, sum_im};
}

std::vector<cdouble> evaluate_dirichlet_grid(const DirichletPolynomial& dp,
                                             double a, double t0, double dt,
                                             int count, int resync_every) {
  require(count >= 1, "grid must have at least one point");
  require(resync_every >= 1, "resync interval must be positive");
  const size_t n_total = dp.a.size();
  constexpr size_t kBlock = 4096;
  const size_t n_blocks = (n_total + kBlock - 1) / kBlock;

  std::vector<cdouble> out(static_cast<size_t>(count), cdouble(0.0, 0.0));
  std::vector<cdouble> comp(static_cast<size_t>(count), cdouble(0.0, 0.0));

  auto eval_block = [&](size_t b) {
    std::vector<cdouble> acc(static_cast<size_t>(count), cdouble(0.0, 0.0));
    const size_t lo = b * kBlock;
    const size_t hi = std::min(lo + kBlock, n_total);
    for (size_t i = lo; i < hi; ++i) {
      const cdouble cn = dp.a[i];
      if (cn == cdouble(0.0, 0.0)) continue;
      const double ln_n = std::log(static_cast<double>(i + 1));
      const cdouble scaled = cn * std::exp(-a * ln_n);
      const cdouble rot = std::polar(1.0, -dt * ln_n);
      cdouble ph = scaled * std::polar(1.0, -t0 * ln_n);
      int since_sync = 0;
      for (int j = 0; j < count; ++j) {
        acc[static_cast<size_t>(j)] += ph;
        if (++since_sync == resync_every) {
          ph = scaled * std::polar(1.0, -(t0 + (j + 1) * dt) * ln_n);
          since_sync = 0;
        } else {
          ph *= rot;
        }
      }
    }
    return acc;
  };

  par::ordered_reduce<std::vector<cdouble>>(
      n_blocks, eval_block, [&](std::vector<cdouble>&& acc, size_t) {
        for (int j = 0; j < count; ++j) {
          const size_t k = static_cast<size_t>(j);
          const double yr = acc[k].real() - comp[k].real();
          const double tr = out[k].real() + yr;
          const double cr = (tr - out[k].real()) - yr;
          const double yi = acc[k].imag() - comp[k].imag();
          const double ti = out[k].imag() + yi;
          const double ci = (ti - out[k].imag()) - yi;
          out[k] = {tr, ti};
          comp[k] = {cr, ci};
        }
      });
  return out;
}

void write_dirichlet_binary(const DirichletPolynomial& dp, const std::string& path) {
  std::string buf;
  buf.reserve(12 + 16 * dp.a.size());
  buf.append(kBinaryMagic, 4);
  append_u64_le(buf, dp.a.size());
  for (const cdouble& c : dp.a) {
    append_f64_le(buf, c.real());
    append_f64_le(buf, c.imag());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

DirichletPolynomial read_dirichlet_binary(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (buf.size() < 12 || std::memcmp(buf.data(), kBinaryMagic, 4) != 0)
    throw std::runtime_error("not a coefficient file: " + path);
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  const std::uint64_t n = read_u64_le(p + 4);
  if (buf.size() != 12 + 16 * n)
    throw std::runtime_error("truncated coefficient file: " + path);
  DirichletPolynomial dp;
  dp.a.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    std::uint64_t re_bits = read_u64_le(p + 12 + 16 * i);
    std::uint64_t im_bits = read_u64_le(p + 20 + 16 * i);
    double re, im;
    std::memcpy(&re, &re_bits, sizeof re);
    std::memcpy(&im, &im_bits, sizeof im);
    dp.a[i] = {re, im};
  }
  return dp;
}

std::string dirichlet_to_csv(const DirichletPolynomial& dp) {
  std::ostringstream out;
  out << "n,re,im\r\n";
  for (size_t i = 0; i < dp.a.size(); ++i)
    out << (i + 1) << ',' << csvio::format_real(dp.a[i].real()) << ','
        << csvio::format_real(dp.a[i].imag()) << "\r\n";
  return out.str();
}

namespace {

RealPolynomial poly_from_list(const csvio::ConfigMap& m, const std::string& key,
                              const RealPolynomial& fallback) {
  if (!m.has(key)) return fallback;
  return RealPolynomial(m.get_list(key));
}

}  // namespace

MollifierConfig config_from_map(const csvio::ConfigMap& m) {
  MollifierConfig cfg = feng_polynomials_default();
  cfg.T = m.has("mollifier.T") ? m.get_double("mollifier.T") : cfg.T;
  cfg.theta = m.has("mollifier.theta") ? m.get_double("mollifier.theta") : cfg.theta;
  cfg.theta1 = m.has("mollifier.theta1") ? m.get_double("mollifier.theta1") : cfg.theta1;
  cfg.R = m.has("mollifier.R") ? m.get_double("mollifier.R") : cfg.R;
  cfg.I = m.has("mollifier.I") ? m.get_int("mollifier.I") : cfg.I;
  cfg.alpha = m.has("mollifier.alpha") ? m.get_double("mollifier.alpha") : cfg.alpha;
  cfg.K = m.has("mollifier.K") ? m.get_int("mollifier.K") : cfg.K;
  cfg.K0 = m.has("mollifier.K0") ? m.get_int("mollifier.K0") : cfg.K;
  std::vector<RealPolynomial> p;
  for (int l = 1;; ++l) {
    const std::string key = "mollifier.P" + std::to_string(l);
    if (!m.has(key)) break;
    p.push_back(RealPolynomial(m.get_list(key)));
  }
  if (!p.empty()) {
    cfg.P = std::move(p);
    cfg.I = static_cast<int>(cfg.P.size());
  } else if (cfg.I != 5) {
    throw std::invalid_argument(
        "custom mollifier.I requires explicit mollifier.P1..PI lists");
  }
  cfg.Q_tilde = poly_from_list(m, "mollifier.Q_tilde", cfg.Q_tilde);
  cfg.Q0 = poly_from_list(m, "mollifier.Q0", cfg.Q_tilde);
  cfg.epsilon1 = m.has("mollifier.epsilon1") ? m.get_double("mollifier.epsilon1")
                                             : calibrate_epsilon1(cfg);
  cfg.validate();
  return cfg;
}

}  // namespace mollicrit::mollikit
