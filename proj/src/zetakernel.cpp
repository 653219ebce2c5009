#include "mollicrit/zetakernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mollicrit/constants.hpp"
#include "mollicrit/csvio.hpp"
#include "mollicrit/parallel.hpp"
#include "mollicrit/specfun.hpp"

namespace mollicrit::zetakernel {

namespace {

constexpr int kEmCorrections = 8;

int em_cutoff(double abs_t) {
  return std::max(20, static_cast<int>(std::ceil(2.0 * abs_t)));
}

// Euler-Maclaurin main formula with cutoff N:
//   zeta(s) = sum_{n<N} n^-s + N^-s/2 + N^(1-s)/(s-1)
//           + sum_j B_2j/(2j)! (s)_{2j-1} N^(-s-2j+1)
cdouble zeta_em(cdouble s, int n_cut) {
  cdouble sum = 0.0;
  for (int n = n_cut - 1; n >= 2; --n) sum += std::exp(-s * std::log(double(n)));
  sum += 1.0;
  const cdouble log_n = std::log(double(n_cut));
  const cdouble n_pow = std::exp(-s * log_n);  // N^-s
  sum += 0.5 * n_pow;
  sum += n_pow * double(n_cut) / (s - 1.0);
  const auto& bern = specfun::BernoulliTable::standard();
  cdouble poch = s;                       // (s)_1
  cdouble scale = n_pow / double(n_cut);  // N^(-s-1)
  double fact = 2.0;                      // (2j)!
  for (int j = 1; j <= kEmCorrections; ++j) {
    sum += bern.at(2 * j) / fact * poch * scale;
    // advance (s)_{2j-1} -> (s)_{2j+1}, N^(-s-2j+1) -> N^(-s-2j-1), (2j)!->(2j+2)!
    poch *= (s + double(2 * j - 1)) * (s + double(2 * j));
    scale /= double(n_cut) * double(n_cut);
    fact *= double(2 * j + 1) * double(2 * j + 2);
  }
  return sum;
}

}  // namespace

cdouble zeta(cdouble s) {
  if (s == cdouble(1.0, 0.0)) throw std::domain_error("zeta pole at s = 1");
  return zeta_em(s, em_cutoff(std::abs(s.imag())));
}

cdouble h_factor(cdouble s) {
  return (1.0 - s) * std::exp(-0.5 * s * constants::ln_pi) *
         specfun::gamma_complex(0.5 * s + 1.0);
}

cdouble log_h_factor(cdouble s) {
  if (s == cdouble(1.0, 0.0))
    throw std::domain_error("log H undefined where H vanishes (s = 1)");
  return std::log(1.0 - s) - 0.5 * s * constants::ln_pi +
         specfun::log_gamma(0.5 * s + 1.0);
}

namespace {

// xi around the removable point s = 1: xi = pi^(-s/2) Gamma(s/2+1) * (1-s)
// zeta(s), and (1-s) zeta(s) = -1 - sum_n (-1)^n gamma_n (s-1)^(n+1) / n!
// with the Stieltjes constants gamma_n.
cdouble xi_near_one(cdouble s) {
  const cdouble u = s - 1.0;
  cdouble acc = 0.0;
  cdouble upow = u;  // (s-1)^(n+1)
  double fact = 1.0, sign = 1.0;
  for (int n = 0; n < 6; ++n) {
    acc += sign * constants::stieltjes[n] * upow / fact;
    upow *= u;
    fact *= (n + 1.0);
    sign = -sign;
  }
  const cdouble h_tilde = std::exp(-0.5 * s * constants::ln_pi) *
                          specfun::gamma_complex(0.5 * s + 1.0);
  return h_tilde * (-1.0 - acc);
}

}  // namespace

cdouble xi(cdouble s) {
  if (s.real() < -0.5) s = 1.0 - s;  // reflected region of the entire function
  if (std::abs(s - cdouble(1.0, 0.0)) <= 0.05) return xi_near_one(s);
  return h_factor(s) * zeta(s);
}

double theta_phase(double t) {
  return specfun::log_gamma(cdouble(0.25, 0.5 * t)).imag() -
         0.5 * t * constants::ln_pi;
}

double hardy_z(double t) {
  const cdouble rot = std::exp(cdouble(0.0, theta_phase(t)));
  return (rot * zeta(cdouble(0.5, t))).real();
}

std::vector<double> hardy_z_grid(double t0, double h, int count) {
  std::vector<double> out(count);
  if (count <= 0) return out;
  const double t_max = t0 + h * (count - 1);
  const int n_cut = em_cutoff(std::max(std::abs(t0), std::abs(t_max)));
  // Shared read-only tables: log n and n^(-1/2).
  std::vector<double> ln(n_cut), rsq(n_cut);
  for (int n = 1; n < n_cut; ++n) {
    ln[n] = std::log(double(n));
    rsq[n] = 1.0 / std::sqrt(double(n));
  }
  constexpr int kChunk = 4096;
  const std::size_t n_chunks = (count + kChunk - 1) / kChunk;
  par::parallel_for(n_chunks, [&](std::size_t ci) {
    const int lo = static_cast<int>(ci) * kChunk;
    const int hi = std::min(count, lo + kChunk);
    for (int j = lo; j < hi; ++j) {
      const double t = t0 + h * j;
      const cdouble s(0.5, t);
      // main sum with precomputed magnitudes
      cdouble sum = 0.0;
      for (int n = n_cut - 1; n >= 2; --n) {
        const double ph = -t * ln[n];
        sum += cdouble(rsq[n] * std::cos(ph), rsq[n] * std::sin(ph));
      }
      sum += 1.0;
      const cdouble n_pow =
          std::exp(-s * std::log(double(n_cut)));
      sum += 0.5 * n_pow + n_pow * double(n_cut) / (s - 1.0);
      const auto& bern = specfun::BernoulliTable::standard();
      cdouble poch = s;
      cdouble scale = n_pow / double(n_cut);
      double fact = 2.0;
      for (int jj = 1; jj <= kEmCorrections; ++jj) {
        sum += bern.at(2 * jj) / fact * poch * scale;
        poch *= (s + double(2 * jj - 1)) * (s + double(2 * jj));
        scale /= double(n_cut) * double(n_cut);
        fact *= double(2 * jj + 1) * double(2 * jj + 2);
      }
      out[j] = (std::exp(cdouble(0.0, theta_phase(t))) * sum).real();
    }
  });
  return out;
}

double rvm_main_terms(double t) {
  if (t <= 0.0) return 0.875;
  const double x = t / constants::two_pi;
  return x * std::log(x) - x + 0.875;
}

ZeroCountReport count_zeros(const CriticalWindow& w, double scan_step) {
  if (!(w.t_lo > 0.0) || !(w.t_hi > w.t_lo))
    throw std::domain_error("count_zeros requires 0 < t_lo < t_hi");
  if (w.t_hi > tol().window_ceiling)
    throw std::domain_error("count_zeros window exceeds the ordinate ceiling");

  ZeroCountReport rep;
  rep.window = w;
  if (w.t_hi > tol().zeta_im_ceiling)
    rep.warnings.push_back(
        "accuracy degrades above Im s = 1e4; counts may be unreliable");

  const double span = w.t_hi - w.t_lo;
  const int n_steps = std::max(1, static_cast<int>(std::ceil(span / scan_step)));
  const double h = span / n_steps;
  const std::vector<double> z = hardy_z_grid(w.t_lo, h, n_steps + 1);

  for (int i = 0; i < n_steps; ++i) {
    const double za = z[i], zb = z[i + 1];
    if (za == 0.0) continue;  // counted with the previous bracket
    if ((za > 0.0) == (zb > 0.0) && zb != 0.0) continue;
    // bisection to the refinement width
    double a = w.t_lo + h * i, b = w.t_lo + h * (i + 1);
    double fa = za;
    while (b - a > tol().zero_bisect) {
      const double m = 0.5 * (a + b);
      const double fm = hardy_z(m);
      if (fm == 0.0) {
        a = b = m;
        break;
      }
      if ((fa > 0.0) == (fm > 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    rep.zero_locations.push_back(0.5 * (a + b));
    ++rep.n_sign_changes;
  }
  for (std::size_t i = 1; i < rep.zero_locations.size(); ++i) {
    if (rep.zero_locations[i] - rep.zero_locations[i - 1] < 2.0 * h) {
      std::ostringstream os;
      os << "refinement-exhausted: zeros closer than two scan steps near t="
         << rep.zero_locations[i];
      rep.warnings.push_back(os.str());
    }
  }
  rep.n_rvm = rvm_main_terms(w.t_hi) - rvm_main_terms(w.t_lo);
  rep.s_residual = static_cast<double>(rep.n_sign_changes) - rep.n_rvm;
  return rep;
}

std::string report_to_json(const ZeroCountReport& r) {
  std::ostringstream os;
  os << "{\n  \"t_lo\": " << csvio::format_real(r.window.t_lo)
     << ",\n  \"t_hi\": " << csvio::format_real(r.window.t_hi)
     << ",\n  \"n_sign_changes\": " << r.n_sign_changes
     << ",\n  \"n_rvm\": " << csvio::format_real(r.n_rvm)
     << ",\n  \"s_residual\": " << csvio::format_real(r.s_residual)
     << ",\n  \"zero_locations\": [";
  for (std::size_t i = 0; i < r.zero_locations.size(); ++i) {
    if (i) os << ", ";
    os << csvio::format_real(r.zero_locations[i]);
  }
  os << "],\n  \"warnings\": [";
  for (std::size_t i = 0; i < r.warnings.size(); ++i) {
    if (i) os << ", ";
    os << csvio::csv_quote_json(r.warnings[i]);
  }
  os << "]\n}\n";
  return os.str();
}

std::string report_to_csv(const ZeroCountReport& r) {
  std::ostringstream os;
  os << "t_lo,t_hi,n_sign_changes,n_rvm,s_residual\r\n";
  os << csvio::format_real(r.window.t_lo) << ','
     << csvio::format_real(r.window.t_hi) << ',' << r.n_sign_changes << ','
     << csvio::format_real(r.n_rvm) << ',' << csvio::format_real(r.s_residual)
     << "\r\n";
  return os.str();
}

XiDerivative xi_derivative_ex(cdouble s, int k, double radius, int nodes) {
  if (k < 0 || k > 40)
    throw std::domain_error("xi_derivative supports orders 0..40");
  if (!(radius > 0.0 && radius <= 0.5))
    throw std::domain_error("xi_derivative radius must lie in (0, 1/2]");
  if (k == 0) return {xi(s), 0.0, false};

  auto contour = [&](int n) {
    // k!/(n r^k) * sum_j xi(s + r e^{i phi_j}) e^{-i k phi_j}
    cdouble acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double phi = constants::two_pi * j / n;
      const cdouble e(std::cos(phi), std::sin(phi));
      acc += xi(s + radius * e) *
             std::exp(cdouble(0.0, -k * phi));
    }
    double kfact = 1.0;
    for (int i = 2; i <= k; ++i) kfact *= i;
    return acc * kfact / (double(n) * std::pow(radius, k));
  };

  const cdouble coarse = contour(nodes);
  const cdouble fine = contour(2 * nodes);
  XiDerivative r;
  r.value = fine;
  r.node_agreement = std::abs(fine - coarse) / (1.0 + std::abs(fine));
  r.node_warning = r.node_agreement > tol().xi_deriv_agree;
  return r;
}

cdouble xi_derivative(cdouble s, int k, double radius) {
  return xi_derivative_ex(s, k, radius, 128).value;
}

namespace {

std::vector<cdouble> ring_to_derivatives(const std::vector<cdouble>& ring,
                                         int k_max, double radius) {
  const int nodes = static_cast<int>(ring.size());
  std::vector<cdouble> out(static_cast<size_t>(k_max) + 1);
  double kfact = 1.0;
  for (int k = 0; k <= k_max; ++k) {
    if (k >= 2) kfact *= k;
    cdouble acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
      const double phi = constants::two_pi * j / nodes;
      acc += ring[static_cast<size_t>(j)] * std::exp(cdouble(0.0, -k * phi));
    }
    out[static_cast<size_t>(k)] = acc * kfact / (double(nodes) * std::pow(radius, k));
  }
  return out;
}

void check_derivative_args(int k_max, double radius) {
  if (k_max < 0 || k_max > 40)
    throw std::domain_error("xi_derivative supports orders 0..40");
  if (!(radius > 0.0 && radius <= 0.5))
    throw std::domain_error("xi_derivative radius must lie in (0, 1/2]");
}

}  // namespace

std::vector<cdouble> xi_derivatives_upto(cdouble s, int k_max, double radius,
                                         int nodes) {
  check_derivative_args(k_max, radius);
  std::vector<cdouble> ring(static_cast<size_t>(nodes));
  for (int j = 0; j < nodes; ++j) {
    const double phi = constants::two_pi * j / nodes;
    ring[static_cast<size_t>(j)] =
        xi(s + radius * cdouble(std::cos(phi), std::sin(phi)));
  }
  return ring_to_derivatives(ring, k_max, radius);
}

std::vector<cdouble> xi_derivatives_upto_scaled(cdouble s, int k_max,
                                                double log_scale, double radius,
                                                int nodes) {
  check_derivative_args(k_max, radius);
  std::vector<cdouble> ring(static_cast<size_t>(nodes));
  for (int j = 0; j < nodes; ++j) {
    const double phi = constants::two_pi * j / nodes;
    const cdouble w = s + radius * cdouble(std::cos(phi), std::sin(phi));
    if (std::abs(w - cdouble(1.0, 0.0)) <= 0.06) {
      ring[static_cast<size_t>(j)] = xi(w) * std::exp(-log_scale);
    } else {
      // exp(log H - scale) * zeta keeps the factors representable at heights
      // where H itself underflows.
      ring[static_cast<size_t>(j)] = std::exp(log_h_factor(w) - log_scale) * zeta(w);
    }
  }
  return ring_to_derivatives(ring, k_max, radius);
}

}  // namespace mollicrit::zetakernel
