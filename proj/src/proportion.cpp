#include "mollicrit/proportion.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mollicrit/constants.hpp"
#include "mollicrit/csvio.hpp"
#include "mollicrit/parallel.hpp"
#include "mollicrit/zetakernel.hpp"

namespace mollicrit::proportion {

namespace {

// Simpson weight for point i of 0..n (n even): 1 4 2 4 ... 2 4 1.
double simpson_weight(long long i, long long n) {
  if (i == 0 || i == n) return 1.0;
  return (i & 1) ? 4.0 : 2.0;
}

struct KahanR {
  double s = 0.0, c = 0.0;
  void add(double v) {
    double y = v - c, t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

std::string json_real_array(const std::vector<double>& v) {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += csvio::format_real(v[i]);
  }
  out += "]";
  return out;
}

}  // namespace

DirichletPolynomial convolve(const DirichletPolynomial& a,
                             const DirichletPolynomial& b) {
  if (a.length() == 0 || b.length() == 0)
    throw std::invalid_argument("convolve: empty coefficient array");
  const long long out_len =
      static_cast<long long>(a.length()) * static_cast<long long>(b.length());
  if (out_len > static_cast<long long>(tol().convolution_ceiling))
    throw std::length_error("convolve: product length " +
                            std::to_string(out_len) +
                            " exceeds the configured ceiling");
  // Walk the shorter array as the divisor side; each output index is owned by
  // one worker and summed in a fixed order, so the result is identical for
  // any worker count.
  const bool a_short = a.length() <= b.length();
  const DirichletPolynomial& s = a_short ? a : b;
  const DirichletPolynomial& l = a_short ? b : a;
  const long long s_len = s.length(), l_len = l.length();

  DirichletPolynomial c;
  c.a.assign(static_cast<size_t>(out_len), cdouble(0.0, 0.0));
  par::parallel_for(static_cast<size_t>(out_len), [&](size_t idx) {
    const long long n = static_cast<long long>(idx) + 1;
    cdouble acc(0.0, 0.0);
    const long long d_max = std::min(s_len, n);
    for (long long d = 1; d <= d_max; ++d) {
      if (n % d) continue;
      const long long m = n / d;
      if (m > l_len) continue;
      acc += s.a[static_cast<size_t>(d - 1)] * l.a[static_cast<size_t>(m - 1)];
    }
    c.a[idx] = acc;
  });
  return c;
}

DirichletPolynomial assemble_f(const MollifierConfig& cfg) {
  return assemble_f(cfg, AssembleOptions{});
}

DirichletPolynomial assemble_f(const MollifierConfig& cfg,
                               const AssembleOptions& opt) {
  if (opt.identity) return DirichletPolynomial::unit();
  cfg.validate();
  DirichletPolynomial g = opt.translated_g
                              ? mollikit::g_dirichlet_poly_translated(cfg, opt.delta)
                              : mollikit::g_dirichlet_poly(cfg, opt.delta);
  const long y_len = static_cast<long>(std::floor(cfg.y()));
  const auto tables = mollikit::ArithmeticTables::build(y_len);
  const DirichletPolynomial m = mollikit::mollifier_coefficients(cfg, tables);
  return convolve(g, m);
}

long long default_grid_points(double T, long length) {
  const double top_log = std::log(static_cast<double>(std::max(2L, length)));
  // 8 samples per period of the fastest phase t*log(len) across (T, 2T].
  long long n = static_cast<long long>(
      std::ceil(8.0 * T * top_log / constants::two_pi));
  n = std::max(n, 16LL);
  return (n + 3) / 4 * 4;
}

IntegralEstimate integrate_abs(const DirichletPolynomial& f, double a,
                               double T, long long grid_n) {
  if (!(T > 0.0) || !std::isfinite(T))
    throw std::invalid_argument("integrate_abs: window start must be positive");
  if (f.length() < 1)
    throw std::invalid_argument("integrate_abs: empty coefficient array");
  const double top_log = std::log(static_cast<double>(f.length()));
  const double needed = T * top_log / constants::pi;
  if (static_cast<double>(grid_n) < needed)
    throw std::invalid_argument(
        "integrate_abs: " + std::to_string(grid_n) +
        " intervals undersample the top frequency; need at least " +
        std::to_string(static_cast<long long>(std::ceil(needed))));
  const long long n = (grid_n + 3) / 4 * 4;  // coarse stride-2 pass needs 4 | n
  if (n + 1 > static_cast<long long>(std::numeric_limits<int>::max()))
    throw std::invalid_argument("integrate_abs: grid too large");

  const double dt = T / static_cast<double>(n);
  const auto vals =
      mollikit::evaluate_dirichlet_grid(f, a, T, dt, static_cast<int>(n + 1));

  // Composite Simpson of |f| over [T, 2T], normalized by the window length.
  // Weights sum to exactly 3n, so a constant |f| = 1 integrates to exactly 1.
  KahanR fine_sum, coarse_sum;
  for (long long i = 0; i <= n; ++i) {
    const double av = std::abs(vals[static_cast<size_t>(i)]);
    fine_sum.add(simpson_weight(i, n) * av);
    if ((i & 1) == 0) coarse_sum.add(simpson_weight(i / 2, n / 2) * av);
  }
  const double fine = fine_sum.s / (3.0 * static_cast<double>(n));
  const double coarse = coarse_sum.s / (3.0 * static_cast<double>(n / 2));

  IntegralEstimate est;
  est.value = fine;
  est.err_est = 0.5 * std::abs(fine - coarse);
  est.undersampled = std::abs(fine - coarse) > 0.01 * std::abs(fine);
  est.grid_n = n;
  return est;
}

ProportionRun bound_report(const BoundRequest& req) {
  const auto t0 = std::chrono::steady_clock::now();
  req.cfg.validate();
  const double T = req.cfg.T;
  const double log_t = std::log(T);
  if (!(log_t > 0.0))
    throw std::invalid_argument("bound_report: T must exceed 1");

  ProportionRun out;
  out.cfg = req.cfg;
  out.identity = req.identity;
  out.translated_g = req.translated_g;
  out.a = 0.5 - req.cfg.R / log_t;

  AssembleOptions opt;
  opt.identity = req.identity;
  opt.translated_g = req.translated_g;
  const DirichletPolynomial f = assemble_f(req.cfg, opt);

  const long long grid =
      req.grid_n > 0 ? req.grid_n : default_grid_points(T, f.length());
  const IntegralEstimate est = integrate_abs(f, out.a, T, grid);
  out.grid = est.grid_n;
  out.I_R = est.value;
  out.quadrature_error_estimate = est.err_est;
  out.undersampled = est.undersampled;
  if (est.undersampled)
    out.warnings.push_back(
        "quadrature self-check moved by more than 1%; raise the grid density");
  if (!(est.value > 0.0))
    throw std::runtime_error("bound_report: window integral is not positive");
  out.bound = 1.0 - (2.0 / req.cfg.R) * std::log(est.value);

  if (req.count_window_zeros && T <= tol().window_ceiling) {
    zetakernel::CriticalWindow w{T, 2.0 * T};
    const auto rep = zetakernel::count_zeros(w);
    out.n_window = rep.n_sign_changes;
    for (const auto& msg : rep.warnings) out.warnings.push_back(msg);
  }

  out.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

std::string proportion_run_to_json(const ProportionRun& r) {
  // Field order and formatting are fixed; repeated runs must serialize to
  // identical bytes, so no timing data appears here.
  std::ostringstream os;
  os << "{\n  \"config\": {\n";
  os << "    \"theta\": " << csvio::format_real(r.cfg.theta) << ",\n";
  os << "    \"theta1\": " << csvio::format_real(r.cfg.theta1) << ",\n";
  os << "    \"R\": " << csvio::format_real(r.cfg.R) << ",\n";
  os << "    \"I\": " << r.cfg.I << ",\n";
  os << "    \"alpha\": " << csvio::format_real(r.cfg.alpha) << ",\n";
  os << "    \"K\": " << r.cfg.K << ",\n";
  os << "    \"K0\": " << r.cfg.K0 << ",\n";
  os << "    \"epsilon1\": " << csvio::format_real(r.cfg.epsilon1) << ",\n";
  os << "    \"T\": " << csvio::format_real(r.cfg.T) << ",\n";
  os << "    \"P\": [";
  for (size_t j = 0; j < r.cfg.P.size(); ++j) {
    if (j) os << ",";
    os << json_real_array(r.cfg.P[j].coefficients());
  }
  os << "],\n";
  os << "    \"Q_tilde\": " << json_real_array(r.cfg.Q_tilde.coefficients())
     << ",\n";
  os << "    \"Q0\": " << json_real_array(r.cfg.Q0.coefficients()) << "\n";
  os << "  },\n";
  os << "  \"identity\": " << (r.identity ? "true" : "false") << ",\n";
  os << "  \"translated_g\": " << (r.translated_g ? "true" : "false") << ",\n";
  os << "  \"a\": " << csvio::format_real(r.a) << ",\n";
  os << "  \"grid\": " << r.grid << ",\n";
  os << "  \"I_R\": " << csvio::format_real(r.I_R) << ",\n";
  os << "  \"quadrature_error_estimate\": "
     << csvio::format_real(r.quadrature_error_estimate) << ",\n";
  os << "  \"bound\": " << csvio::format_real(r.bound) << ",\n";
  os << "  \"undersampled\": " << (r.undersampled ? "true" : "false") << ",\n";
  os << "  \"o_term_excluded\": true,\n";
  os << "  \"o_term_note\": \"bound omits the order 1/log T correction\",\n";
  if (r.n_window >= 0)
    os << "  \"n_window\": " << r.n_window << ",\n";
  else
    os << "  \"n_window\": null,\n";
  os << "  \"warnings\": [";
  for (size_t i = 0; i < r.warnings.size(); ++i) {
    if (i) os << ",";
    os << csvio::csv_quote_json(r.warnings[i]);
  }
  os << "]\n}\n";
  return os.str();
}

std::string proportion_run_to_csv(const ProportionRun& r) {
  std::string out = "T,R,alpha,theta,I_R,err_est,bound,N_window\r\n";
  out += csvio::format_real(r.cfg.T) + "," + csvio::format_real(r.cfg.R) +
         "," + csvio::format_real(r.cfg.alpha) + "," +
         csvio::format_real(r.cfg.theta) + "," + csvio::format_real(r.I_R) +
         "," + csvio::format_real(r.quadrature_error_estimate) + "," +
         csvio::format_real(r.bound) + ",";
  if (r.n_window >= 0) out += std::to_string(r.n_window);
  out += "\r\n";
  return out;
}

}  // namespace mollicrit::proportion
