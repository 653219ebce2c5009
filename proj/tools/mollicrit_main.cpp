// Batch front end: subcommands map one-to-one onto the library pipelines and
// every artifact is a deterministic function of (config, flags).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mollicrit/constants.hpp"
#include "mollicrit/csvio.hpp"
#include "mollicrit/gfun.hpp"
#include "mollicrit/mollikit.hpp"
#include "mollicrit/parallel.hpp"
#include "mollicrit/proportion.hpp"
#include "mollicrit/shiftcalc.hpp"
#include "mollicrit/zetakernel.hpp"

namespace {

using cdouble = std::complex<double>;
using namespace mollicrit;

constexpr const char* kToolVersion = "mollicrit 1.0.0";

struct RunManifest {
  std::string command;
  std::string config_path;
  bool deterministic = true;  // no seeds anywhere; reruns are byte-identical
  std::string output_dir;
  std::string tool_version = kToolVersion;
  std::vector<std::string> outputs;
};

std::string manifest_json(const RunManifest& m) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"command\": " << csvio::csv_quote_json(m.command) << ",\n";
  os << "  \"config_path\": " << csvio::csv_quote_json(m.config_path) << ",\n";
  os << "  \"deterministic\": " << (m.deterministic ? "true" : "false")
     << ",\n";
  os << "  \"output_dir\": " << csvio::csv_quote_json(m.output_dir) << ",\n";
  os << "  \"tool_version\": " << csvio::csv_quote_json(m.tool_version)
     << ",\n";
  os << "  \"outputs\": [";
  for (size_t i = 0; i < m.outputs.size(); ++i) {
    if (i) os << ",";
    os << csvio::csv_quote_json(m.outputs[i]);
  }
  os << "]\n}\n";
  return os.str();
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void emit(RunManifest& m, const std::string& name, const std::string& body) {
  csvio::write_text_file(join_path(m.output_dir, name), body);
  m.outputs.push_back(name);
}

void finish(RunManifest& m) {
  csvio::write_text_file(join_path(m.output_dir, "manifest.json"),
                         manifest_json(m));
  for (const auto& f : m.outputs)
    std::cout << "wrote " << join_path(m.output_dir, f) << "\n";
}

// Config parse failures are usage errors (exit 2), not check failures.
csvio::ConfigMap load_config(const std::string& path) {
  if (path.empty()) return csvio::ConfigMap{};
  try {
    return csvio::parse_config_file(path);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

struct LemmaRow {
  std::string check;
  std::string status;  // PASS / FAIL / WARN
  double value = 0.0;
  double tolerance = 0.0;
  std::string note;
};

std::string lemma_rows_csv(const std::vector<LemmaRow>& rows) {
  std::string out = "check,status,value,tolerance,note\r\n";
  for (const auto& r : rows) {
    out += csvio::csv_field(r.check) + "," + r.status + "," +
           csvio::format_real(r.value) + "," + csvio::format_real(r.tolerance) +
           "," + csvio::csv_field(r.note) + "\r\n";
  }
  return out;
}

// xorshift-free fixed LCG; the sequence is part of the artifact contract.
struct Lcg {
  uint64_t x = 0x9e3779b97f4a7c15ull;
  double next01() {
    x = x * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(x >> 11) * 0x1.0p-53;
  }
};

int cmd_verify_lemmas(const std::string& config_path,
                      const std::string& out_dir) {
  const auto cfg = load_config(config_path);
  const double alpha = cfg.get_double("gfun.alpha", 0.1);
  const double T = cfg.get_double("gfun.T", 100.0);
  std::vector<LemmaRow> rows;
  bool warned = false;

  {  // two-sided shift identity on the exp probe
    const auto probe = shiftcalc::probe_exp();
    double worst = 0.0;
    for (int K : {1, 3, 5}) {
      auto p = shiftcalc::ShiftParams::make(0.1, std::exp(1.0), K);
      worst = std::max(worst, shiftcalc::shift_identity_residual(
                                  probe, cdouble(1.0, 2.0), p));
    }
    rows.push_back({"shift_identity_exp", worst <= tol().shift_residual
                                              ? "PASS" : "FAIL",
                    worst, tol().shift_residual,
                    "max over K=1,3,5 at s=1+2i, shift 0.1"});
  }
  {  // leading coefficient closed form and the series route
    double worst = 0.0;
    for (int i = 1; i <= 10; ++i) {
      const double ds = 0.03 * i;
      worst = std::max(worst,
                       std::abs(shiftcalc::g_coefficient(1, ds) - 0.5 * ds));
    }
    rows.push_back({"g_coefficient_linear", worst <= 1e-14 ? "PASS" : "FAIL",
                    worst, 1e-14, "g_1(ds) = ds/2 over 10 shifts"});
    double worst_rel = 0.0;
    for (int k = 1; k <= 63; k += 2) {
      const double a = shiftcalc::g_coefficient(k, 0.1);
      const double b = shiftcalc::g_coefficient_series(k, 0.1);
      worst_rel = std::max(worst_rel, std::abs(a - b) / std::abs(a));
    }
    rows.push_back({"g_coefficient_series",
                    worst_rel <= tol().g_coeff_series_rel ? "PASS" : "FAIL",
                    worst_rel, tol().g_coeff_series_rel,
                    "Bernoulli vs zeta route, odd k <= 63"});
  }
  {  // odd-sine series limit; outside |alpha(1/2-x)| < pi it diverges
    bool diverged_any = false;
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double x = i / 100.0;
      bool div = false;
      const double s = shiftcalc::tanh_series_sum(x, alpha, 41, &div);
      if (div) {
        diverged_any = true;
        continue;
      }
      worst = std::max(worst, std::abs(s + std::tanh(alpha / 2 * (0.5 - x))));
    }
    if (diverged_any) {
      rows.push_back({"tanh_series_limit", "WARN", alpha, constants::pi,
                      "series argument leaves the convergence disk; "
                      "limit not certified at this alpha"});
      warned = true;
    } else {
      rows.push_back({"tanh_series_limit",
                      worst <= tol().tanh_limit ? "PASS" : "FAIL", worst,
                      tol().tanh_limit, "41-term sum vs -tanh(alpha(1/2-x)/2)"});
    }
  }
  {  // the (S1) pointwise certificate
    Lcg rng;
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const double u = 0.5 + 8.0 * rng.next01();
      const double a = -3.0 + 6.0 * rng.next01();
      if (std::abs(a) < 1e-3) continue;
      worst = std::max(worst, gfun::s1_symmetry_defect(u, a));
    }
    rows.push_back({"s1_symmetry", worst <= tol().s1_defect ? "PASS" : "FAIL",
                    worst, tol().s1_defect, "500 deterministic (u,alpha) samples"});
  }
  {  // continuation vs completed direct sum on the overlap strip
    const auto p = gfun::GFunParams::make(alpha, std::max(T, 50.0));
    double worst = 0.0;
    for (const cdouble s : {cdouble(1.5, 8.0), cdouble(2.0, 10.0),
                            cdouble(2.5, 12.0)}) {
      const cdouble ga = gfun::g_analytic(s, p);
      const cdouble gd = gfun::g_direct_completed(s, p);
      worst = std::max(worst, std::abs(ga - gd) /
                                  std::max(std::abs(gd), 1e-300));
    }
    rows.push_back({"continuation_overlap",
                    worst <= tol().g_overlap_rel ? "PASS" : "FAIL", worst,
                    tol().g_overlap_rel, "three points with Re s in [1.5,2.5]"});
  }
  {  // sine coefficients two ways
    double worst = 0.0;
    const auto beta = gfun::fourier_tanh_coefficients_beta(1.0, 8);
    const auto quad = gfun::fourier_tanh_coefficients_quadrature(1.0, 8);
    for (int k = 0; k < 8; ++k)
      worst = std::max(worst, std::abs(beta[k] - quad[k]));
    rows.push_back({"bk_dual", worst <= tol().bk_dual ? "PASS" : "FAIL", worst,
                    tol().bk_dual, "incomplete-beta vs quadrature, k <= 8"});
  }

  RunManifest m;
  m.command = "verify-lemmas";
  m.config_path = config_path;
  m.output_dir = out_dir;
  emit(m, "lemma_report.csv", lemma_rows_csv(rows));
  finish(m);

  int failures = 0;
  for (const auto& r : rows) {
    std::cout << r.check << ": " << r.status << "\n";
    if (r.status == "FAIL") ++failures;
  }
  if (warned) std::cout << "completed with warnings\n";
  return failures ? 1 : 0;
}

std::string zero_locations_csv(const zetakernel::ZeroCountReport& rep) {
  std::string out = "index,t\r\n";
  for (size_t i = 0; i < rep.zero_locations.size(); ++i)
    out += std::to_string(i + 1) + "," +
           csvio::format_real(rep.zero_locations[i]) + "\r\n";
  return out;
}

int cmd_zeros(double t_max, const std::string& window_arg, double scan_step,
              const std::string& out_dir) {
  zetakernel::CriticalWindow w;
  if (!window_arg.empty()) {
    const auto ends = csvio::parse_double_list(window_arg);
    if (ends.size() != 2)
      throw std::invalid_argument("--window wants \"lo,hi\"");
    w.t_lo = ends[0];
    w.t_hi = ends[1];
  } else {
    w.t_lo = 1e-3;  // Z has no zeros this low; an open-at-zero window
    w.t_hi = t_max;
  }
  zetakernel::ZeroCountReport rep;
  if (w.t_hi <= w.t_lo) {
    rep.window = w;  // empty window: report zero sign changes
  } else {
    rep = zetakernel::count_zeros(w, scan_step);
  }

  RunManifest m;
  m.command = "zeros";
  m.config_path = "";
  m.output_dir = out_dir;
  emit(m, "zeros.csv", zetakernel::report_to_csv(rep));
  emit(m, "zero_locations.csv", zero_locations_csv(rep));
  emit(m, "zeros.json", zetakernel::report_to_json(rep));
  finish(m);

  std::cout << "sign changes: " << rep.n_sign_changes
            << "  s_residual: " << csvio::format_real(rep.s_residual) << "\n";
  for (const auto& msg : rep.warnings) std::cout << "warning: " << msg << "\n";
  return 0;
}

int cmd_proportion(const std::string& config_path, double t_override,
                   long long grid_override, bool identity, bool translated,
                   bool no_window_count, const std::string& out_dir) {
  const auto cfg_map = load_config(config_path);
  proportion::BoundRequest req;
  req.cfg = mollikit::config_from_map(cfg_map);
  if (t_override > 0.0) req.cfg.T = t_override;
  req.grid_n = grid_override > 0
                   ? grid_override
                   : cfg_map.get_int("proportion.grid", 0);
  req.identity = identity || cfg_map.get_int("proportion.identity", 0) != 0;
  req.translated_g =
      translated || cfg_map.get_int("proportion.translated_g", 0) != 0;
  req.count_window_zeros =
      !no_window_count &&
      cfg_map.get_int("proportion.count_window_zeros", 1) != 0;

  const auto run = proportion::bound_report(req);

  RunManifest m;
  m.command = "proportion";
  m.config_path = config_path;
  m.output_dir = out_dir;
  emit(m, "proportion.json", proportion::proportion_run_to_json(run));
  emit(m, "proportion.csv", proportion::proportion_run_to_csv(run));
  finish(m);

  std::cout << "I_R = " << csvio::format_real(run.I_R)
            << "  bound = " << csvio::format_real(run.bound) << "\n";
  std::cout << "wall time: " << run.wall_time_seconds << " s\n";
  for (const auto& msg : run.warnings) std::cout << "warning: " << msg << "\n";
  return 0;
}

int cmd_gfun_table(const std::string& config_path, const std::string& out_dir) {
  const auto cfg = load_config(config_path);
  const double alpha = cfg.get_double("gfun.alpha", 0.1);
  const double T = cfg.get_double("gfun.T", 100.0);
  const double N = cfg.get_double("gfun.N", -1.0);
  auto sigmas = cfg.get_list("gfun.sigma");
  if (sigmas.empty()) sigmas = {0.75, 1.0, 1.5, 2.0};
  auto ts = cfg.get_list("gfun.t");
  if (ts.empty()) ts = {5.0, 10.0};
  const auto p = gfun::GFunParams::make(alpha, T, N);

  std::string out =
      "s_re,s_im,g_re,g_im,approx_re,approx_im,deviation,scaled_constant\r\n";
  for (const double sig : sigmas)
    for (const double t : ts) {
      const cdouble s(sig, t);
      const auto ga = gfun::g_analytic(s, p);
      const auto ap = gfun::g_approx_ex(s, p);
      out += csvio::format_real(sig) + "," + csvio::format_real(t) + "," +
             csvio::format_real(ga.real()) + "," +
             csvio::format_real(ga.imag()) + "," +
             csvio::format_real(ap.value.real()) + "," +
             csvio::format_real(ap.value.imag()) + "," +
             csvio::format_real(ap.deviation) + "," +
             csvio::format_real(ap.scaled_constant) + "\r\n";
    }

  RunManifest m;
  m.command = "gfun-table";
  m.config_path = config_path;
  m.output_dir = out_dir;
  emit(m, "gfun_table.csv", out);
  finish(m);
  return 0;
}

int cmd_bk_table(const std::string& config_path, const std::string& out_dir) {
  const auto cfg = load_config(config_path);
  auto alphas = cfg.get_list("bk.alpha");
  if (alphas.empty()) alphas = {0.5, 1.0, 2.0};
  const int k_max = static_cast<int>(cfg.get_int("bk.k_max", 16));

  std::string out = "alpha,k,beta,quadrature,abs_delta,tanh_coefficient\r\n";
  for (const double a : alphas) {
    const auto beta = gfun::fourier_tanh_coefficients_beta(a, k_max);
    const auto quad = gfun::fourier_tanh_coefficients_quadrature(a, k_max);
    const auto full = gfun::fourier_tanh_coefficients(a, k_max);
    for (int k = 1; k <= k_max; ++k) {
      out += csvio::format_real(a) + "," + std::to_string(k) + "," +
             csvio::format_real(beta[k - 1]) + "," +
             csvio::format_real(quad[k - 1]) + "," +
             csvio::format_real(std::abs(beta[k - 1] - quad[k - 1])) + "," +
             csvio::format_real(full[k - 1]) + "\r\n";
    }
  }

  RunManifest m;
  m.command = "bk-table";
  m.config_path = config_path;
  m.output_dir = out_dir;
  emit(m, "bk_table.csv", out);
  finish(m);
  return 0;
}

int cmd_mollifier_export(const std::string& config_path,
                         const std::string& out_dir) {
  const auto cfg_map = load_config(config_path);
  const auto cfg = mollikit::config_from_map(cfg_map);
  cfg.validate();
  const long y_len = static_cast<long>(std::floor(cfg.y()));
  const auto tables = mollikit::ArithmeticTables::build(y_len);
  const auto dp = mollikit::mollifier_coefficients(cfg, tables);

  RunManifest m;
  m.command = "mollifier-export";
  m.config_path = config_path;
  m.output_dir = out_dir;
  mollikit::write_dirichlet_binary(dp, join_path(out_dir, "mollifier.bin"));
  m.outputs.push_back("mollifier.bin");
  emit(m, "mollifier.csv", mollikit::dirichlet_to_csv(dp));
  finish(m);

  std::cout << "coefficients: " << dp.length() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for mollified zeta statistics"};
  app.require_subcommand(1);

  int threads = 0;
  std::string out_dir = ".";
  app.add_option("--threads", threads, "worker count (default: logical cores)");
  app.add_option("--output-dir", out_dir, "artifact directory");

  std::string vl_config;
  auto* vl = app.add_subcommand("verify-lemmas",
                                "run the identity/continuation check suite");
  vl->add_option("--config", vl_config, "flat key=value config");

  double t_max = 100.0, scan_step = 0.05;
  std::string window_arg;
  auto* zc = app.add_subcommand("zeros", "count critical-line sign changes");
  zc->add_option("--t-max", t_max, "scan (0, t-max]");
  zc->add_option("--window", window_arg, "explicit window \"lo,hi\"");
  zc->add_option("--scan-step", scan_step, "coarse scan step");

  std::string pr_config;
  double pr_T = 0.0;
  long long pr_grid = 0;
  bool pr_identity = false, pr_translated = false, pr_no_window = false;
  auto* pr = app.add_subcommand("proportion", "window bound for one config");
  pr->add_option("--config", pr_config, "flat key=value config");
  pr->add_option("--T", pr_T, "window start override");
  pr->add_option("--grid", pr_grid, "quadrature intervals override");
  pr->add_flag("--identity", pr_identity, "unit mollifier sanity mode");
  pr->add_flag("--translated-g", pr_translated, "translated G builder");
  pr->add_flag("--no-window-count", pr_no_window, "skip the zero count");

  std::string gt_config;
  auto* gt = app.add_subcommand("gfun-table", "continuation values on a grid");
  gt->add_option("--config", gt_config, "flat key=value config");

  std::string bk_config;
  auto* bk = app.add_subcommand("bk-table", "sine coefficients two ways");
  bk->add_option("--config", bk_config, "flat key=value config");

  std::string me_config;
  auto* me = app.add_subcommand("mollifier-export", "coefficient dump");
  me->add_option("--config", me_config, "flat key=value config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // usage problems are exit 2; --help stays 0
  }

  if (threads > 0) par::set_thread_count(threads);

  try {
    std::filesystem::create_directories(out_dir);
    if (vl->parsed()) return cmd_verify_lemmas(vl_config, out_dir);
    if (zc->parsed()) return cmd_zeros(t_max, window_arg, scan_step, out_dir);
    if (pr->parsed())
      return cmd_proportion(pr_config, pr_T, pr_grid, pr_identity,
                            pr_translated, pr_no_window, out_dir);
    if (gt->parsed()) return cmd_gfun_table(gt_config, out_dir);
    if (bk->parsed()) return cmd_bk_table(bk_config, out_dir);
    if (me->parsed()) return cmd_mollifier_export(me_config, out_dir);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
