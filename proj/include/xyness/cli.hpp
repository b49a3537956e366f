#pragma once

// Command-line surface: correlations, spectrum, bound, sweep, selftest.
//
// Exit codes: 0 success, 1 selftest failure, 2 usage error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <locale>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xyness/bounds.hpp"
#include "xyness/errors.hpp"
#include "xyness/format.hpp"
#include "xyness/pipeline.hpp"
#include "xyness/selftest.hpp"
#include "xyness/spectral.hpp"
#include "xyness/toeplitz.hpp"

namespace xyness::cli {

enum ExitCode : int { kOk = 0, kSelftestFailed = 1, kUsage = 2, kNumerical = 3 };

enum class Format { Csv, Jsonl };

struct RunConfig {
  std::string subcommand;
  // sweep accepts comma-separated lists in these four; the others take one value
  std::string gamma = "0.5", lambda = "0.3", beta_l = "1", beta_r = "3";
  int n_max = 128;
  std::string n_list;  // comma-separated, overrides the default list
  double tol = kDefaultTol;
  double eps = kDefaultEps;
  std::string out_path;  // empty: stdout
  Format format = Format::Csv;
  bool dump_matrices = false;
  std::string inject;  // selftest fault injection
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::vector<double> parse_reals(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError(std::string("cannot parse --") + what + " value '" + item + "'");
    }
    if (used != item.size()) throw UsageError(std::string("cannot parse --") + what + " value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(std::string("--") + what + " needs a value");
  return out;
}

inline double parse_real(const std::string& s, const char* what) {
  auto v = parse_reals(s, what);
  if (v.size() != 1) throw UsageError(std::string("--") + what + " takes a single value here");
  return v.front();
}

inline ModelParams params_from(double g, double l, double bl, double br) {
  try {
    return ModelParams::make(g, l, bl, br);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

inline ModelParams single_params(const RunConfig& c) {
  return params_from(parse_real(c.gamma, "gamma"), parse_real(c.lambda, "lambda"), parse_real(c.beta_l, "beta-l"),
                     parse_real(c.beta_r, "beta-r"));
}

inline std::vector<int> resolve_n_list(const RunConfig& c, std::vector<int> fallback) {
  if (c.n_list.empty()) return fallback;
  std::vector<int> out;
  for (double v : parse_reals(c.n_list, "n-list")) {
    if (v != std::floor(v) || v < 1) throw UsageError("--n-list entries must be positive integers");
    out.push_back(static_cast<int>(v));
  }
  try {
    check_n_list(out);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return out;
}

inline void validate_common(const RunConfig& c) {
  if (c.n_max < 1) throw UsageError("--n-max must be >= 1");
  if (!(c.tol > 0)) throw UsageError("--tol must be positive");
  if (!(c.eps > 0 && c.eps < 1)) throw UsageError("--eps must lie in (0, 1)");
}

// Output sink: file when --out is given, else the supplied stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("cannot open output file " + path);
    }
    os_ = file_ ? file_.get() : &fallback;
    os_->imbue(std::locale::classic());
  }
  std::ostream& os() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

inline void params_header(std::ostream& os, const CorrelationSeries& s) {
  const auto& p = s.params;
  os << "# gamma=" << fmt_real(p.gamma()) << '\n'
     << "# lambda=" << fmt_real(p.lambda()) << '\n'
     << "# beta_l=" << fmt_real(p.beta_l()) << '\n'
     << "# beta_r=" << fmt_real(p.beta_r()) << '\n'
     << "# swapped=" << fmt_bool(p.swapped()) << '\n'
     << "# critical=" << fmt_bool(p.critical()) << '\n'
     << "# equilibrium=" << fmt_bool(p.equilibrium()) << '\n';
}

inline void series_summary(std::ostream& os, const CorrelationSeries& s) {
  os << "# quadrature_err_estimate=" << fmt_real(s.metadata.err_estimate) << '\n'
     << "# theorem_rate=" << fmt_real(s.bound.theorem_rate) << '\n'
     << "# weak_rate=" << fmt_real(s.bound.weak_rate) << '\n'
     << "# mu_sup=" << fmt_real(s.bound.mu_sup) << '\n';
  if (s.fit)
    os << "# fit n_lo=" << s.fit->n_lo << " n_hi=" << s.fit->n_hi << " points=" << s.fit->points
       << " slope=" << fmt_real(s.fit->slope) << " intercept=" << fmt_real(s.fit->intercept)
       << " residual_rms=" << fmt_real(s.fit->residual_rms) << '\n';
  std::string limited;
  for (const auto& r : s.rows)
    if (r.resolution_limited) limited += (limited.empty() ? "" : ",") + std::to_string(r.n);
  if (!limited.empty()) os << "# resolution_limited_n=" << limited << '\n';
  os << "# weak_bound_holds=" << fmt_bool(validate_weak_bound(s)) << '\n';
}

inline const char* kSeriesColumns =
    "n,log_abs_C,log_abs_det,pf_det_residual,smin,smax,weak_bound_log,theorem_rate_times_n";

inline std::string series_csv_row(const CorrelationSeries& s, const SeriesRow& r) {
  return std::to_string(r.n) + "," + fmt_real(r.log_abs_C) + "," + fmt_real(r.log_abs_det) + "," +
         fmt_real(r.pf_det_residual) + "," + fmt_real(r.smin) + "," + fmt_real(r.smax) + "," +
         fmt_real(weak_bound_log(r.n, s.params)) + "," + fmt_real(s.bound.theorem_rate * r.n);
}

inline nlohmann::ordered_json series_meta_json(const CorrelationSeries& s) {
  const auto& p = s.params;
  nlohmann::ordered_json j;
  j["type"] = "meta";
  j["version"] = kVersion;
  j["gamma"] = p.gamma();
  j["lambda"] = p.lambda();
  j["beta_l"] = p.beta_l();
  j["beta_r"] = p.beta_r();
  j["swapped"] = p.swapped();
  j["critical"] = p.critical();
  j["equilibrium"] = p.equilibrium();
  j["tol"] = s.metadata.tol;
  j["quadrature_err_estimate"] = s.metadata.err_estimate;
  j["theorem_rate"] = s.bound.theorem_rate;
  j["weak_rate"] = s.bound.weak_rate;
  j["mu_sup"] = s.bound.mu_sup;
  if (s.fit) j["fit"] = {{"n_lo", s.fit->n_lo}, {"n_hi", s.fit->n_hi}, {"slope", s.fit->slope},
                         {"intercept", s.fit->intercept}, {"residual_rms", s.fit->residual_rms}};
  if (!s.metadata.error.empty()) j["error"] = s.metadata.error;
  return j;
}

inline nlohmann::ordered_json series_row_json(const CorrelationSeries& s, const SeriesRow& r) {
  nlohmann::ordered_json j;
  j["type"] = "row";
  j["n"] = r.n;
  j["log_abs_C"] = r.log_abs_C;
  j["log_abs_det"] = r.log_abs_det;
  j["pf_det_residual"] = r.pf_det_residual;
  j["smin"] = r.smin;
  j["smax"] = r.smax;
  j["weak_bound_log"] = weak_bound_log(r.n, s.params);
  j["theorem_rate_times_n"] = s.bound.theorem_rate * r.n;
  j["resolution_limited"] = r.resolution_limited;
  return j;
}

inline int cmd_correlations(const RunConfig& c, std::ostream& out) {
  validate_common(c);
  const ModelParams p = single_params(c);
  const auto n_list = resolve_n_list(c, default_n_list(c.n_max));
  SeriesOptions opt;
  if (c.dump_matrices) opt.dump_prefix = c.out_path.empty() ? std::string("omega") : c.out_path;
  const CorrelationSeries s = compute_series(p, n_list, c.tol, opt);
  Sink sink(c.out_path, out);
  auto& os = sink.os();
  if (c.format == Format::Jsonl) {
    os << series_meta_json(s).dump() << '\n';
    for (const auto& r : s.rows) os << series_row_json(s, r).dump() << '\n';
    return kOk;
  }
  os << "# xyness correlations\n# version=" << kVersion << "\n# eigen=" << eigen_version() << '\n';
  params_header(os, s);
  os << "# tol=" << fmt_real(c.tol) << '\n';
  series_summary(os, s);
  os << kSeriesColumns << '\n';
  for (const auto& r : s.rows) os << series_csv_row(s, r) << '\n';
  return kOk;
}

inline int cmd_spectrum(const RunConfig& c, std::ostream& out) {
  validate_common(c);
  const ModelParams p = single_params(c);
  std::vector<int> fallback;
  for (int n = 8; n <= c.n_max; n *= 2) fallback.push_back(n);
  if (fallback.empty() || fallback.back() != c.n_max) fallback.push_back(c.n_max);
  const auto n_list = resolve_n_list(c, fallback);
  const BlockSequence seq = build_block_sequence(n_list.back(), p, c.tol);
  const double norm = symbol_norm(p);
  const RealFn g_log = chi_log(c.eps, norm);
  const RealFn g_sq = squared_plateau();
  const double lim_log = avram_parter_limit(g_log, p);
  const double lim_sq = avram_parter_limit(g_sq, p);

  Sink sink(c.out_path, out);
  auto& os = sink.os();
  if (c.format == Format::Csv) {
    os << "# xyness spectrum\n# version=" << kVersion << "\n# gamma=" << fmt_real(p.gamma())
       << "\n# lambda=" << fmt_real(p.lambda()) << "\n# beta_l=" << fmt_real(p.beta_l())
       << "\n# beta_r=" << fmt_real(p.beta_r()) << "\n# swapped=" << fmt_bool(p.swapped())
       << "\n# critical=" << fmt_bool(p.critical()) << "\n# eps=" << fmt_real(c.eps)
       << "\n# symbol_norm=" << fmt_real(norm) << "\n# tol=" << fmt_real(c.tol) << '\n'
       << "n,smin,smax,count_small,empirical_chi_log,limit_chi_log,gap_chi_log,empirical_sq,limit_sq,gap_sq\n";
  }
  for (int n : n_list) {
    const auto sv = singular_values(assemble(n, seq).entries);
    const double e_log = empirical_mean(sv, g_log), e_sq = empirical_mean(sv, g_sq);
    const int small = count_small(sv, c.eps);
    if (c.format == Format::Jsonl) {
      nlohmann::ordered_json j{{"n", n},
                               {"smin", sv.front()},
                               {"smax", sv.back()},
                               {"count_small", small},
                               {"empirical_chi_log", e_log},
                               {"limit_chi_log", lim_log},
                               {"gap_chi_log", std::abs(e_log - lim_log)},
                               {"empirical_sq", e_sq},
                               {"limit_sq", lim_sq},
                               {"gap_sq", std::abs(e_sq - lim_sq)}};
      os << j.dump() << '\n';
    } else {
      os << n << ',' << fmt_real(sv.front()) << ',' << fmt_real(sv.back()) << ',' << small << ','
         << fmt_real(e_log) << ',' << fmt_real(lim_log) << ',' << fmt_real(std::abs(e_log - lim_log)) << ','
         << fmt_real(e_sq) << ',' << fmt_real(lim_sq) << ',' << fmt_real(std::abs(e_sq - lim_sq)) << '\n';
    }
  }
  return kOk;
}

inline int cmd_bound(const RunConfig& c, std::ostream& out) {
  validate_common(c);
  const ModelParams p = single_params(c);
  const BoundReport b = bound_report(p);
  Sink sink(c.out_path, out);
  auto& os = sink.os();
  if (c.format == Format::Jsonl) {
    nlohmann::ordered_json j{{"theorem_rate", b.theorem_rate}, {"theorem_err", b.theorem_err},
                             {"mu_sup", b.mu_sup},             {"weak_rate", b.weak_rate},
                             {"critical", b.critical},         {"equilibrium", b.equilibrium},
                             {"swapped", p.swapped()}};
    os << j.dump() << '\n';
    return kOk;
  }
  os << "theorem_rate=" << fmt_real(b.theorem_rate) << '\n'
     << "theorem_err=" << fmt_real(b.theorem_err) << '\n'
     << "mu_sup=" << fmt_real(b.mu_sup) << '\n'
     << "weak_rate=" << fmt_real(b.weak_rate) << '\n'
     << "critical=" << fmt_bool(b.critical) << '\n'
     << "equilibrium=" << fmt_bool(b.equilibrium) << '\n'
     << "swapped=" << fmt_bool(p.swapped()) << '\n';
  return kOk;
}

inline int cmd_sweep(const RunConfig& c, std::ostream& out) {
  validate_common(c);
  const auto gs = parse_reals(c.gamma, "gamma"), ls = parse_reals(c.lambda, "lambda");
  const auto bls = parse_reals(c.beta_l, "beta-l"), brs = parse_reals(c.beta_r, "beta-r");
  std::vector<ModelParams> grid;
  for (double g : gs)
    for (double l : ls)
      for (double bl : bls)
        for (double br : brs) grid.push_back(params_from(g, l, bl, br));
  const auto n_list = resolve_n_list(c, default_n_list(c.n_max));
  const auto results = sweep(grid, n_list, c.tol);

  Sink sink(c.out_path, out);
  auto& os = sink.os();
  bool any_failed = false;
  if (c.format == Format::Jsonl) {
    for (std::size_t i = 0; i < results.size(); ++i) {
      auto meta = series_meta_json(results[i]);
      meta["point"] = i;
      os << meta.dump() << '\n';
      any_failed = any_failed || !results[i].metadata.error.empty();
      for (const auto& r : results[i].rows) {
        auto j = series_row_json(results[i], r);
        j["point"] = i;
        os << j.dump() << '\n';
      }
    }
    return any_failed ? kNumerical : kOk;
  }
  os << "# xyness sweep\n# version=" << kVersion << "\n# points=" << results.size() << "\n# tol=" << fmt_real(c.tol)
     << '\n';
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& s = results[i];
    os << "# point=" << i << " " << s.params.describe() << " swapped=" << fmt_bool(s.params.swapped())
       << " critical=" << fmt_bool(s.params.critical());
    if (!s.metadata.error.empty()) {
      os << " error=\"" << s.metadata.error << "\"";
      any_failed = true;
    } else {
      os << " theorem_rate=" << fmt_real(s.bound.theorem_rate);
      if (s.fit) os << " fit_slope=" << fmt_real(s.fit->slope);
    }
    os << '\n';
  }
  os << "point,gamma,lambda,beta_l,beta_r," << kSeriesColumns << '\n';
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& s = results[i];
    for (const auto& r : s.rows)
      os << i << ',' << fmt_real(s.params.gamma()) << ',' << fmt_real(s.params.lambda()) << ','
         << fmt_real(s.params.beta_l()) << ',' << fmt_real(s.params.beta_r()) << ',' << series_csv_row(s, r)
         << '\n';
  }
  return any_failed ? kNumerical : kOk;
}

inline int cmd_selftest(const RunConfig& c, std::ostream& out) {
  Fault fault = Fault::None;
  if (c.inject == "assembly-sign") fault = Fault::AssemblySign;
  else if (c.inject == "phi-identity") fault = Fault::PhiIdentity;
  else if (!c.inject.empty()) throw UsageError("unknown --inject value '" + c.inject + "'");
  return run_selftest(out, fault) == 0 ? kOk : kSelftestFailed;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Transversal spin-spin correlations of the XY chain NESS via block Toeplitz Pfaffians"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format = "csv";

  auto add_model = [&](CLI::App* sub, bool lists) {
    const char* suffix = lists ? " (comma-separated list)" : "";
    sub->add_option("--gamma", cfg.gamma, std::string("anisotropy in (-1, 1)") + suffix)->capture_default_str();
    sub->add_option("--lambda", cfg.lambda, std::string("magnetic field") + suffix)->capture_default_str();
    sub->add_option("--beta-l", cfg.beta_l, std::string("left inverse temperature > 0") + suffix)
        ->capture_default_str();
    sub->add_option("--beta-r", cfg.beta_r, std::string("right inverse temperature > 0") + suffix)
        ->capture_default_str();
    sub->add_option("--tol", cfg.tol, "quadrature tolerance per coefficient")->capture_default_str();
    sub->add_option("--out", cfg.out_path, "output file (default stdout)");
    sub->add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}))->capture_default_str();
  };
  auto* corr = app.add_subcommand("correlations", "log|C(n)| series with bounds and decay fit");
  add_model(corr, false);
  corr->add_option("--n-max", cfg.n_max, "largest n")->capture_default_str();
  corr->add_option("--n-list", cfg.n_list, "explicit ascending list of n (comma-separated)");
  corr->add_flag("--dump-matrices", cfg.dump_matrices, "write Omega(n) as little-endian complex128 row-major");

  auto* spectrum = app.add_subcommand("spectrum", "singular-value diagnostics and Avram-Parter gaps");
  add_model(spectrum, false);
  spectrum->add_option("--n-max", cfg.n_max, "largest n")->capture_default_str();
  spectrum->add_option("--n-list", cfg.n_list, "explicit ascending list of n (comma-separated)");
  spectrum->add_option("--eps", cfg.eps, "threshold for small singular values")->capture_default_str();

  auto* bound = app.add_subcommand("bound", "decay-rate bounds");
  add_model(bound, false);

  auto* sw = app.add_subcommand("sweep", "correlation series over a parameter grid");
  add_model(sw, true);
  sw->add_option("--n-max", cfg.n_max, "largest n")->capture_default_str();
  sw->add_option("--n-list", cfg.n_list, "explicit ascending list of n (comma-separated)");

  auto* self = app.add_subcommand("selftest", "run the invariant suite");
  self->add_option("--inject", cfg.inject, "fault injection: assembly-sign | phi-identity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  cfg.format = format == "jsonl" ? Format::Jsonl : Format::Csv;

  try {
    if (*corr) return cmd_correlations(cfg, out);
    if (*spectrum) return cmd_spectrum(cfg, out);
    if (*bound) return cmd_bound(cfg, out);
    if (*sw) return cmd_sweep(cfg, out);
    if (*self) return cmd_selftest(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure in " << e.stage() << ": " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace xyness::cli
