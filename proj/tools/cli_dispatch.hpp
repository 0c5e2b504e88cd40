// SPDX-License-Identifier: Apache-2.0
#pragma once

// Command line front end: simulate, moments, mc-study, corr-sums, solve, factor,
// identify and the two benchmark reproductions.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gencep/gencep.hpp"
#include "gencep/io.hpp"

namespace gencep::cli {

inline constexpr const char* version = "1.0.0";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class T>
std::vector<T> parse_list(const std::string& s, const char* what) {
  std::vector<T> out;
  std::stringstream in(s);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    cell = io::detail::trim(cell);
    if (cell.empty()) continue;
    std::istringstream cs(cell);
    T v;
    if (!(cs >> v) || !cs.eof()) throw UsageError(std::string("bad value '") + cell + "' in " + what);
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(std::string("empty list for ") + what);
  return out;
}

// key = value lines; '#' starts a comment.
inline std::vector<std::string> read_run_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read run file " + path);
  std::vector<std::string> flags;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = io::detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    const auto key = io::detail::trim(line.substr(0, eq));
    const auto value = io::detail::trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    flags.push_back("--" + key + "=" + value);
  }
  return flags;
}

// Insert run-file flags right after the subcommand words so command-line flags, parsed later, win.
inline std::vector<std::string> expand_run_file(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string run;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--run" && i + 1 < args.size()) {
      run = args[++i];
    } else if (args[i].rfind("--run=", 0) == 0) {
      run = args[i].substr(6);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (run.empty()) return rest;
  std::size_t words = 0;
  while (words < rest.size() && words < 2 && !rest[words].empty() && rest[words][0] != '-') ++words;
  if (words == 2 && rest[0] != "repro") words = 1;
  auto injected = read_run_file(run);
  std::vector<std::string> out(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(words));
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(words), rest.end());
  return out;
}

inline std::filesystem::path prepare_out(const std::string& dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw io::FormatError("cannot write " + p.string());
  return os;
}

inline StepRule parse_step(const std::string& s) {
  if (s == "armijo") return StepRule::armijo;
  if (s == "bb" || s == "barzilai-borwein") return StepRule::barzilai_borwein;
  throw UsageError("unknown step rule '" + s + "' (armijo | bb)");
}

inline Shape parse_shape(const std::string& s, const char* what) {
  auto v = parse_list<std::size_t>(s, what);
  return Shape(v.begin(), v.end());
}

}  // namespace detail

/// Numerical failure surfaced by a subcommand (exit status 2).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string out = ".";
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

/// Parses args (without the program name), runs the subcommand, returns the exit status.
inline int cli_dispatch(const std::vector<std::string>& raw_args, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
  CLI::App app{"Generalized cepstral estimation and cascade system identification", "gencep"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", version);
  app.add_option("--run", "key = value run file; its entries act as flags placed before the command-line flags");

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "output directory")->capture_default_str();
    sub->add_option("--seed", common.seed, "base random seed")->capture_default_str();
    sub->add_option("--threads", common.threads, "worker threads (0 = hardware)")->capture_default_str();
  };

  // simulate
  std::string sim_system = "benchmark-1d", sim_n = "10000", sim_b, sim_a, sim_format = "csv";
  int sim_nu = 0;
  double sim_var = 1.0;
  std::size_t sim_burn = 500;
  auto* simulate = app.add_subcommand("simulate", "draw a sample record");
  add_common(simulate);
  simulate->add_option("--system", sim_system, "white | white-circular | benchmark-1d | benchmark-2d | arma")
      ->capture_default_str();
  simulate->add_option("--N", sim_n, "sample shape, comma separated")->capture_default_str();
  simulate->add_option("--nu", sim_nu, "cascade order (0 = system default)")->capture_default_str();
  simulate->add_option("--b", sim_b, "numerator coefficients for --system arma");
  simulate->add_option("--a", sim_a, "denominator coefficients for --system arma");
  simulate->add_option("--variance", sim_var, "white noise variance")->capture_default_str();
  simulate->add_option("--burn-in", sim_burn, "discarded leading samples per axis")->capture_default_str();
  simulate->add_option("--format", sim_format, "csv | bin")->capture_default_str();

  // moments
  std::string mom_input;
  double mom_alpha = 0.0;
  int mom_nu = 0, mom_radius = 2;
  bool mom_corrected = true, mom_pg = false;
  auto* moments = app.add_subcommand("moments", "covariances and generalized cepstra of a record");
  add_common(moments);
  moments->add_option("--input", mom_input, "sample record (.csv or .bin)")->required();
  moments->add_option("--alpha", mom_alpha, "cepstral exponent in (0,1)");
  moments->add_option("--nu", mom_nu, "cascade order; sets alpha = 1 - 1/nu");
  moments->add_option("--lags", mom_radius, "lag box radius")->capture_default_str();
  moments->add_flag("--correction,!--no-correction", mom_corrected, "apply the 1/Gamma(alpha+1) correction")
      ->default_str("true");
  moments->add_flag("--periodogram", mom_pg, "also write periodogram.csv")->default_str("false");

  // mc-study
  std::string mc_process = "white", mc_sizes = "512,4096";
  double mc_alpha = 0.5;
  std::size_t mc_trials = 500;
  int mc_radius = 1;
  bool mc_corrected = true;
  auto* mc = app.add_subcommand("mc-study", "Monte Carlo mean/variance of the cepstral estimator");
  add_common(mc);
  mc->add_option("--process", mc_process, "white | white-real | arma (built-in ARMA shaping filter)")->capture_default_str();
  mc->add_option("--alpha", mc_alpha, "cepstral exponent")->capture_default_str();
  mc->add_option("--sizes", mc_sizes, "sample sizes, strictly increasing")->capture_default_str();
  mc->add_option("--trials", mc_trials, "trials per size")->capture_default_str();
  mc->add_option("--lags", mc_radius, "lag radius")->capture_default_str();
  mc->add_flag("--correction,!--no-correction", mc_corrected, "corrected estimator")->default_str("true");

  // corr_sums
  std::string corr_ns = "64,128,256,512";
  auto* corr_sums = app.add_subcommand("corr-sums", "correlation sums of filtered-noise spectral components");
  add_common(corr_sums);
  corr_sums->add_option("--Ns", corr_ns, "sample sizes")->capture_default_str();
  bool corr_stationary = false;
  corr_sums->add_flag("--stationary", corr_stationary, "noise from the infinite past instead of a filter at rest")
      ->default_str("false");

  // solver options shared by solve / identify / repro
  struct SolverFlags {
    double lambda = 1e-6;
    std::string grid;
    double tol = 1e-6;
    int max_iter = 200000;
    std::string step = "armijo";
  };
  SolverFlags sf;
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--lambda", sf.lambda, "regularization weight")->capture_default_str();
    sub->add_option("--grid", sf.grid, "solver grid shape (default: N in 1-d, 30,30 in 2-d)");
    sub->add_option("--tol", sf.tol, "gradient-norm tolerance")->capture_default_str();
    sub->add_option("--max-iter", sf.max_iter, "iteration cap")->capture_default_str();
    sub->add_option("--step", sf.step, "armijo | bb")->capture_default_str();
  };

  // solve
  std::string solve_moments;
  int solve_nu = 0;
  bool solve_real = false;
  auto* solve = app.add_subcommand("solve", "regularized dual solve on a moments file");
  add_common(solve);
  add_solver(solve);
  solve->add_option("--moments", solve_moments, "moments.csv")->required();
  solve->add_option("--nu", solve_nu, "cascade order")->required();
  solve->add_flag("--real", solve_real, "restrict to real coefficients")->default_str("false");

  // factor
  std::string factor_solution, factor_method = "bauer";
  bool factor_project = false;
  auto* factor = app.add_subcommand("factor", "spectral factors of a dual solution");
  add_common(factor);
  factor->add_option("--solution", factor_solution, "solution.json")->required();
  factor->add_option("--method", factor_method, "bauer | roots (1-d)")->capture_default_str();
  factor->add_flag("--project", factor_project, "2-d: use the rank-1 projection of non-separable input")
      ->default_str("false");

  // identify
  std::string id_input;
  int id_nu = 0, id_radius = -1;
  bool id_corrected = true;
  auto* identify = app.add_subcommand("identify", "full identification from a sample record");
  add_common(identify);
  add_solver(identify);
  identify->add_option("--input", id_input, "sample record")->required();
  identify->add_option("--nu", id_nu, "cascade order")->required();
  identify->add_option("--lags", id_radius, "lag box radius (default 2 in 1-d, 1 in 2-d)");
  identify->add_flag("--correction,!--no-correction", id_corrected, "corrected cepstra")->default_str("true");

  // repro
  struct ReproFlags {
    std::string n;
    std::size_t burn;
    bool corrected = true;
  };
  ReproFlags r1{"10000", 500}, r2{"100", 100};
  auto* repro = app.add_subcommand("repro", "benchmark reproductions");
  repro->require_subcommand(1);
  auto add_repro = [&](CLI::App* sub, ReproFlags& rf) {
    add_common(sub);
    add_solver(sub);
    sub->add_option("--N", rf.n, "sample size (per axis)")->capture_default_str();
    sub->add_option("--burn-in", rf.burn, "discarded leading samples (per axis)")->capture_default_str();
    sub->add_flag("--correction,!--no-correction", rf.corrected, "corrected cepstra")->default_str("true");
  };
  auto* one_d = repro->add_subcommand("one-d", "1-d cascade, nu = 3, lags -2..2, grid K = N");
  auto* two_d = repro->add_subcommand("two-d", "2-d separable cascade, nu = 2, lag box radius 1, grid 30 x 30");
  add_repro(one_d, r1);
  add_repro(two_d, r2);

  std::vector<std::string> args;
  try {
    args = detail::expand_run_file(raw_args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << version << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  // key=value lines of the subcommand's effective option values (run file, flags and defaults merged).
  auto echo = [&](CLI::App* sub) {
    std::ostringstream cfg;
    for (const CLI::Option* opt : sub->get_options()) {
      if (opt->get_lnames().empty() || opt->get_lnames()[0] == "help") continue;
      std::string value;
      if (opt->count() == 0) {
        value = opt->get_default_str();
      } else if (opt->get_type_size() == 0) {
        value = opt->as<bool>() ? "true" : "false";
      } else {
        value = opt->results().back();
      }
      cfg << opt->get_lnames()[0] << " = " << value << '\n';
    }
    out << "# effective configuration (" << sub->get_name() << ")\n" << cfg.str();
    return cfg.str();
  };

  auto solver_config = [&](const Shape& grid) {
    DualConfig dc;
    dc.lambda = sf.lambda;
    dc.grid = grid;
    dc.tol = sf.tol;
    dc.max_iter = sf.max_iter;
    dc.step_rule = detail::parse_step(sf.step);
    return dc;
  };

  try {
    if (simulate->parsed()) {
      echo(simulate);
      const Shape shape = detail::parse_shape(sim_n, "--N");
      const auto dir = detail::prepare_out(common.out);
      SampleRecord rec;
      if (sim_system == "white" || sim_system == "white-circular") {
        rec = gen_white_noise(shape, sim_var, common.seed,
                              sim_system == "white" ? NoiseKind::real : NoiseKind::circular);
      } else if (sim_system == "benchmark-1d") {
        auto m = benchmark_system_1d();
        if (sim_nu) m.nu = sim_nu;
        if (shape.size() != 1) throw UsageError("benchmark-1d needs a 1-d --N");
        rec = simulate_cascade_1d(m, shape[0], common.seed, sim_burn);
      } else if (sim_system == "benchmark-2d") {
        if (shape.size() != 2) throw UsageError("benchmark-2d needs --N n1,n2");
        rec = simulate_cascade_2d(benchmark_filter_2d(), sim_nu ? sim_nu : 2, shape, common.seed, sim_burn);
      } else if (sim_system == "arma") {
        if (sim_b.empty() || sim_a.empty()) throw UsageError("--system arma needs --b and --a");
        if (shape.size() != 1) throw UsageError("arma needs a 1-d --N");
        auto m = CascadeModel::one_d(sim_nu ? sim_nu : 1, detail::parse_list<double>(sim_b, "--b"),
                                     detail::parse_list<double>(sim_a, "--a"));
        rec = simulate_cascade_1d(m, shape[0], common.seed, sim_burn);
      } else {
        throw UsageError("unknown system '" + sim_system + "'");
      }
      const auto path = dir / (sim_format == "bin" ? "record.bin" : "record.csv");
      if (sim_format != "csv" && sim_format != "bin") throw UsageError("--format must be csv or bin");
      io::save_record(path.string(), rec);
      out << "wrote " << path.string() << '\n';
      return 0;
    }

    if (moments->parsed()) {
      echo(moments);
      double alpha = mom_alpha;
      if (mom_nu) alpha = Alpha::from_nu(mom_nu).value();
      if (alpha == 0.0) throw UsageError("give --alpha or --nu");
      const auto rec = io::load_record(mom_input);
      const auto lags = LagSet::box(rec.dim(), mom_radius);
      const auto pg = periodogram(rec);
      auto c = biased_covariances(rec, lags);
      auto m = estimate_gen_cepstral(pg, Alpha(alpha), lags, mom_corrected);
      if (rec.is_real) {
        c.make_real();
        m.make_real();
      }
      const auto dir = detail::prepare_out(common.out);
      auto os = detail::open_out(dir / "moments.csv");
      io::write_moments_csv(os, c, m);
      if (mom_pg) {
        auto ps = detail::open_out(dir / "periodogram.csv");
        io::write_periodogram_csv(ps, pg);
      }
      out << "wrote " << (dir / "moments.csv").string() << '\n';
      return 0;
    }

    if (mc->parsed()) {
      echo(mc);
      MCConfig cfg;
      if (mc_process == "white") cfg.process = ProcessSpec::white(1.0, NoiseKind::circular);
      else if (mc_process == "white-real") cfg.process = ProcessSpec::white(1.0, NoiseKind::real);
      else if (mc_process == "arma")
        cfg.process = ProcessSpec::arma(RationalFilter::real({1.0, -1.0, 0.8}, {1.0, -1.6, 0.81}));
      else throw UsageError("unknown process '" + mc_process + "'");
      cfg.alpha = Alpha(mc_alpha);
      cfg.sizes = detail::parse_list<std::size_t>(mc_sizes, "--sizes");
      cfg.trials = mc_trials;
      cfg.seed = common.seed;
      cfg.corrected = mc_corrected;
      cfg.threads = common.threads;
      const auto rep = mc_estimator_study(cfg, LagSet::box(1, mc_radius));
      const auto dir = detail::prepare_out(common.out);
      auto os = detail::open_out(dir / "report.csv");
      io::write_report_csv(os, rep);
      out << "wrote " << (dir / "report.csv").string() << '\n';
      return 0;
    }

    if (corr_sums->parsed()) {
      echo(corr_sums);
      const auto filter = RationalFilter::real({1.0, -1.0, 0.8}, {1.0, -1.6, 0.81});
      const auto sizes = detail::parse_list<std::size_t>(corr_ns, "--Ns");
      const auto dir = detail::prepare_out(common.out);
      auto os = detail::open_out(dir / "correlation_sums.csv");
      const auto init = corr_stationary ? Initialization::stationary : Initialization::at_rest;
      io::write_correlation_sums_csv(os, correlation_sum_table(filter, sizes, init));
      const auto rep = mild_correlation_report(filter, sizes, init);
      auto as = detail::open_out(dir / "mild_correlation.csv");
      as << std::setprecision(17) << "N,gamma,max_sum,ratio\n";
      for (const auto& r : rep.rows) as << r.n << ',' << r.gamma << ',' << r.max_sum << ',' << r.ratio << '\n';
      out << "consistent-with-assumption: " << (rep.consistent ? "yes" : "no") << '\n';
      out << "wrote " << (dir / "correlation_sums.csv").string() << '\n';
      return 0;
    }

    if (solve->parsed()) {
      echo(solve);
      std::ifstream is(solve_moments);
      if (!is) throw UsageError("cannot read " + solve_moments);
      auto mf = io::read_moments_csv(is);
      MomentData data{mf.cov, mf.cep, solve_nu};
      for (const auto& w : data.validate()) err << "warning: " << w << '\n';
      Shape grid = sf.grid.empty() ? Shape(data.dim(), data.dim() == 1 ? 1024 : 30)
                                   : detail::parse_shape(sf.grid, "--grid");
      auto dc = solver_config(grid);
      dc.real_coefficients = solve_real;
      const auto sol = solve_dual(data, dc);
      const auto dir = detail::prepare_out(common.out);
      io::write_json((dir / "solution.json").string(), io::solution_json(sol));
      auto ts = detail::open_out(dir / "trace.csv");
      io::write_trace_csv(ts, sol.trace);
      out << "status: " << sol.status << " after " << sol.iterations << " iterations, gradient norm "
          << sol.grad_norm << '\n';
      if (!sol.converged) throw NumericalFailure("dual solver did not converge: " + sol.status);
      return 0;
    }

    if (factor->parsed()) {
      echo(factor);
      const auto sol = io::solution_from_json(io::read_json(factor_solution));
      io::json j;
      if (sol.p.dim() == 1) {
        auto f = [&](const TrigPoly& p) {
          if (factor_method == "bauer") return bauer_factorize_1d(p);
          if (factor_method == "roots") return min_phase_roots_1d(p);
          throw UsageError("unknown method '" + factor_method + "'");
        };
        j["numerator"] = io::factor_json(f(sol.p));
        j["denominator"] = io::factor_json(f(sol.q));
      } else {
        j["numerator"] = io::factor_json(factorize_2d_separable(sol.p, factor_project));
        j["denominator"] = io::factor_json(factorize_2d_separable(sol.q, factor_project));
        const auto diag = factorability_check_2d(sol.p);
        j["separability_ratio_numerator"] = diag.singular_value_ratio;
        j["separability_ratio_denominator"] = factorability_check_2d(sol.q).singular_value_ratio;
      }
      const auto dir = detail::prepare_out(common.out);
      io::write_json((dir / "factor.json").string(), j);
      out << "wrote " << (dir / "factor.json").string() << '\n';
      return 0;
    }

    if (identify->parsed()) {
      echo(identify);
      const auto rec = io::load_record(id_input);
      IdentificationConfig cfg;
      const int radius = id_radius >= 0 ? id_radius : (rec.dim() == 1 ? 2 : 1);
      cfg.lags = LagSet::box(rec.dim(), radius);
      cfg.lambda = sf.lambda;
      if (!sf.grid.empty()) cfg.grid = detail::parse_shape(sf.grid, "--grid");
      cfg.tol = sf.tol;
      cfg.max_iter = sf.max_iter;
      cfg.step_rule = detail::parse_step(sf.step);
      cfg.corrected = id_corrected;
      cfg.seed = common.seed;
      const auto res = identify_cascade(rec, id_nu, cfg);
      const auto dir = detail::prepare_out(common.out);
      auto ms = detail::open_out(dir / "moments.csv");
      io::write_moments_csv(ms, res.report.covariances, res.report.cepstra);
      if (res.report.solution) {
        auto ts = detail::open_out(dir / "trace.csv");
        io::write_trace_csv(ts, res.report.solution->trace);
        io::write_json((dir / "solution.json").string(), io::solution_json(*res.report.solution));
      }
      for (const auto& w : res.report.warnings) err << "warning: " << w << '\n';
      if (!res.report.ok()) {
        for (const auto& e : res.report.errors) err << "error: " << e << '\n';
        throw NumericalFailure("identification incomplete");
      }
      io::write_json((dir / "model.json").string(), io::model_json(res.model));
      out << "wrote " << (dir / "model.json").string() << '\n';
      return 0;
    }

    if (one_d->parsed() || two_d->parsed()) {
      const bool is2 = two_d->parsed();
      const ReproFlags& rf = is2 ? r2 : r1;
      const std::string cfg_text = echo(is2 ? two_d : one_d);
      const auto t0 = std::chrono::steady_clock::now();
      const CascadeModel truth = is2 ? benchmark_system_2d() : benchmark_system_1d();
      const std::size_t n = detail::parse_list<std::size_t>(rf.n, "--N").at(0);
      const Shape shape = is2 ? Shape{n, n} : Shape{n};
      const auto rec = is2 ? simulate_cascade_2d(benchmark_filter_2d(), truth.nu, shape, common.seed, rf.burn)
                           : simulate_cascade_1d(truth, n, common.seed, rf.burn);
      IdentificationConfig cfg;
      cfg.lags = LagSet::box(is2 ? 2 : 1, is2 ? 1 : 2);
      cfg.lambda = sf.lambda;
      if (!sf.grid.empty()) cfg.grid = detail::parse_shape(sf.grid, "--grid");
      cfg.tol = sf.tol;
      cfg.max_iter = sf.max_iter;
      cfg.step_rule = detail::parse_step(sf.step);
      cfg.corrected = rf.corrected;
      cfg.seed = common.seed;
      const auto res = identify_cascade(rec, truth.nu, cfg);

      const auto dir = detail::prepare_out(common.out);
      {
        auto ms = detail::open_out(dir / "moments.csv");
        io::write_moments_csv(ms, res.report.covariances, res.report.cepstra);
      }
      if (res.report.solution) {
        auto ts = detail::open_out(dir / "trace.csv");
        io::write_trace_csv(ts, res.report.solution->trace);
      }
      const SpectrumFn phi = [&](const std::vector<double>& th) { return truth.spectrum(th); };
      const Alpha alpha = Alpha::from_nu(truth.nu);
      const auto c_true = true_covariances(phi, cfg.lags);
      const auto m_true = true_gen_cepstral(phi, alpha, cfg.lags);
      const auto m_other = estimate_gen_cepstral(periodogram(rec), alpha, cfg.lags, !rf.corrected);
      auto m_other_r = m_other;
      m_other_r.make_real();
      auto es = detail::open_out(dir / "errors.csv");
      es << std::setprecision(17) << "metric,value\n";
      es << "moment_error," << moment_error(res.report.covariances, res.report.cepstra, c_true, m_true) << '\n';
      es << (rf.corrected ? "moment_error_uncorrected," : "moment_error_corrected,")
         << moment_error(res.report.covariances, m_other_r, c_true, m_true) << '\n';
      bool ok = res.report.ok();
      if (ok) {
        const FrequencyGrid grid(is2 ? Shape{n, n} : Shape{n});
        const auto est = optimal_spectrum(*res.report.solution, grid);
        const auto se = spectrum_error(est, phi, grid);
        es << "parameter_error," << parameter_error(res.model, truth) << '\n';
        es << "spectrum_max_abs," << se.max_abs << '\n';
        es << "spectrum_relative," << se.relative << '\n';
        io::write_json((dir / "model.json").string(), io::model_json(res.model));
      }
      if (res.report.solution) {
        es << "solver_iterations," << res.report.solution->iterations << '\n';
        es << "solver_grad_norm," << res.report.solution->grad_norm << '\n';
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      io::json manifest{{"command", is2 ? "repro two-d" : "repro one-d"},
                        {"version", version},
                        {"config", cfg_text},
                        {"seed", common.seed},
                        {"sample_shape", shape},
                        {"nu", truth.nu},
                        {"ok", ok},
                        {"errors", res.report.errors},
                        {"warnings", res.report.warnings},
                        {"timing", {{"wall_seconds", secs}, {"finished_unix", static_cast<long long>(std::time(nullptr))}}}};
      io::write_json((dir / "manifest.json").string(), manifest);
      out << "wrote " << dir.string() << "/{moments.csv,trace.csv,model.json,errors.csv,manifest.json}\n";
      if (!ok) {
        for (const auto& e : res.report.errors) err << "error: " << e << '\n';
        throw NumericalFailure("identification incomplete");
      }
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << app.help();
  return 1;
}

}  // namespace gencep::cli
