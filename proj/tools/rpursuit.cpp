// Command-line front end: bench, run, verify, sweep-mu, scan-dims.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rpursuit/harness.hpp"
#include "rpursuit/verify.hpp"

using namespace rpursuit;

namespace {

template <typename T, typename Parse>
T parse_or_throw(const std::string& text, Parse parse, const char* what) {
  auto v = parse(text);
  if (!v) throw CLI::ValidationError(what, "unknown value '" + text + "'");
  return *v;
}

std::vector<std::string> split(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Options shared by every experiment-style subcommand.
struct CommonOptions {
  std::string function = "sphere";
  long dim = 64;
  int reps = 25;
  double accuracy = kTargetAccuracy;
  std::uint64_t seed = 0;
  double mu = 1e-5;
  std::string ls_mode = "absolute";
  std::string sampler = "sphere";
  std::string rg_dirs = "sphere";
  std::string sigma0 = "auto";
  long iters = 0;
  unsigned threads = 0;
  double L1 = 0.0;
  double m = -1.0;
  std::string out;

  void attach(CLI::App* app) {
    app->add_option("--function", function, "sphere|ellipsoid|nesterov-smooth|nesterov-strong|funnel")
        ->capture_default_str();
    app->add_option("--dim", dim, "problem dimension n")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--reps", reps, "repetitions per algorithm")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--accuracy", accuracy, "final relative accuracy")->capture_default_str();
    app->add_option("--seed", seed, "base seed; repetition r uses seed + r")->capture_default_str();
    app->add_option("--mu", mu, "line-search accuracy / difference step")->capture_default_str();
    app->add_option("--ls-mode", ls_mode, "absolute|relative")->capture_default_str();
    app->add_option("--sampler", sampler, "RP/ARP directions: sphere|discrete")->capture_default_str();
    app->add_option("--rg-dirs", rg_dirs, "RG/FG directions: sphere|gaussian")->capture_default_str();
    app->add_option("--sigma0", sigma0, "ES initial step: auto or a number")->capture_default_str();
    app->add_option("--iters", iters, "iteration cap (default 1e4 n randomized, 1e6 gradient)");
    app->add_option("--threads", threads, "worker threads (0: all cores)")->capture_default_str();
    app->add_option("--L1", L1, "override the protocol L1");
    app->add_option("--m", m, "override the protocol m");
    app->add_option("--out", out, "output file (default stdout)");
  }

  ExperimentConfig experiment() const {
    ExperimentConfig cfg;
    cfg.function = parse_or_throw<Benchmark>(function, parse_benchmark, "--function");
    cfg.n = dim;
    cfg.repetitions = reps;
    cfg.ladder = make_accuracy_ladder(accuracy);
    cfg.base_seed = seed;
    cfg.mu = mu;
    cfg.ls_mode = parse_or_throw<LineSearchMode>(ls_mode, parse_ls_mode, "--ls-mode");
    cfg.sampler = parse_or_throw<SamplerKind>(sampler, parse_sampler, "--sampler");
    cfg.rg_dirs = parse_or_throw<SamplerKind>(rg_dirs, parse_sampler, "--rg-dirs");
    if (sigma0 != "auto") cfg.sigma0 = std::stod(sigma0);
    if (iters > 0) cfg.max_iters = iters;
    cfg.threads = threads;
    if (L1 > 0.0) cfg.L1 = L1;
    if (m >= 0.0) cfg.m = m;
    return cfg;
  }
};

void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  write(f);
}

void report(const ExperimentResult& r) {
  for (const auto& s : r.skipped) std::cerr << "skipped: " << s << '\n';
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  if (r.sigma0) std::cerr << "es sigma0 = " << *r.sigma0 << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random Pursuit and friends: derivative-free convex optimization benchmarks"};
  app.set_config("--config", "", "read options from a TOML/INI file ([bench], [run], ... sections)");
  app.require_subcommand(1);

  CommonOptions bench_opts;
  std::string algos = "rp,arp,rg,fg,es,gm,gm-ls";
  std::string format = "csv";
  std::string plot_out;
  auto* bench = app.add_subcommand("bench", "run the repetition protocol and export statistics");
  bench_opts.attach(bench);
  bench->add_option("--algos", algos, "comma-separated algorithms")->capture_default_str();
  bench->add_option("--format", format, "csv|markdown|plot-data")->capture_default_str();
  bench->add_option("--plot-out", plot_out, "also write plot data to this file");

  CommonOptions run_opts;
  run_opts.reps = 1;
  std::string algo = "rp";
  bool store_iterates = false;
  auto* run = app.add_subcommand("run", "single run; prints iteration, fes, f - f* per step");
  run_opts.attach(run);
  run->add_option("--algo", algo, "rp|arp|rg|fg|es|gm|gm-ls")->capture_default_str();
  run->add_flag("--store-iterates", store_iterates, "append the iterates to each row");

  theory::VerifyOptions vopts;
  auto* verify = app.add_subcommand("verify", "run the theory verification suite");
  verify->add_option("--seed", vopts.seed)->capture_default_str();
  verify->add_option("--threads", vopts.threads)->capture_default_str();

  CommonOptions sweep_opts;
  sweep_opts.function = "ellipsoid";
  sweep_opts.ls_mode = "relative";
  std::string mus = "1e-1,1e-2,1e-3,1e-4,1e-5,1e-6,1e-7,1e-8,1e-9,1e-10";
  auto* sweep = app.add_subcommand("sweep-mu", "RP at the final accuracy for several mu");
  sweep_opts.attach(sweep);
  sweep->add_option("--mus", mus, "comma-separated mu values")->capture_default_str();

  CommonOptions scan_opts;
  std::string dims = "4,8,16,32,64,128,256,512,1024";
  auto* scan = app.add_subcommand("scan-dims", "RP at the final accuracy for several dimensions");
  scan_opts.attach(scan);
  scan->add_option("--dims", dims, "comma-separated dimensions")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bench) {
      ExperimentConfig cfg = bench_opts.experiment();
      cfg.algorithms.clear();
      for (const auto& a : split(algos)) cfg.algorithms.push_back(parse_or_throw<Algorithm>(a, parse_algorithm, "--algos"));
      const auto fmt = parse_or_throw<ExportFormat>(format, parse_export_format, "--format");
      const ExperimentResult r = run_experiment(cfg);
      report(r);
      if (r.stats.empty()) throw std::runtime_error("no valid algorithm/function pairing to run");
      emit(bench_opts.out, [&](std::ostream& os) {
        switch (fmt) {
          case ExportFormat::csv: write_csv(r, os); break;
          case ExportFormat::markdown: write_markdown(r, os); break;
          case ExportFormat::plot_data: write_plot_data(r, os); break;
        }
      });
      if (!plot_out.empty()) export_results(r, ExportFormat::plot_data, plot_out);
    } else if (*run) {
      const ExperimentConfig ec = run_opts.experiment();
      const ObjectiveSpec spec = ec.make_spec();
      SolverConfig sc;
      sc.algorithm = parse_or_throw<Algorithm>(algo, parse_algorithm, "--algo");
      if (auto why = pairing_error(spec, sc.algorithm, ec.mu)) throw std::runtime_error(*why);
      sc.x0 = Vector::Zero(spec.dim);
      sc.max_iters = ec.iteration_cap(sc.algorithm);
      sc.mu = ec.mu;
      sc.seed = ec.base_seed;
      sc.sampler = ec.sampler;
      sc.rg_dirs = ec.rg_dirs;
      sc.ladder = ec.ladder;
      sc.store_iterates = store_iterates;
      if (sc.algorithm == Algorithm::es) {
        sc.sigma0 = ec.sigma0 ? *ec.sigma0 : calibrate_sigma0(spec, sc.x0, sc.p, ec.calibration_trials, ec.base_seed);
      }
      const RunTrace t = run_solver(spec, sc, ec.line_search());
      if (t.aborted) std::cerr << "aborted: " << t.diagnostic << '\n';
      emit(run_opts.out, [&](std::ostream& os) {
        os << "iteration,fes,gap" << (store_iterates ? ",x" : "") << '\n';
        os.precision(17);
        for (std::size_t k = 0; k < t.values.size(); ++k) {
          os << k << ',' << t.fes_history[k] << ',' << t.values[k] - spec.f_star;
          if (store_iterates) {
            for (Index i = 0; i < spec.dim; ++i) os << (i ? ' ' : ',') << t.iterates[k](i);
          }
          os << '\n';
        }
      });
      for (const auto& th : t.thresholds) {
        if (th.converged) {
          std::cerr << "accuracy " << th.accuracy << ": its " << th.its << ", fes " << th.fes << '\n';
        } else {
          std::cerr << "accuracy " << th.accuracy << ": not reached\n";
        }
      }
    } else if (*verify) {
      const auto rows = theory::run_verification_suite(vopts);
      theory::print_results(rows, std::cout);
      for (const auto& r : rows) {
        if (!r.passed) return 1;
      }
    } else if (*sweep) {
      std::vector<double> values;
      for (const auto& s : split(mus)) values.push_back(std::stod(s));
      const auto rows = mu_sweep(sweep_opts.experiment(), values);
      emit(sweep_opts.out, [&](std::ostream& os) { write_sweep_csv(rows, "mu", os); });
    } else if (*scan) {
      std::vector<Index> values;
      for (const auto& s : split(dims)) values.push_back(std::stol(s));
      const auto rows = scan_dims(scan_opts.experiment(), values);
      emit(scan_opts.out, [&](std::ostream& os) { write_sweep_csv(rows, "n", os); });
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
