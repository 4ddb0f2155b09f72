#include "rpursuit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "parallel.hpp"
#include "rpursuit/sampling.hpp"

namespace rpursuit {

namespace {

constexpr std::size_t kMaxGapSamples = 4096;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double protocol_L1(Benchmark b) {
  return (b == Benchmark::sphere || b == Benchmark::funnel) ? 1.0 : 1000.0;
}

RunSummary summarize(const ObjectiveSpec& spec, const RunTrace& trace, std::uint64_t seed) {
  RunSummary s;
  s.seed = seed;
  s.thresholds = trace.thresholds;
  s.iterations = trace.iterations;
  s.fes = trace.fes;
  s.aborted = trace.aborted;
  s.diagnostic = trace.diagnostic;
  const std::size_t len = trace.values.size();
  s.final_gap = len ? trace.values.back() - spec.f_star : std::numeric_limits<double>::quiet_NaN();
  const std::size_t stride = std::max<std::size_t>(1, (len + kMaxGapSamples - 1) / kMaxGapSamples);
  for (std::size_t k = 0; k < len; k += stride) {
    s.gap_samples.emplace_back(static_cast<long>(k), trace.values[k] - spec.f_star);
  }
  if (len && s.gap_samples.back().first != static_cast<long>(len - 1)) {
    s.gap_samples.emplace_back(static_cast<long>(len - 1), trace.values.back() - spec.f_star);
  }
  return s;
}

// Gap of a run at iteration k: the last sample at or before k.
double gap_at(const RunSummary& run, long k) {
  auto it = std::upper_bound(run.gap_samples.begin(), run.gap_samples.end(), k,
                             [](long key, const std::pair<long, double>& s) { return key < s.first; });
  if (it == run.gap_samples.begin()) return run.gap_samples.front().second;
  return std::prev(it)->second;
}

}  // namespace

std::vector<double> pow2_ladder(int k) {
  if (k < 1) throw std::invalid_argument("pow2_ladder: k must be >= 1");
  std::vector<double> out;
  for (int i = 1; i <= k; ++i) out.push_back(std::ldexp(1.0, -i));
  return out;
}

std::vector<double> make_accuracy_ladder(double final_accuracy) {
  if (!(final_accuracy > 0.0 && final_accuracy < 1.0)) {
    throw std::invalid_argument("make_accuracy_ladder: final accuracy must lie in (0, 1)");
  }
  std::vector<double> out;
  for (int i = 1;; ++i) {
    const double a = std::ldexp(1.0, -i);
    if (!(a > final_accuracy * (1.0 + 1e-9))) break;
    out.push_back(a);
  }
  out.push_back(final_accuracy);
  return out;
}

ObjectiveSpec ExperimentConfig::make_spec() const {
  const double l1 = L1.value_or(protocol_L1(function));
  return make_benchmark(function, n, l1, m.value_or(1.0));
}

LineSearchConfig ExperimentConfig::line_search() const {
  LineSearchConfig ls;
  ls.mode = ls_mode;
  ls.mu = mu;
  return ls;
}

long ExperimentConfig::iteration_cap(Algorithm a) const {
  if (max_iters) return *max_iters;
  return is_randomized(a) ? 10000L * static_cast<long>(n) : 1000000L;
}

void ExperimentConfig::validate() const {
  if (repetitions < 1) throw std::invalid_argument("experiment: repetitions must be >= 1");
  if (algorithms.empty()) throw std::invalid_argument("experiment: no algorithms given");
  if (ladder.empty()) throw std::invalid_argument("experiment: empty accuracy ladder");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0)) throw std::invalid_argument("experiment: ladder entries must be positive");
    if (i > 0 && !(ladder[i] < ladder[i - 1])) {
      throw std::invalid_argument("experiment: ladder must be strictly decreasing");
    }
  }
  if (max_iters && *max_iters < 1) throw std::invalid_argument("experiment: max_iters must be >= 1");
  if (sigma0 && !(*sigma0 > 0.0)) throw std::invalid_argument("experiment: sigma0 must be > 0");
  if (calibration_trials < 1000) throw std::invalid_argument("experiment: calibration needs >= 1000 trials");
  line_search().validate();
}

const AggregateStats* ExperimentResult::find(Algorithm a, double accuracy) const {
  for (const auto& s : stats) {
    if (s.algorithm == a && s.accuracy == accuracy) return &s;
  }
  return nullptr;
}

const AggregateStats* ExperimentResult::final_stats(Algorithm a) const {
  const AggregateStats* last = nullptr;
  for (const auto& s : stats) {
    if (s.algorithm == a) last = &s;
  }
  return last;
}

std::optional<std::string> pairing_error(const ObjectiveSpec& spec, Algorithm a, double mu) {
  switch (a) {
    case Algorithm::gm:
    case Algorithm::gm_ls:
      if (!spec.has_gradient()) return to_string(a).data() + std::string(" needs a gradient");
      break;
    case Algorithm::arp:
    case Algorithm::fg:
      if (!(spec.m > 0.0)) return to_string(a).data() + std::string(" needs m > 0");
      break;
    default:
      break;
  }
  if ((a == Algorithm::rg || a == Algorithm::fg) && !(mu > 0.0)) {
    return to_string(a).data() + std::string(" needs mu > 0 for its difference quotient");
  }
  return std::nullopt;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const ObjectiveSpec spec = cfg.make_spec();
  const LineSearchConfig ls = cfg.line_search();

  ExperimentResult result;
  result.function = std::string(to_string(cfg.function));
  result.n = spec.dim;
  result.S = spec.S;

  const Vector x0 = Vector::Zero(spec.dim);
  for (Algorithm a : cfg.algorithms) {
    if (auto why = pairing_error(spec, a, cfg.mu)) {
      result.skipped.push_back(*why + " (" + result.function + ")");
      continue;
    }
    AlgorithmRuns cell;
    cell.algorithm = a;
    cell.base.algorithm = a;
    cell.base.x0 = x0;
    cell.base.max_iters = cfg.iteration_cap(a);
    cell.base.mu = cfg.mu;
    cell.base.seed = cfg.base_seed;
    cell.base.sampler = cfg.sampler;
    cell.base.rg_dirs = cfg.rg_dirs;
    cell.base.p = cfg.p;
    cell.base.ladder = cfg.ladder;
    if (a == Algorithm::es) {
      if (!result.sigma0) {
        result.sigma0 = cfg.sigma0 ? *cfg.sigma0
                                   : calibrate_sigma0(spec, x0, cfg.p, cfg.calibration_trials,
                                                      mix_seed(cfg.base_seed ^ 0x5eedULL));
      }
      cell.base.sigma0 = *result.sigma0;
    }
    cell.runs.resize(cfg.repetitions);
    if (cfg.keep_traces) cell.traces.resize(cfg.repetitions);
    result.cells.push_back(std::move(cell));
  }

  const std::size_t reps = static_cast<std::size_t>(cfg.repetitions);
  detail::parallel_for(result.cells.size() * reps, cfg.threads, [&](std::size_t task) {
    AlgorithmRuns& cell = result.cells[task / reps];
    const std::size_t rep = task % reps;
    SolverConfig sc = cell.base;
    sc.seed = cfg.base_seed + rep;
    RunTrace trace = run_solver(spec, sc, ls);
    cell.runs[rep] = summarize(spec, trace, sc.seed);
    if (cfg.keep_traces) cell.traces[rep] = std::move(trace);
  });

  for (const auto& cell : result.cells) {
    auto rows = aggregate(result, cell, cfg.ladder);
    const auto& last = rows.back();
    const std::string alg(to_string(cell.algorithm));
    if (last.successes < last.repetitions) {
      result.warnings.push_back(alg + ": " + std::to_string(last.repetitions - last.successes) + " of " +
                                std::to_string(last.repetitions) + " runs did not reach accuracy " +
                                fmt(last.accuracy) + " within " + std::to_string(cell.base.max_iters) +
                                " iterations");
    }
    long aborted = std::count_if(cell.runs.begin(), cell.runs.end(), [](const RunSummary& r) { return r.aborted; });
    if (aborted > 0) {
      const auto first = std::find_if(cell.runs.begin(), cell.runs.end(), [](const RunSummary& r) { return r.aborted; });
      result.warnings.push_back(alg + ": " + std::to_string(aborted) + " runs aborted (" + first->diagnostic + ")");
    }
    result.stats.insert(result.stats.end(), rows.begin(), rows.end());
  }
  return result;
}

std::vector<AggregateStats> aggregate(const ExperimentResult& result, const AlgorithmRuns& cell,
                                      const std::vector<double>& ladder) {
  const double n = static_cast<double>(result.n);
  const double its_scale = is_randomized(cell.algorithm) ? n : 1.0;
  std::vector<AggregateStats> rows;
  for (std::size_t j = 0; j < ladder.size(); ++j) {
    AggregateStats s;
    s.function = result.function;
    s.n = result.n;
    s.algorithm = cell.algorithm;
    s.accuracy = ladder[j];
    s.repetitions = static_cast<int>(cell.runs.size());
    double its_sum = 0.0;
    double fes_sum = 0.0;
    s.min_its = s.min_fes = std::numeric_limits<double>::infinity();
    s.max_its = s.max_fes = -std::numeric_limits<double>::infinity();
    for (const auto& run : cell.runs) {
      const ThresholdRecord& t = run.thresholds[j];
      if (!t.converged) continue;
      const double its = static_cast<double>(t.its) / its_scale;
      const double fes = static_cast<double>(t.fes) / n;
      ++s.successes;
      its_sum += its;
      fes_sum += fes;
      s.min_its = std::min(s.min_its, its);
      s.max_its = std::max(s.max_its, its);
      s.min_fes = std::min(s.min_fes, fes);
      s.max_fes = std::max(s.max_fes, fes);
    }
    if (s.successes > 0) {
      s.mean_its = its_sum / s.successes;
      s.mean_fes = fes_sum / s.successes;
    } else {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      s.min_its = s.mean_its = s.max_its = nan;
      s.min_fes = s.mean_fes = s.max_fes = nan;
    }
    rows.push_back(s);
  }
  return rows;
}

std::optional<ExportFormat> parse_export_format(std::string_view name) {
  if (name == "csv") return ExportFormat::csv;
  if (name == "markdown" || name == "md") return ExportFormat::markdown;
  if (name == "plot-data" || name == "plot_data" || name == "plot") return ExportFormat::plot_data;
  return std::nullopt;
}

void write_csv(const ExperimentResult& result, std::ostream& os) {
  os << "function,n,algorithm,accuracy,min_its,mean_its,max_its,min_fes,mean_fes,max_fes,successes,repetitions\n";
  for (const auto& s : result.stats) {
    os << s.function << ',' << s.n << ',' << to_string(s.algorithm) << ',' << fmt(s.accuracy) << ','
       << fmt(s.min_its) << ',' << fmt(s.mean_its) << ',' << fmt(s.max_its) << ',' << fmt(s.min_fes) << ','
       << fmt(s.mean_fes) << ',' << fmt(s.max_fes) << ',' << s.successes << ',' << s.repetitions << '\n';
  }
}

void write_markdown(const ExperimentResult& result, std::ostream& os) {
  os << "## " << result.function << ", n = " << result.n << "\n";
  auto table = [&](const char* title, auto pick) {
    os << "\n### " << title << "\n\n| accuracy |";
    for (const auto& cell : result.cells) {
      const std::string a(to_string(cell.algorithm));
      os << ' ' << a << " min | " << a << " mean | " << a << " max |";
    }
    os << "\n|---|";
    for (std::size_t i = 0; i < result.cells.size(); ++i) os << "---:|---:|---:|";
    os << '\n';
    if (result.cells.empty()) return;
    const std::size_t levels = result.cells.front().runs.empty() ? 0 : result.cells.front().runs.front().thresholds.size();
    for (std::size_t j = 0; j < levels; ++j) {
      const double acc = result.cells.front().runs.front().thresholds[j].accuracy;
      os << "| " << fmt(acc) << " |";
      for (const auto& cell : result.cells) {
        const AggregateStats* s = result.find(cell.algorithm, acc);
        if (!s || s->successes == 0) {
          os << " - | - | - |";
        } else {
          auto [lo, mid, hi] = pick(*s);
          os << ' ' << fmt(lo) << " | " << fmt(mid) << " | " << fmt(hi) << " |";
        }
      }
      os << '\n';
    }
  };
  table("ITS (divided by n for randomized schemes)",
        [](const AggregateStats& s) { return std::tuple{s.min_its, s.mean_its, s.max_its}; });
  table("FES / n", [](const AggregateStats& s) { return std::tuple{s.min_fes, s.mean_fes, s.max_fes}; });
  if (!result.skipped.empty() || !result.warnings.empty()) {
    os << '\n';
    for (const auto& s : result.skipped) os << "- skipped: " << s << '\n';
    for (const auto& w : result.warnings) os << "- warning: " << w << '\n';
  }
}

void write_plot_data(const ExperimentResult& result, std::ostream& os, int points) {
  if (points < 2) throw std::invalid_argument("write_plot_data: need at least 2 points");
  os << "algorithm,iteration,mean_log10_accuracy\n";
  for (const auto& cell : result.cells) {
    long last = 0;
    for (const auto& run : cell.runs) last = std::max(last, run.iterations);
    const long count = std::min<long>(points, last + 1);
    long prev = -1;
    for (long i = 0; i < count; ++i) {
      const long k = count == 1 ? 0 : static_cast<long>(std::llround(static_cast<double>(i) * last / (count - 1)));
      if (k == prev) continue;
      prev = k;
      double sum = 0.0;
      for (const auto& run : cell.runs) {
        const double rel = gap_at(run, k) / result.S;
        sum += std::log10(std::max(rel, 1e-300));
      }
      os << to_string(cell.algorithm) << ',' << k << ',' << fmt(sum / static_cast<double>(cell.runs.size())) << '\n';
    }
  }
}

void export_results(const ExperimentResult& result, ExportFormat format, const std::string& path) {
  if (result.stats.empty()) throw std::invalid_argument("export_results: nothing to export");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_results: cannot open " + path);
  switch (format) {
    case ExportFormat::csv: write_csv(result, out); break;
    case ExportFormat::markdown: write_markdown(result, out); break;
    case ExportFormat::plot_data: write_plot_data(result, out); break;
  }
  out.flush();
  if (!out) throw std::runtime_error("export_results: write failed for " + path);
}

std::vector<SweepRow> mu_sweep(ExperimentConfig base, const std::vector<double>& mus) {
  base.algorithms = {Algorithm::rp};
  std::vector<SweepRow> rows;
  for (double mu : mus) {
    base.mu = mu;
    const ExperimentResult r = run_experiment(base);
    const AggregateStats* s = r.final_stats(Algorithm::rp);
    rows.push_back({mu, r.n, s->mean_its, s->mean_fes, s->successes, s->repetitions});
  }
  return rows;
}

std::vector<SweepRow> scan_dims(ExperimentConfig base, const std::vector<Index>& dims) {
  base.algorithms = {Algorithm::rp};
  std::vector<SweepRow> rows;
  for (Index n : dims) {
    base.n = n;
    const ExperimentResult r = run_experiment(base);
    const AggregateStats* s = r.final_stats(Algorithm::rp);
    rows.push_back({base.mu, n, s->mean_its, s->mean_fes, s->successes, s->repetitions});
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::string_view key, std::ostream& os) {
  os << key << ",mean_its,mean_fes,successes,repetitions\n";
  for (const auto& r : rows) {
    os << (key == "n" ? std::to_string(r.n) : fmt(r.mu)) << ',' << fmt(r.mean_its) << ',' << fmt(r.mean_fes)
       << ',' << r.successes << ',' << r.repetitions << '\n';
  }
}

}  // namespace rpursuit
