#ifndef RPURSUIT_HARNESS_HPP
#define RPURSUIT_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rpursuit/linesearch.hpp"
#include "rpursuit/objectives.hpp"
#include "rpursuit/solvers.hpp"

namespace rpursuit {

inline constexpr double kTargetAccuracy = 1.91e-6;

/// 2^-1, ..., 2^-k.
std::vector<double> pow2_ladder(int k);

/// Powers of two above `final_accuracy`, followed by `final_accuracy`
/// itself. The default gives 2^-1..2^-18 and 1.91e-6 (19 levels).
std::vector<double> make_accuracy_ladder(double final_accuracy = kTargetAccuracy);

struct ExperimentConfig {
  Benchmark function = Benchmark::sphere;
  Index n = 64;
  std::optional<double> L1;  // protocol value when unset
  std::optional<double> m;
  std::vector<Algorithm> algorithms{Algorithm::rp};
  int repetitions = 25;
  std::vector<double> ladder = make_accuracy_ladder();
  std::uint64_t base_seed = 0;

  double mu = 1e-5;
  LineSearchMode ls_mode = LineSearchMode::absolute;
  SamplerKind sampler = SamplerKind::unit_sphere;
  SamplerKind rg_dirs = SamplerKind::unit_sphere;
  std::optional<double> sigma0;  // calibrated when unset
  double p = 0.27;
  int calibration_trials = 10000;

  /// Overrides both default caps (10^4 n randomized, 10^6 gradient).
  std::optional<long> max_iters;
  unsigned threads = 0;  // 0: hardware concurrency
  bool keep_traces = false;

  ObjectiveSpec make_spec() const;
  LineSearchConfig line_search() const;
  long iteration_cap(Algorithm a) const;
  void validate() const;
};

/// What one run leaves behind when full traces are not kept.
struct RunSummary {
  std::uint64_t seed = 0;
  std::vector<ThresholdRecord> thresholds;
  long iterations = 0;
  std::uint64_t fes = 0;
  double final_gap = 0.0;
  bool aborted = false;
  std::string diagnostic;
  /// (iteration, f - f*) at up to a few thousand evenly spaced iterations,
  /// always including the first and the last.
  std::vector<std::pair<long, double>> gap_samples;
};

struct AlgorithmRuns {
  Algorithm algorithm = Algorithm::rp;
  SolverConfig base;  // seed and x0 of repetition 0
  std::vector<RunSummary> runs;
  std::vector<RunTrace> traces;  // only with keep_traces
};

struct AggregateStats {
  std::string function;
  Index n = 0;
  Algorithm algorithm = Algorithm::rp;
  double accuracy = 0.0;
  // ITS is divided by n for randomized schemes; FES is always divided by n.
  double min_its = 0.0, mean_its = 0.0, max_its = 0.0;
  double min_fes = 0.0, mean_fes = 0.0, max_fes = 0.0;
  int successes = 0;
  int repetitions = 0;
};

struct ExperimentResult {
  std::string function;
  Index n = 0;
  double S = 0.0;
  std::optional<double> sigma0;  // the value ES used
  std::vector<AlgorithmRuns> cells;
  std::vector<AggregateStats> stats;  // ordered by (algorithm, accuracy)
  std::vector<std::string> skipped;   // invalid pairings with reasons
  std::vector<std::string> warnings;  // unconverged or aborted runs

  const AggregateStats* find(Algorithm a, double accuracy) const;
  /// Stats at the last ladder entry.
  const AggregateStats* final_stats(Algorithm a) const;
};

/// Reason why `a` cannot run on `spec`, if any.
std::optional<std::string> pairing_error(const ObjectiveSpec& spec, Algorithm a, double mu);

/// Runs every (algorithm, repetition) pair from x0 = 0 with seed
/// base_seed + repetition on a thread pool. The result does not depend on
/// the thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Aggregates one cell; unconverged repetitions do not enter min/mean/max.
std::vector<AggregateStats> aggregate(const ExperimentResult& result, const AlgorithmRuns& cell,
                                      const std::vector<double>& ladder);

enum class ExportFormat { csv, markdown, plot_data };

std::optional<ExportFormat> parse_export_format(std::string_view name);

void write_csv(const ExperimentResult& result, std::ostream& os);
void write_markdown(const ExperimentResult& result, std::ostream& os);
/// Columns algorithm, iteration, mean_log10_accuracy; at most `points` rows
/// per algorithm. A run that stopped early holds its last value.
void write_plot_data(const ExperimentResult& result, std::ostream& os, int points = 100);

/// Writes to `path`; throws std::runtime_error when it cannot be opened.
void export_results(const ExperimentResult& result, ExportFormat format, const std::string& path);

struct SweepRow {
  double mu = 0.0;   // or the dimension, for scan_dims
  Index n = 0;
  double mean_its = 0.0;  // ITS / n
  double mean_fes = 0.0;  // FES / n
  int successes = 0;
  int repetitions = 0;
};

/// RP on `base` (f2, n = 64 by default) for each mu, at the final ladder
/// accuracy. The line-search mode is taken from `base`.
std::vector<SweepRow> mu_sweep(ExperimentConfig base, const std::vector<double>& mus);

/// RP on `base.function` for each dimension.
std::vector<SweepRow> scan_dims(ExperimentConfig base, const std::vector<Index>& dims);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::string_view key, std::ostream& os);

}  // namespace rpursuit

#endif  // RPURSUIT_HARNESS_HPP
