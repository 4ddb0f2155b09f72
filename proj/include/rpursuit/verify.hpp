#ifndef RPURSUIT_VERIFY_HPP
#define RPURSUIT_VERIFY_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rpursuit/theory.hpp"

namespace rpursuit::theory {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 2024;
  long moment_trials = 1000000;
  long step_trials = 100000;
  int step_points = 20;
  int rp_seeds = 200;
  unsigned threads = 0;
};

/// RP on the sphere, n = 16: mean gap after N steps over `seeds` runs.
struct RateExperiment {
  std::vector<double> mean_gap;  // k = 0..N
  std::vector<double> gap_stderr;
  double bound = 0.0;            // strongly convex bound at N
  double fitted_log_decay = 0.0; // least-squares slope of log mean gap
};

RateExperiment sphere_rate_experiment(Index n, long N, double mu, int seeds, std::uint64_t base_seed,
                                      unsigned threads = 0);

/// Single-step bound checks at `points` random points of `spec`; each point
/// uses `trials` directions. Returns the worst margin in standard errors.
struct StepSweep {
  int points = 0;
  int failures = 0;
  double worst_margin = 0.0;
};

/// Gradient form with h = 1/L1 and an absolute oracle of accuracy `mu`.
StepSweep sweep_gradient_bound(const ObjectiveSpec& spec, double mu, int points, long trials,
                               std::uint64_t seed, unsigned threads = 0);
/// Relative-error form with z = x* and the h minimising the bound.
StepSweep sweep_relative_bound(const ObjectiveSpec& spec, double mu, int points, long trials,
                               std::uint64_t seed, unsigned threads = 0);

/// Runs every theory check and returns one row each.
std::vector<CheckResult> run_verification_suite(const VerifyOptions& opts = {});

void print_results(const std::vector<CheckResult>& rows, std::ostream& os);

}  // namespace rpursuit::theory

#endif  // RPURSUIT_VERIFY_HPP
