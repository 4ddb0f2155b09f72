#ifndef RPURSUIT_SOLVERS_HPP
#define RPURSUIT_SOLVERS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rpursuit/linesearch.hpp"
#include "rpursuit/objectives.hpp"
#include "rpursuit/sampling.hpp"

namespace rpursuit {

enum class Algorithm { rp, arp, rg, fg, es, gm, gm_ls };

std::optional<Algorithm> parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm a);

/// Zeroth-order randomized schemes report ITS in blocks of n.
bool is_randomized(Algorithm a);

struct SolverConfig {
  Algorithm algorithm = Algorithm::rp;
  Vector x0;
  long max_iters = 1000;  // N
  double mu = 1e-5;       // line-search accuracy, or finite-difference step for RG/FG
  std::uint64_t seed = 0;
  SamplerKind sampler = SamplerKind::unit_sphere;     // RP / ARP directions
  SamplerKind rg_dirs = SamplerKind::unit_sphere;     // RG / FG directions
  double sigma0 = 1.0;                                // ES initial step
  double p = 0.27;                                    // ES target success probability
  bool store_iterates = false;
  /// Relative accuracies (fractions of the scale S), strictly decreasing.
  std::vector<double> ladder;
  /// Stop as soon as the last ladder entry is reached.
  bool stop_at_target = true;

  void validate(const ObjectiveSpec& spec) const;
};

struct ThresholdRecord {
  double accuracy = 0.0;
  bool converged = false;
  long its = 0;
  std::uint64_t fes = 0;
};

struct RunTrace {
  Algorithm algorithm = Algorithm::rp;
  /// f(x_k) for k = 0..iterations; monitoring evaluations are not charged.
  std::vector<double> values;
  /// Cumulative FES after iteration k (fes_history[0] = 0).
  std::vector<std::uint64_t> fes_history;
  std::vector<Vector> iterates;  // only with store_iterates
  std::vector<ThresholdRecord> thresholds;
  Vector x_final;
  long iterations = 0;
  std::uint64_t fes = 0;
  bool aborted = false;
  std::string diagnostic;
};

/// Coefficient tuple of the accelerated schemes for one iteration.
struct ArpState {
  double gamma = 0.0;       // gamma_k
  double gamma_next = 0.0;  // gamma_{k+1}
  double beta = 0.0;
  double lambda = 0.0;
  double delta = 0.0;
  double theta = 0.0;
};

/// Solves theta^{-1} beta^2 = (1 - beta) gamma + beta m for its positive root
/// and fills the derived coefficients.
ArpState arp_coefficients(double theta, double gamma, double m);

struct EsFactors {
  double c_s;
  double c_f;
};

/// c_s = e^{1/3}, c_f = c_s e^{-p/(1-p)}.
EsFactors es_factors(double p);

RunTrace run_rp(const ObjectiveSpec& spec, const SolverConfig& cfg, const LineSearchConfig& ls);
RunTrace run_arp(const ObjectiveSpec& spec, const SolverConfig& cfg, const LineSearchConfig& ls);
RunTrace run_rg(const ObjectiveSpec& spec, const SolverConfig& cfg);
RunTrace run_fg(const ObjectiveSpec& spec, const SolverConfig& cfg);
RunTrace run_es(const ObjectiveSpec& spec, const SolverConfig& cfg);
RunTrace run_gm(const ObjectiveSpec& spec, const SolverConfig& cfg);
RunTrace run_gm_ls(const ObjectiveSpec& spec, const SolverConfig& cfg, const LineSearchConfig& ls);

/// Dispatches on cfg.algorithm.
RunTrace run_solver(const ObjectiveSpec& spec, const SolverConfig& cfg, const LineSearchConfig& ls);

/// Finds sigma with Pr[f(x0 + sigma u) <= f(x0)] ~= p for u ~ N(0, I), by
/// bisection in log(sigma) over a fixed set of `trials` Gaussian draws.
/// Throws std::runtime_error when no sigma reaches p (e.g. a flat function).
double calibrate_sigma0(const ObjectiveSpec& spec, const Vector& x0, double p, int trials,
                        std::uint64_t seed);

/// Empirical improvement probability at step sigma over fresh draws.
double es_success_probability(const ObjectiveSpec& spec, const Vector& x0, double sigma,
                              int trials, std::uint64_t seed);

}  // namespace rpursuit

#endif  // RPURSUIT_SOLVERS_HPP
