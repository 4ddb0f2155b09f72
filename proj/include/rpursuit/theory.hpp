#ifndef RPURSUIT_THEORY_HPP
#define RPURSUIT_THEORY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rpursuit/linesearch.hpp"
#include "rpursuit/objectives.hpp"
#include "rpursuit/sampling.hpp"

namespace rpursuit::theory {

/// Monte-Carlo margin used by every statistical check.
inline constexpr double kSigmaMargin = 4.0;

// ---------------------------------------------------------------------------
// Moments of scaled random vectors <x,u>u.

struct MomentCheckReport {
  Vector estimator_mean;          // E[<x,u>u]
  double estimator_second = 0.0;  // E[|<x,u>u|^2]
  Vector target_mean;
  double target_second = 0.0;
  Vector mean_stderr;             // per component
  double mc_stderr = 0.0;         // of the second moment
  long trials = 0;
  bool exact = false;             // enumeration rather than sampling

  /// Largest deviation from target, in standard errors (0 for exact reports).
  double worst_sigma() const;
  bool passes(double k_sigma = kSigmaMargin, double exact_tol = 1e-12) const;
};

/// Targets: gaussian (x, (n+2)|x|^2); sphere and signed unit (x/n, |x|^2/n).
Vector target_mean(SamplerKind kind, const Vector& x);
double target_second_moment(SamplerKind kind, const Vector& x);

/// Monte-Carlo estimate; needs trials >= 10^4 and x != 0.
MomentCheckReport check_moments(SamplerKind kind, const Vector& x, long trials, std::uint64_t seed);

/// Exact average over the 2n signed unit vectors.
MomentCheckReport enumerate_signed_unit_moments(const Vector& x);

struct ScalarNormalMoments {
  double m1, m2, m3, m4;
  double se1, se2, se3, se4;
  long trials;
};

/// Sample moments E[nu^k], k = 1..4, of the library's normal generator.
ScalarNormalMoments normal_moments(long trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Expected single-step progress of RP.

struct SingleStepReport {
  double empirical_mean = 0.0;  // E[f(x_{k+1}) | x_k]
  double stderr_ = 0.0;
  double bound = 0.0;
  long trials = 0;

  /// (mean - bound) / stderr; negative is good.
  double margin_sigma() const;
  bool passes(double k_sigma = kSigmaMargin) const;
};

/// Right-hand side of the absolute-error one-step bound for free h, z:
/// f(x) + h/n <g, z-x> + L1 h^2/(2n) |z-x|^2 + L1 mu^2/2.
double one_step_bound_absolute(const ObjectiveSpec& spec, const Vector& x, double h,
                               const Vector& z, double mu);

/// Relative-error variant: n replaced by n' = n/(1-mu) and no additive term.
double one_step_bound_relative(const ObjectiveSpec& spec, const Vector& x, double h,
                               const Vector& z, double mu);

/// Gradient-form bound f(x) - h/(2n) |g|^2 + L1 mu^2/2, valid for 0 < h <= 1/L1.
double one_step_bound_gradient(const ObjectiveSpec& spec, const Vector& x, double h, double mu);

/// Estimates E[f(x_{k+1}) | x_k] over `trials` fresh sphere directions using
/// the RP update with the given oracle and compares with:
///   absolute mode -> one_step_bound_absolute(h, z)
///   relative mode -> one_step_bound_relative(h, z)
SingleStepReport check_single_step(const ObjectiveSpec& spec, const Vector& x_k, double h,
                                   const Vector& z, const LineSearchConfig& ls, long trials,
                                   std::uint64_t seed);

/// Same estimate compared against the gradient-form bound (h <= 1/L1).
SingleStepReport check_single_step_gradient(const ObjectiveSpec& spec, const Vector& x_k,
                                            double h, const LineSearchConfig& ls, long trials,
                                            std::uint64_t seed);

// ---------------------------------------------------------------------------
// Convergence-rate bounds.

enum class Theorem { strongly_convex, local_strong, convex_bounded };

/// (1 - m/(L1 n))^N gap + L1^2 n mu^2 / (2m)
template <typename Scalar>
Scalar strongly_convex_bound(Scalar L1, Scalar m, Scalar n, Scalar gap, long N, Scalar mu) {
  return std::pow(Scalar(1) - m / (L1 * n), static_cast<Scalar>(N)) * gap +
         L1 * L1 * n * mu * mu / (Scalar(2) * m);
}

/// (1 - m/(4 L1 n))^N gap + 2 L1^2 n mu^2 / m
template <typename Scalar>
Scalar local_strong_bound(Scalar L1, Scalar m, Scalar n, Scalar gap, long N, Scalar mu) {
  return std::pow(Scalar(1) - m / (Scalar(4) * L1 * n), static_cast<Scalar>(N)) * gap +
         Scalar(2) * L1 * L1 * n * mu * mu / m;
}

/// Q/(N+1) + N L1 mu^2 / 2 with Q = max{2 n L1 R^2, gap}
template <typename Scalar>
Scalar convex_bounded_bound(Scalar L1, Scalar n, Scalar R2, Scalar gap, long N, Scalar mu) {
  const Scalar Q = std::max(Scalar(2) * n * L1 * R2, gap);
  return Q / static_cast<Scalar>(N + 1) + static_cast<Scalar>(N) * L1 * mu * mu / Scalar(2);
}

/// Iteration count minimising the convex bound, sqrt(2Q/(L1 mu^2)).
template <typename Scalar>
Scalar optimal_iterations(Scalar Q, Scalar L1, Scalar mu) {
  return std::sqrt(Scalar(2) * Q / (L1 * mu * mu));
}

/// Evaluates the chosen bound for `spec`. Throws std::invalid_argument on an
/// inapplicable pairing (strong bounds need m > 0, the convex bound a convex
/// objective). `R2` overrides spec.R2 for the convex bound.
double theorem_bound(Theorem which, const ObjectiveSpec& spec, double f0_gap, long N, double mu,
                     std::optional<double> R2 = std::nullopt);

// ---------------------------------------------------------------------------
// Sequence recurrence f_{t+1} = (1 - theta/t) f_t + C theta^2/t^2 + D.

struct RecurrenceParams {
  double theta = 2.0;
  double C = 1.0;
  double D = 0.0;
  double f1 = 0.0;
};

struct RecurrenceReport {
  bool passed = true;
  long t_checked = 0;
  double Q = 0.0;
  // First violation, when any.
  long violation_t = 0;
  double violation_value = 0.0;
  double violation_bound = 0.0;
  double worst_ratio = 0.0;  // max_t f_t / bound_t over positive bounds
};

/// Q(theta) = max{theta^2 C/(theta-1), f1}
double recurrence_Q(const RecurrenceParams& p);
/// Q(theta)/t + (t-1) D
double recurrence_bound(const RecurrenceParams& p, long t);

/// Iterates the raw recurrence (no clamping) from f1 and checks
/// f_t <= Q/t + (t-1) D for t = 1..t_max, with a 1e-12 relative slack for
/// cells where the bound is attained exactly.
RecurrenceReport check_recurrence(const RecurrenceParams& params, long t_max);

}  // namespace rpursuit::theory

#endif  // RPURSUIT_THEORY_HPP
