#include "rpursuit/theory.hpp"

#include <limits>
#include <stdexcept>

namespace rpursuit::theory {

namespace {

double sigma_distance(double value, double target, double se) {
  const double diff = std::abs(value - target);
  if (diff == 0.0) return 0.0;
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  return diff / se;
}

// Running mean / standard error of a scalar sample.
struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  long count = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  double mean() const { return sum / static_cast<double>(count); }
  double stderr_of_mean() const {
    const double n = static_cast<double>(count);
    const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    return std::sqrt(var / n);
  }
};

SingleStepReport estimate_next_value(const ObjectiveSpec& spec, const Vector& x_k,
                                     const LineSearchConfig& ls, long trials, std::uint64_t seed) {
  if (trials < 2) throw std::invalid_argument("single-step check: trials must be >= 2");
  if (x_k.size() != spec.dim) throw std::invalid_argument("single-step check: dimension mismatch");
  DirectionSampler sampler(SamplerKind::unit_sphere, spec.dim, seed);
  FesCounter fes;
  Vector u(spec.dim);
  Vector next(spec.dim);
  Accumulator acc;
  for (long t = 0; t < trials; ++t) {
    sampler.sample(u);
    const double h = line_search(spec, x_k, u, ls, fes).h;
    next.noalias() = x_k + h * u;
    acc.add(spec.eval(next));
  }
  SingleStepReport r;
  r.empirical_mean = acc.mean();
  r.stderr_ = acc.stderr_of_mean();
  r.trials = trials;
  return r;
}

}  // namespace

double MomentCheckReport::worst_sigma() const {
  if (exact) return 0.0;
  double worst = sigma_distance(estimator_second, target_second, mc_stderr);
  for (Index i = 0; i < estimator_mean.size(); ++i) {
    worst = std::max(worst, sigma_distance(estimator_mean(i), target_mean(i), mean_stderr(i)));
  }
  return worst;
}

bool MomentCheckReport::passes(double k_sigma, double exact_tol) const {
  if (exact) {
    if (std::abs(estimator_second - target_second) > exact_tol * std::max(1.0, std::abs(target_second))) {
      return false;
    }
    for (Index i = 0; i < estimator_mean.size(); ++i) {
      if (std::abs(estimator_mean(i) - target_mean(i)) > exact_tol * std::max(1.0, std::abs(target_mean(i)))) {
        return false;
      }
    }
    return true;
  }
  return worst_sigma() <= k_sigma;
}

Vector target_mean(SamplerKind kind, const Vector& x) {
  if (kind == SamplerKind::gaussian) return x;
  return x / static_cast<double>(x.size());
}

double target_second_moment(SamplerKind kind, const Vector& x) {
  const double n = static_cast<double>(x.size());
  if (kind == SamplerKind::gaussian) return (n + 2.0) * x.squaredNorm();
  return x.squaredNorm() / n;
}

MomentCheckReport check_moments(SamplerKind kind, const Vector& x, long trials, std::uint64_t seed) {
  if (trials < 10000) throw std::invalid_argument("check_moments: need at least 10^4 trials");
  if (x.size() < 1 || x.squaredNorm() == 0.0) throw std::invalid_argument("check_moments: x must be nonzero");
  const Index n = x.size();
  DirectionSampler sampler(kind, n, seed);
  Vector u(n);
  Vector sum = Vector::Zero(n);
  Vector sum_sq = Vector::Zero(n);
  Accumulator second;
  for (long t = 0; t < trials; ++t) {
    sampler.sample(u);
    const double s = x.dot(u);
    sum += s * u;
    sum_sq += (s * u).cwiseAbs2();
    second.add(s * s * u.squaredNorm());
  }
  const double T = static_cast<double>(trials);
  MomentCheckReport r;
  r.estimator_mean = sum / T;
  r.mean_stderr = ((sum_sq - sum.cwiseAbs2() / T) / (T - 1.0)).cwiseMax(0.0).cwiseSqrt() / std::sqrt(T);
  r.estimator_second = second.mean();
  r.mc_stderr = second.stderr_of_mean();
  r.target_mean = target_mean(kind, x);
  r.target_second = target_second_moment(kind, x);
  r.trials = trials;
  return r;
}

MomentCheckReport enumerate_signed_unit_moments(const Vector& x) {
  const Index n = x.size();
  if (n < 1) throw std::invalid_argument("enumerate_signed_unit_moments: empty vector");
  Vector mean = Vector::Zero(n);
  double second = 0.0;
  Vector u = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      u.setZero();
      u(i) = sign;
      const double s = x.dot(u);
      mean += s * u;
      second += (s * u).squaredNorm();
    }
  }
  const double atoms = 2.0 * static_cast<double>(n);
  MomentCheckReport r;
  r.estimator_mean = mean / atoms;
  r.estimator_second = second / atoms;
  r.target_mean = target_mean(SamplerKind::signed_unit, x);
  r.target_second = target_second_moment(SamplerKind::signed_unit, x);
  r.mean_stderr = Vector::Zero(n);
  r.trials = static_cast<long>(atoms);
  r.exact = true;
  return r;
}

ScalarNormalMoments normal_moments(long trials, std::uint64_t seed) {
  if (trials < 10000) throw std::invalid_argument("normal_moments: need at least 10^4 trials");
  Rng rng(seed);
  Accumulator a1, a2, a3, a4;
  for (long t = 0; t < trials; ++t) {
    const double v = rng.normal();
    const double v2 = v * v;
    a1.add(v);
    a2.add(v2);
    a3.add(v2 * v);
    a4.add(v2 * v2);
  }
  return {a1.mean(),           a2.mean(),           a3.mean(),           a4.mean(),
          a1.stderr_of_mean(), a2.stderr_of_mean(), a3.stderr_of_mean(), a4.stderr_of_mean(),
          trials};
}

double SingleStepReport::margin_sigma() const {
  if (stderr_ == 0.0) {
    return empirical_mean <= bound ? -std::numeric_limits<double>::infinity()
                                   : std::numeric_limits<double>::infinity();
  }
  return (empirical_mean - bound) / stderr_;
}

bool SingleStepReport::passes(double k_sigma) const { return margin_sigma() <= k_sigma; }

double one_step_bound_absolute(const ObjectiveSpec& spec, const Vector& x, double h,
                               const Vector& z, double mu) {
  if (!spec.has_gradient()) throw std::invalid_argument("one-step bound: gradient unavailable");
  const double n = static_cast<double>(spec.dim);
  const Vector d = z - x;
  return spec.eval(x) + (h / n) * spec.grad(x).dot(d) + spec.L1 * h * h / (2.0 * n) * d.squaredNorm() +
         0.5 * spec.L1 * mu * mu;
}

double one_step_bound_relative(const ObjectiveSpec& spec, const Vector& x, double h,
                               const Vector& z, double mu) {
  if (!spec.has_gradient()) throw std::invalid_argument("one-step bound: gradient unavailable");
  if (!(mu >= 0.0 && mu < 1.0)) throw std::invalid_argument("one-step bound: relative mu must lie in [0, 1)");
  const double n_eff = static_cast<double>(spec.dim) / (1.0 - mu);
  const Vector d = z - x;
  return spec.eval(x) + (h / n_eff) * spec.grad(x).dot(d) + spec.L1 * h * h / (2.0 * n_eff) * d.squaredNorm();
}

double one_step_bound_gradient(const ObjectiveSpec& spec, const Vector& x, double h, double mu) {
  if (!spec.has_gradient()) throw std::invalid_argument("one-step bound: gradient unavailable");
  if (!(h > 0.0) || h > 1.0 / spec.L1) throw std::invalid_argument("one-step bound: need 0 < h <= 1/L1");
  const double n = static_cast<double>(spec.dim);
  return spec.eval(x) - h / (2.0 * n) * spec.grad(x).squaredNorm() + 0.5 * spec.L1 * mu * mu;
}

SingleStepReport check_single_step(const ObjectiveSpec& spec, const Vector& x_k, double h,
                                   const Vector& z, const LineSearchConfig& ls, long trials,
                                   std::uint64_t seed) {
  if (!(h > 0.0)) throw std::invalid_argument("check_single_step: h must be positive");
  SingleStepReport r = estimate_next_value(spec, x_k, ls, trials, seed);
  r.bound = ls.mode == LineSearchMode::absolute ? one_step_bound_absolute(spec, x_k, h, z, ls.mu)
                                                : one_step_bound_relative(spec, x_k, h, z, ls.mu);
  return r;
}

SingleStepReport check_single_step_gradient(const ObjectiveSpec& spec, const Vector& x_k,
                                            double h, const LineSearchConfig& ls, long trials,
                                            std::uint64_t seed) {
  if (ls.mode != LineSearchMode::absolute) {
    throw std::invalid_argument("check_single_step_gradient: gradient form is stated for absolute error");
  }
  const double bound = one_step_bound_gradient(spec, x_k, h, ls.mu);
  SingleStepReport r = estimate_next_value(spec, x_k, ls, trials, seed);
  r.bound = bound;
  return r;
}

double theorem_bound(Theorem which, const ObjectiveSpec& spec, double f0_gap, long N, double mu,
                     std::optional<double> R2) {
  if (N < 0) throw std::invalid_argument("theorem_bound: N must be >= 0");
  if (!(f0_gap >= 0.0)) throw std::invalid_argument("theorem_bound: initial gap must be >= 0");
  const double n = static_cast<double>(spec.dim);
  switch (which) {
    case Theorem::strongly_convex:
      if (!spec.convex || !(spec.m > 0.0)) {
        throw std::invalid_argument("theorem_bound: strong-convexity bound needs a convex objective with m > 0");
      }
      return strongly_convex_bound(spec.L1, spec.m, n, f0_gap, N, mu);
    case Theorem::local_strong:
      if (!(spec.m > 0.0)) throw std::invalid_argument("theorem_bound: quadratic-growth bound needs m > 0");
      return local_strong_bound(spec.L1, spec.m, n, f0_gap, N, mu);
    case Theorem::convex_bounded:
      if (!spec.convex) throw std::invalid_argument("theorem_bound: convex bound needs a convex objective");
      return convex_bounded_bound(spec.L1, n, R2.value_or(spec.R2), f0_gap, N, mu);
  }
  throw std::invalid_argument("theorem_bound: unknown theorem");
}

double recurrence_Q(const RecurrenceParams& p) {
  return std::max(p.theta * p.theta * p.C / (p.theta - 1.0), p.f1);
}

double recurrence_bound(const RecurrenceParams& p, long t) {
  return recurrence_Q(p) / static_cast<double>(t) + static_cast<double>(t - 1) * p.D;
}

RecurrenceReport check_recurrence(const RecurrenceParams& params, long t_max) {
  if (!(params.theta > 1.0) || !(params.C > 0.0) || !(params.D >= 0.0) || !(params.f1 >= 0.0)) {
    throw std::invalid_argument("check_recurrence: need theta > 1, C > 0, D >= 0, f1 >= 0");
  }
  if (t_max < 1) throw std::invalid_argument("check_recurrence: t_max must be >= 1");
  RecurrenceReport r;
  r.Q = recurrence_Q(params);
  double f = params.f1;
  for (long t = 1; t <= t_max; ++t) {
    if (t > 1) {
      const double prev_t = static_cast<double>(t - 1);
      f = (1.0 - params.theta / prev_t) * f + params.C * params.theta * params.theta / (prev_t * prev_t) + params.D;
    }
    const double bound = recurrence_bound(params, t);
    if (bound > 0.0) r.worst_ratio = std::max(r.worst_ratio, f / bound);
    if (r.passed && f > bound + 1e-12 * std::abs(bound)) {
      r.passed = false;
      r.violation_t = t;
      r.violation_value = f;
      r.violation_bound = bound;
    }
    r.t_checked = t;
  }
  return r;
}

}  // namespace rpursuit::theory
