#include "rpursuit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "parallel.hpp"
#include "rpursuit/solvers.hpp"

namespace rpursuit::theory {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

Vector random_point(const ObjectiveSpec& spec, Rng& rng) {
  Vector x(spec.dim);
  for (Index i = 0; i < spec.dim; ++i) x(i) = spec.x_star(i) + rng.normal();
  return x;
}

template <typename Check>
StepSweep sweep(const ObjectiveSpec& spec, int points, std::uint64_t seed, unsigned threads, Check check) {
  if (points < 1) throw std::invalid_argument("step sweep: need at least one point");
  std::vector<Vector> xs;
  Rng rng(mix_seed(seed));
  for (int i = 0; i < points; ++i) xs.push_back(random_point(spec, rng));
  std::vector<SingleStepReport> reports(points);
  detail::parallel_for(points, threads, [&](std::size_t i) {
    reports[i] = check(xs[i], mix_seed(seed + 1 + i));
  });
  StepSweep out;
  out.points = points;
  out.worst_margin = -std::numeric_limits<double>::infinity();
  for (const auto& r : reports) {
    out.worst_margin = std::max(out.worst_margin, r.margin_sigma());
    if (!r.passes()) ++out.failures;
  }
  return out;
}

CheckResult moments_row(const std::string& name, const MomentCheckReport& r) {
  std::string detail = r.exact ? fmt("exact, second moment %.15g vs %.15g", r.estimator_second, r.target_second)
                               : fmt("worst deviation %.2f sigma over %.0f trials", r.worst_sigma(),
                                     static_cast<double>(r.trials));
  return {name, r.passes(), detail};
}

CheckResult sandwich_row(const ObjectiveSpec& spec, int points, std::uint64_t seed) {
  Rng rng(seed);
  int bad = 0;
  for (int i = 0; i < points; ++i) {
    Vector x(spec.dim);
    for (Index j = 0; j < spec.dim; ++j) x(j) = spec.x_star(j) + 2.0 * rng.normal();
    const double gap = spec.eval(x) - spec.f_star;
    const double lower = 0.5 * spec.m * (x - spec.x_star).squaredNorm();
    const double upper = spec.grad(x).squaredNorm() / (2.0 * spec.m);
    const double tol = 1e-9 * std::max(1.0, std::abs(gap));
    if (lower > gap + tol || gap > upper + tol) ++bad;
  }
  return {"growth sandwich on " + spec.name, bad == 0,
          fmt("%.0f of %.0f points outside", bad, points)};
}

}  // namespace

RateExperiment sphere_rate_experiment(Index n, long N, double mu, int seeds, std::uint64_t base_seed,
                                      unsigned threads) {
  if (seeds < 2 || N < 1) throw std::invalid_argument("sphere_rate_experiment: need seeds >= 2, N >= 1");
  const ObjectiveSpec spec = make_benchmark(Benchmark::sphere, n, 1.0, 1.0);
  LineSearchConfig ls;
  ls.mu = mu;
  std::vector<std::vector<double>> gaps(seeds);
  detail::parallel_for(seeds, threads, [&](std::size_t s) {
    SolverConfig cfg;
    cfg.algorithm = Algorithm::rp;
    cfg.x0 = Vector::Zero(n);
    cfg.max_iters = N;
    cfg.mu = mu;
    cfg.seed = base_seed + s;
    cfg.stop_at_target = false;
    RunTrace t = run_rp(spec, cfg, ls);
    for (double& v : t.values) v -= spec.f_star;
    gaps[s] = std::move(t.values);
  });

  RateExperiment out;
  out.mean_gap.assign(N + 1, 0.0);
  out.gap_stderr.assign(N + 1, 0.0);
  for (long k = 0; k <= N; ++k) {
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& g : gaps) {
      sum += g[k];
      sum_sq += g[k] * g[k];
    }
    const double mean = sum / seeds;
    const double var = std::max(0.0, (sum_sq - seeds * mean * mean) / (seeds - 1));
    out.mean_gap[k] = mean;
    out.gap_stderr[k] = std::sqrt(var / seeds);
  }
  out.bound = strongly_convex_bound(1.0, 1.0, static_cast<double>(n), 0.5 * static_cast<double>(n), N, mu);

  double sk = 0.0, sy = 0.0, skk = 0.0, sky = 0.0;
  for (long k = 0; k <= N; ++k) {
    const double y = std::log(out.mean_gap[k]);
    sk += k;
    sy += y;
    skk += static_cast<double>(k) * k;
    sky += k * y;
  }
  const double cnt = static_cast<double>(N + 1);
  out.fitted_log_decay = (cnt * sky - sk * sy) / (cnt * skk - sk * sk);
  return out;
}

StepSweep sweep_gradient_bound(const ObjectiveSpec& spec, double mu, int points, long trials,
                               std::uint64_t seed, unsigned threads) {
  LineSearchConfig ls;
  ls.mu = mu;
  return sweep(spec, points, seed, threads, [&](const Vector& x, std::uint64_t s) {
    return check_single_step_gradient(spec, x, 1.0 / spec.L1, ls, trials, s);
  });
}

StepSweep sweep_relative_bound(const ObjectiveSpec& spec, double mu, int points, long trials,
                               std::uint64_t seed, unsigned threads) {
  LineSearchConfig ls;
  ls.mode = LineSearchMode::relative;
  ls.mu = mu;
  return sweep(spec, points, seed, threads, [&](const Vector& x, std::uint64_t s) {
    const Vector d = spec.x_star - x;
    double h = -spec.grad(x).dot(d) / (spec.L1 * d.squaredNorm());
    if (!(h > 0.0)) h = 1.0 / spec.L1;
    return check_single_step(spec, x, h, spec.x_star, ls, trials, s);
  });
}

std::vector<CheckResult> run_verification_suite(const VerifyOptions& opts) {
  std::vector<CheckResult> rows;
  std::uint64_t seed = opts.seed;

  {
    Vector x(2);
    x << 3.0, 4.0;
    rows.push_back(moments_row("signed-unit moments, x = (3, 4)", enumerate_signed_unit_moments(x)));
  }
  for (Index n : {Index(2), Index(10)}) {
    Rng rng(mix_seed(seed + n));
    Vector x(n);
    for (Index i = 0; i < n; ++i) x(i) = rng.normal();
    const std::string suffix = ", n = " + std::to_string(n);
    rows.push_back(moments_row("signed-unit moments" + suffix, enumerate_signed_unit_moments(x)));
    rows.push_back(moments_row("sphere moments" + suffix,
                               check_moments(SamplerKind::unit_sphere, x, opts.moment_trials, seed + 10 + n)));
    rows.push_back(moments_row("gaussian moments" + suffix,
                               check_moments(SamplerKind::gaussian, x, opts.moment_trials, seed + 20 + n)));
  }
  {
    const ScalarNormalMoments nm = normal_moments(opts.moment_trials, seed + 30);
    const double worst = std::max({std::abs(nm.m1) / nm.se1, std::abs(nm.m2 - 1.0) / nm.se2,
                                   std::abs(nm.m3) / nm.se3, std::abs(nm.m4 - 3.0) / nm.se4});
    rows.push_back({"scalar normal moments 1..4", worst <= kSigmaMargin,
                    fmt("E[v^4] = %.4f, worst deviation %.2f sigma", nm.m4, worst)});
  }

  for (Benchmark b : {Benchmark::sphere, Benchmark::ellipsoid, Benchmark::nesterov_strong}) {
    rows.push_back(sandwich_row(make_protocol_benchmark(b, 16), 1000, seed + 40));
  }

  for (Benchmark b : {Benchmark::sphere, Benchmark::ellipsoid}) {
    for (Index n : {Index(4), Index(8), Index(16)}) {
      const ObjectiveSpec spec = make_protocol_benchmark(b, n);
      const std::string where = spec.name + ", n = " + std::to_string(n);
      const StepSweep g = sweep_gradient_bound(spec, 1e-5, opts.step_points, opts.step_trials, seed + 50 + n, opts.threads);
      rows.push_back({"gradient-form step bound, " + where, g.failures == 0,
                      fmt("worst margin %+.2f sigma, %.0f failures", g.worst_margin, g.failures)});
      const StepSweep r = sweep_relative_bound(spec, 0.1, opts.step_points, opts.step_trials, seed + 60 + n, opts.threads);
      rows.push_back({"relative-error step bound, " + where, r.failures == 0,
                      fmt("worst margin %+.2f sigma, %.0f failures", r.worst_margin, r.failures)});
    }
  }

  {
    const RateExperiment e = sphere_rate_experiment(16, 320, 1e-9, opts.rp_seeds, seed + 70, opts.threads);
    const double rel = e.gap_stderr.back() / e.mean_gap.back();
    const bool below = e.mean_gap.back() <= e.bound * (1.0 + kSigmaMargin * rel);
    rows.push_back({"strongly convex rate bound, sphere n = 16", below,
                    fmt("mean gap %.4g vs bound %.4g (relative stderr %.3f)", e.mean_gap.back(), e.bound, rel)});
    const double expected = std::log(1.0 - 1.0 / 16.0);
    const bool slope_ok = std::abs(e.fitted_log_decay - expected) <= 0.1 * std::abs(expected);
    rows.push_back({"per-step log decay, sphere n = 16", slope_ok,
                    fmt("fitted %.5f vs %.5f", e.fitted_log_decay, expected)});
  }

  {
    int bad = 0, cells = 0;
    for (double mu : {1e-2, 1e-4, 1e-6}) {
      for (double Q : {1.0, 1e2, 1e4}) {
        for (double L1 : {1.0, 1e3}) {
          ++cells;
          const double N_opt = optimal_iterations(Q, L1, mu);
          auto bound = [&](double N) { return Q / (N + 1.0) + N * L1 * mu * mu / 2.0; };
          const double at_opt = bound(N_opt);
          const double stationary = std::max(0.0, N_opt - 1.0);  // minimiser of the continuous bound
          const double lo = std::floor(stationary), hi = std::ceil(stationary);
          const double best = bound(lo) <= bound(hi) ? lo : hi;
          const bool value_ok = at_opt <= mu * std::sqrt(2.0 * Q * L1) * (1.0 + 1e-12);
          const bool min_ok = std::abs(best - N_opt) <= 2.0;
          if (!value_ok || !min_ok) ++bad;
        }
      }
    }
    rows.push_back({"optimal iteration count of the convex bound", bad == 0,
                    fmt("%.0f of %.0f grid cells violate", bad, cells)});
  }

  {
    int bad = 0, cells = 0;
    std::ostringstream first;
    for (double theta : {1.5, 2.0, 4.0}) {
      for (double C : {0.1, 1.0, 10.0}) {
        for (double D : {0.0, 1e-6}) {
          RecurrenceParams p{theta, C, D, 0.0};
          const double Q = recurrence_Q(p);
          for (double f1 : {Q, Q / 2.0, 2.0 * Q}) {
            p.f1 = f1;
            ++cells;
            const RecurrenceReport r = check_recurrence(p, 10000);
            if (!r.passed) {
              if (bad == 0) {
                first << "; first: theta=" << theta << " C=" << C << " D=" << D << " f1=" << f1 << " t="
                      << r.violation_t << " f_t=" << r.violation_value << " > " << r.violation_bound;
              }
              ++bad;
            }
          }
        }
      }
    }
    rows.push_back({"sequence recurrence bound, t <= 10^4", bad == 0,
                    fmt("%.0f of %.0f grid cells violate", bad, cells) + first.str()});
  }
  return rows;
}

void print_results(const std::vector<CheckResult>& rows, std::ostream& os) {
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  for (const auto& r : rows) {
    os << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width)) << r.name << "  "
       << r.detail << '\n';
  }
}

}  // namespace rpursuit::theory
