#include "rpursuit/solvers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rpursuit {

namespace {

// Appends one iterate to the trace and tracks first crossings of the
// accuracy ladder. Monitoring evaluations bypass the FES counter.
class Recorder {
 public:
  Recorder(const ObjectiveSpec& spec, const SolverConfig& cfg, RunTrace& trace)
      : spec_(spec), cfg_(cfg), trace_(trace) {
    trace_.algorithm = cfg.algorithm;
    trace_.thresholds.reserve(cfg.ladder.size());
    for (double acc : cfg.ladder) trace_.thresholds.push_back({acc, false, 0, 0});
  }

  /// Returns true when the run should stop.
  bool record(long k, const Vector& x, std::uint64_t fes) { return record(k, x, fes, spec_.eval(x)); }

  bool record(long k, const Vector& x, std::uint64_t fes, double value) {
    trace_.values.push_back(value);
    trace_.fes_history.push_back(fes);
    if (cfg_.store_iterates) trace_.iterates.push_back(x);
    trace_.iterations = k;
    trace_.fes = fes;
    const double gap = value - spec_.f_star;
    for (auto& t : trace_.thresholds) {
      if (!t.converged && gap <= t.accuracy * spec_.S) {
        t.converged = true;
        t.its = k;
        t.fes = fes;
      }
    }
    return cfg_.stop_at_target && !trace_.thresholds.empty() && trace_.thresholds.back().converged;
  }

  void finish(const Vector& x) { trace_.x_final = x; }

 private:
  const ObjectiveSpec& spec_;
  const SolverConfig& cfg_;
  RunTrace& trace_;
};

void abort_run(RunTrace& trace, const std::exception& e) {
  trace.aborted = true;
  trace.diagnostic = e.what();
}

double n_of(const ObjectiveSpec& spec) { return static_cast<double>(spec.dim); }

}  // namespace

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "rp") return Algorithm::rp;
  if (name == "arp") return Algorithm::arp;
  if (name == "rg") return Algorithm::rg;
  if (name == "fg") return Algorithm::fg;
  if (name == "es") return Algorithm::es;
  if (name == "gm") return Algorithm::gm;
  if (name == "gm-ls" || name == "gm_ls") return Algorithm::gm_ls;
  return std::nullopt;
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::rp: return "rp";
    case Algorithm::arp: return "arp";
    case Algorithm::rg: return "rg";
    case Algorithm::fg: return "fg";
    case Algorithm::es: return "es";
    case Algorithm::gm: return "gm";
    case Algorithm::gm_ls: return "gm-ls";
  }
  return "unknown";
}

bool is_randomized(Algorithm a) { return a != Algorithm::gm && a != Algorithm::gm_ls; }

void SolverConfig::validate(const ObjectiveSpec& spec) const {
  if (max_iters < 1) throw std::invalid_argument("solver: N must be >= 1");
  if (!(mu >= 0.0)) throw std::invalid_argument("solver: mu must be >= 0");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("solver: p must lie in (0, 1)");
  if (x0.size() != spec.dim) throw std::invalid_argument("solver: x0 dimension mismatch");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0)) throw std::invalid_argument("solver: ladder entries must be positive");
    if (i > 0 && !(ladder[i] < ladder[i - 1])) {
      throw std::invalid_argument("solver: ladder must be strictly decreasing");
    }
  }
}

ArpState arp_coefficients(double theta, double gamma, double m) {
  if (!(theta > 0.0) || !(gamma > 0.0) || !(m >= 0.0)) {
    throw std::invalid_argument("arp_coefficients: need theta > 0, gamma > 0, m >= 0");
  }
  // theta^{-1} beta^2 + (gamma - m) beta - gamma = 0 has exactly one positive root.
  const double a = 1.0 / theta;
  const double b = gamma - m;
  const double disc = std::sqrt(b * b + 4.0 * a * gamma);
  const double beta = b >= 0.0 ? 2.0 * gamma / (b + disc) : (-b + disc) / (2.0 * a);
  if (!(beta > 0.0)) throw std::logic_error("arp_coefficients: no positive root");
  ArpState s;
  s.theta = theta;
  s.gamma = gamma;
  s.beta = beta;
  s.gamma_next = (1.0 - beta) * gamma + beta * m;
  s.lambda = beta * m / s.gamma_next;
  s.delta = beta * gamma / (gamma + beta * m);
  return s;
}

EsFactors es_factors(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("es_factors: p must lie in (0, 1)");
  const double c_s = std::exp(1.0 / 3.0);
  return {c_s, c_s * std::exp(-p / (1.0 - p))};
}

RunTrace run_rp(const ObjectiveSpec& spec, const SolverConfig& cfg, const LineSearchConfig& ls) {
  cfg.validate(spec);
  ls.validate();
  if (cfg.sampler == SamplerKind::gaussian) {
    throw std::invalid_argument("run_rp: directions must be unit vectors (sphere or discrete)");
  }
  RunTrace trace;
  Recorder rec(spec, cfg, trace);
  FesCounter fes;
  DirectionSampler sampler(cfg.sampler, spec.dim, cfg.seed);
  Vector x = cfg.x0;
  Vector u(spec.dim);
  if (!rec.record(0, x, 0)) {
    for (long k = 0; k < cfg.max_iters; ++k) {
      sampler.sample(u);
      try {
        x += line_search(spec, x, u, ls, fes).h * u;
      } catch (const LineSearchError& e) {
        abort_run(trace, e);
        break;
      }
      if (rec.record(k + 1, x, fes.count())) break;
    }
  }
  rec.finish(x);
  return trace;
}

RunTrace run_arp(const ObjectiveSpec& spec, const SolverConfig& cfg, const LineSearchConfig& ls) {
  cfg.validate(spec);
  ls.validate();
  if (!(spec.m > 0.0) || !(spec.L1 > 0.0)) {
    throw std::invalid_argument("run_arp: needs m > 0 and L1 > 0");
  }
  if (cfg.sampler == SamplerKind::gaussian) {
    throw std::invalid_argument("run_arp: directions must be unit vectors (sphere or discrete)");
  }
  const double n = n_of(spec);
  const double theta = 1.0 / (spec.L1 * n * n);
  double gamma = spec.m;  // smallest admissible gamma_0 >= m

  RunTrace trace;
  Recorder rec(spec, cfg, trace);
  FesCounter fes;
  DirectionSampler sampler(cfg.sampler, spec.dim, cfg.seed);
  Vector x = cfg.x0;
  Vector v = cfg.x0;
  Vector y(spec.dim);
  Vector u(spec.dim);
  if (!rec.record(0, x, 0)) {
    for (long k = 0; k < cfg.max_iters; ++k) {
      const ArpState st = arp_coefficients(theta, gamma, spec.m);
      y = (1.0 - st.delta) * x + st.delta * v;
      sampler.sample(u);
      double h = 0.0;
      try {
        h = line_search(spec, y, u, ls, fes).h;
      } catch (const LineSearchError& e) {
        abort_run(trace, e);
        break;
      }
      x = y + h * u;
      v = (1.0 - st.lambda) * v + st.lambda * y + (h / (st.beta * n)) * u;
      gamma = st.gamma_next;
      if (rec.record(k + 1, x, fes.count())) break;
    }
  }
  rec.finish(x);
  return trace;
}

RunTrace run_rg(const ObjectiveSpec& spec, const SolverConfig& cfg) {
  cfg.validate(spec);
  if (!(cfg.mu > 0.0)) throw std::invalid_argument("run_rg: mu must be > 0");
  if (!(spec.L1 > 0.0)) throw std::invalid_argument("run_rg: needs L1 > 0");
  const double step = 1.0 / (4.0 * (n_of(spec) + 4.0) * spec.L1);

  RunTrace trace;
  Recorder rec(spec, cfg, trace);
  FesCounter fes;
  DirectionSampler sampler(cfg.rg_dirs, spec.dim, cfg.seed);
  Vector x = cfg.x0;
  Vector u(spec.dim);
  Vector probe(spec.dim);
  if (!rec.record(0, x, 0)) {
    for (long k = 0; k < cfg.max_iters; ++k) {
      sampler.sample(u);
      probe.noalias() = x + cfg.mu * u;
      const double slope = (eval_counted(spec, probe, fes) - eval_counted(spec, x, fes)) / cfg.mu;
      x -= (step * slope) * u;
      if (rec.record(k + 1, x, fes.count())) break;
    }
  }
  rec.finish(x);
  return trace;
}

RunTrace run_fg(const ObjectiveSpec& spec, const SolverConfig& cfg) {
  cfg.validate(spec);
  if (!(cfg.mu > 0.0)) throw std::invalid_argument("run_fg: mu must be > 0");
  if (!(spec.m > 0.0) || !(spec.L1 > 0.0)) throw std::invalid_argument("run_fg: needs m > 0 and L1 > 0");
  const double n = n_of(spec);
  const double step = 1.0 / (4.0 * (n + 4.0) * spec.L1);
  const double theta = step / n;
  double gamma = spec.m;

  RunTrace trace;
  Recorder rec(spec, cfg, trace);
  FesCounter fes;
  DirectionSampler sampler(cfg.rg_dirs, spec.dim, cfg.seed);
  Vector x = cfg.x0;
  Vector v = cfg.x0;
  Vector y(spec.dim);
  Vector u(spec.dim);
  Vector probe(spec.dim);
  if (!rec.record(0, x, 0)) {
    for (long k = 0; k < cfg.max_iters; ++k) {
      const ArpState st = arp_coefficients(theta, gamma, spec.m);
      y = (1.0 - st.delta) * x + st.delta * v;
      sampler.sample(u);
      probe.noalias() = y + cfg.mu * u;
      const double slope = (eval_counted(spec, probe, fes) - eval_counted(spec, y, fes)) / cfg.mu;
      const double t = -step * slope;
      x = y + t * u;
      v = (1.0 - st.lambda) * v + st.lambda * y + (t / (st.beta * n)) * u;
      gamma = st.gamma_next;
      if (rec.record(k + 1, x, fes.count())) break;
    }
  }
  rec.finish(x);
  return trace;
}

RunTrace run_es(const ObjectiveSpec& spec, const SolverConfig& cfg) {
  cfg.validate(spec);
  if (!(cfg.sigma0 > 0.0)) throw std::invalid_argument("run_es: sigma0 must be > 0");
  const EsFactors c = es_factors(cfg.p);

  RunTrace trace;
  Recorder rec(spec, cfg, trace);
  FesCounter fes;
  DirectionSampler sampler(SamplerKind::gaussian, spec.dim, cfg.seed);
  Vector x = cfg.x0;
  Vector u(spec.dim);
  Vector trial(spec.dim);
  double sigma = cfg.sigma0;
  // f(x0) is treated as known input, so FES equals ITS exactly.
  double fx = spec.eval(x);
  if (!rec.record(0, x, 0, fx)) {
    for (long k = 0; k < cfg.max_iters; ++k) {
      sampler.sample(u);
      trial.noalias() = x + sigma * u;
      const double ft = eval_counted(spec, trial, fes);
      if (ft <= fx) {
        x = trial;
        fx = ft;
        sigma *= c.c_s;
      } else {
        sigma *= c.c_f;
      }
      if (rec.record(k + 1, x, fes.count(), fx)) break;
    }
  }
  rec.finish(x);
  return trace;
}

RunTrace run_gm(const ObjectiveSpec& spec, const SolverConfig& cfg) {
  cfg.validate(spec);
  if (!spec.has_gradient()) throw std::invalid_argument("run_gm: gradient unavailable");
  if (!(spec.L1 > 0.0)) throw std::invalid_argument("run_gm: needs L1 > 0");
  RunTrace trace;
  Recorder rec(spec, cfg, trace);
  Vector x = cfg.x0;
  if (!rec.record(0, x, 0)) {
    for (long k = 0; k < cfg.max_iters; ++k) {
      x -= spec.grad(x) / spec.L1;
      if (rec.record(k + 1, x, 0)) break;
    }
  }
  rec.finish(x);
  return trace;
}

RunTrace run_gm_ls(const ObjectiveSpec& spec, const SolverConfig& cfg, const LineSearchConfig& ls) {
  cfg.validate(spec);
  ls.validate();
  if (!spec.has_gradient()) throw std::invalid_argument("run_gm_ls: gradient unavailable");
  RunTrace trace;
  Recorder rec(spec, cfg, trace);
  FesCounter fes;
  Vector x = cfg.x0;
  Vector d(spec.dim);
  if (!rec.record(0, x, 0)) {
    for (long k = 0; k < cfg.max_iters; ++k) {
      d = spec.grad(x);
      const double gnorm = d.norm();
      if (gnorm == 0.0) break;  // stationary: at the optimum
      d /= -gnorm;
      try {
        x += line_search(spec, x, d, ls, fes).h * d;
      } catch (const LineSearchError& e) {
        abort_run(trace, e);
        break;
      }
      if (rec.record(k + 1, x, fes.count())) break;
    }
  }
  rec.finish(x);
  return trace;
}

RunTrace run_solver(const ObjectiveSpec& spec, const SolverConfig& cfg, const LineSearchConfig& ls) {
  switch (cfg.algorithm) {
    case Algorithm::rp: return run_rp(spec, cfg, ls);
    case Algorithm::arp: return run_arp(spec, cfg, ls);
    case Algorithm::rg: return run_rg(spec, cfg);
    case Algorithm::fg: return run_fg(spec, cfg);
    case Algorithm::es: return run_es(spec, cfg);
    case Algorithm::gm: return run_gm(spec, cfg);
    case Algorithm::gm_ls: return run_gm_ls(spec, cfg, ls);
  }
  throw std::invalid_argument("run_solver: unknown algorithm");
}

double es_success_probability(const ObjectiveSpec& spec, const Vector& x0, double sigma,
                              int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("es_success_probability: trials must be >= 1");
  DirectionSampler sampler(SamplerKind::gaussian, spec.dim, seed);
  const double f0 = spec.eval(x0);
  Vector u(spec.dim);
  Vector trial(spec.dim);
  long hits = 0;
  for (int i = 0; i < trials; ++i) {
    sampler.sample(u);
    trial.noalias() = x0 + sigma * u;
    if (spec.eval(trial) <= f0) ++hits;
  }
  return static_cast<double>(hits) / trials;
}

double calibrate_sigma0(const ObjectiveSpec& spec, const Vector& x0, double p, int trials,
                        std::uint64_t seed) {
  if (trials < 1000) throw std::invalid_argument("calibrate_sigma0: need at least 1000 trials");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("calibrate_sigma0: p must lie in (0, 1)");
  if (x0.size() != spec.dim) throw std::invalid_argument("calibrate_sigma0: x0 dimension mismatch");
  // The same seed for every sigma gives common random numbers, so the
  // empirical success curve is monotone on quadratics and their transforms.
  auto success = [&](double sigma) { return es_success_probability(spec, x0, sigma, trials, seed); };

  double hi = 1.0;
  int guard = 0;
  while (success(hi) >= p) {
    hi *= 2.0;
    if (++guard > 200) throw std::runtime_error("calibrate_sigma0: success rate never drops below p");
  }
  double lo = hi / 2.0;
  guard = 0;
  while (success(lo) < p) {
    lo /= 2.0;
    if (++guard > 200) throw std::runtime_error("calibrate_sigma0: success rate never reaches p");
  }
  for (int it = 0; it < 60 && hi / lo > 1.0 + 1e-9; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (success(mid) >= p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

}  // namespace rpursuit
