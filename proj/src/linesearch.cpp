#include "rpursuit/linesearch.hpp"

#include <cmath>

namespace rpursuit {

namespace {

constexpr double kGolden = 0.3819660112501051;  // (3 - sqrt(5)) / 2
constexpr double kZeroFloor = 1e-12;
constexpr int kMaxShrinkSteps = 400;

struct Probe {
  double h;
  double v;
};

// Strictly lower value wins; equal values go to the smaller |h|.
bool better(const Probe& a, const Probe& b) {
  return a.v < b.v || (a.v == b.v && std::abs(a.h) < std::abs(b.h));
}

class CountingPhi {
 public:
  explicit CountingPhi(const std::function<double(double)>& phi) : phi_(phi) {}

  Probe at(double h) {
    ++calls_;
    const double v = phi_(h);
    if (std::isnan(v)) {
      throw LineSearchError(LineSearchError::Kind::invalid_value,
                            "line search: objective returned NaN at h = " + std::to_string(h));
    }
    return {h, v};
  }

  std::uint64_t calls() const { return calls_; }

 private:
  const std::function<double(double)>& phi_;
  std::uint64_t calls_ = 0;
};

struct Bracket {
  double a;
  Probe x;
  double b;
};

// Walks outward from `from` through `first` doubling the abscissa until the
// value stops decreasing.
Bracket expand(CountingPhi& phi, Probe from, Probe first, int max_expansions) {
  Probe prev = from;
  Probe cur = first;
  for (int k = 0; k < max_expansions; ++k) {
    const Probe next = phi.at(2.0 * cur.h);
    if (!(next.v < cur.v)) {
      if (cur.h > 0.0) return {prev.h, cur, next.h};
      return {next.h, cur, prev.h};
    }
    prev = cur;
    cur = next;
  }
  throw LineSearchError(LineSearchError::Kind::unbounded,
                        "line search: no finite minimizer along direction after " +
                            std::to_string(max_expansions) + " expansions");
}

Bracket initial_bracket(CountingPhi& phi, const LineSearchConfig& cfg) {
  const double s = cfg.initial_step;
  const Probe origin = phi.at(0.0);
  const Probe fwd = phi.at(s);
  if (fwd.v < origin.v) return expand(phi, origin, fwd, cfg.max_expansions);
  const Probe bwd = phi.at(-s);
  if (bwd.v < origin.v) return expand(phi, origin, bwd, cfg.max_expansions);
  return {-s, origin, s};
}

}  // namespace

std::optional<LineSearchMode> parse_ls_mode(std::string_view name) {
  if (name == "absolute") return LineSearchMode::absolute;
  if (name == "relative") return LineSearchMode::relative;
  return std::nullopt;
}

std::string_view to_string(LineSearchMode mode) {
  return mode == LineSearchMode::absolute ? "absolute" : "relative";
}

void LineSearchConfig::validate() const {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("line search: mu must be finite and >= 0");
  }
  if (mode == LineSearchMode::relative && !(mu < 1.0)) {
    throw std::invalid_argument("line search: relative mode needs mu < 1");
  }
  if (!(initial_step > 0.0) || !std::isfinite(initial_step)) {
    throw std::invalid_argument("line search: initial_step must be positive");
  }
  if (max_expansions < 1) throw std::invalid_argument("line search: max_expansions must be >= 1");
}

LineSearchResult minimize_unimodal(const std::function<double(double)>& phi,
                                   const LineSearchConfig& cfg) {
  cfg.validate();
  CountingPhi counted(phi);
  Bracket br = initial_bracket(counted, cfg);
  double a = br.a;
  double b = br.b;
  Probe x = br.x;

  const bool absolute = cfg.mode == LineSearchMode::absolute;
  auto converged = [&] {
    const double half = 0.5 * (b - a);
    if (absolute) return half <= cfg.mu;
    return half <= 0.25 * cfg.mu * std::abs(0.5 * (a + b)) || half <= kZeroFloor;
  };

  for (int step = 0; step < kMaxShrinkSteps && !converged(); ++step) {
    const double t = (b - x.h >= x.h - a) ? x.h + kGolden * (b - x.h) : x.h - kGolden * (x.h - a);
    if (!(t > a && t < b) || t == x.h) break;  // floating-point resolution reached
    const Probe p = counted.at(t);
    if (better(p, x)) {
      if (p.h > x.h) {
        a = x.h;
      } else {
        b = x.h;
      }
      x = p;
    } else if (p.h > x.h) {
      b = p.h;
    } else {
      a = p.h;
    }
  }

  LineSearchResult res;
  res.lo = a;
  res.hi = b;
  res.fes_used = counted.calls();
  const double mid = 0.5 * (a + b);
  if (absolute) {
    res.h = mid;
  } else {
    res.h = std::abs(mid) <= kZeroFloor ? 0.0 : (1.0 - 0.5 * cfg.mu) * mid;
  }
  return res;
}

LineSearchResult line_search(const ObjectiveSpec& spec, const Vector& x, const Vector& u,
                             const LineSearchConfig& cfg, FesCounter& counter) {
  if (x.size() != spec.dim || u.size() != spec.dim) {
    throw std::invalid_argument("line_search: dimension mismatch");
  }
  if (std::abs(u.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("line_search: direction must have unit norm");
  }
  Vector point(x.size());
  const std::function<double(double)> phi = [&](double h) {
    point.noalias() = x + h * u;
    return eval_counted(spec, point, counter);
  };
  return minimize_unimodal(phi, cfg);
}

}  // namespace rpursuit
