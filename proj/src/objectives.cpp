#include "rpursuit/objectives.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace rpursuit {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

ObjectiveSpec make_sphere(Index n, double L1, double m) {
  require(L1 >= 1.0 && m <= 1.0, "sphere: need m <= 1 <= L1 (Q = I)");
  ObjectiveSpec s;
  s.name = "sphere";
  s.dim = n;
  s.eval = [](const Vector& x) { return 0.5 * (x.array() - 1.0).square().sum(); };
  s.grad = [](const Vector& x) -> Vector { return x.array() - 1.0; };
  s.L1 = L1;
  s.m = m;
  s.x_star = Vector::Ones(n);
  s.f_star = 0.0;
  s.R2 = static_cast<double>(n);
  s.S = 0.5 * L1 * s.R2;
  s.strongly_convex = m > 0.0;
  return s;
}

ObjectiveSpec make_ellipsoid(Index n, double L1, double m) {
  require(n % 2 == 0, "ellipsoid: dimension must be even");
  require(L1 >= 1.0 && m <= 1.0, "ellipsoid: need m <= 1 <= L1");
  Vector q = Vector::Ones(n);
  q.head(n / 2).setConstant(L1);
  ObjectiveSpec s;
  s.name = "ellipsoid";
  s.dim = n;
  s.eval = [q](const Vector& x) {
    return 0.5 * (q.array() * (x.array() - 1.0).square()).sum();
  };
  s.grad = [q](const Vector& x) -> Vector { return q.array() * (x.array() - 1.0); };
  s.L1 = L1;
  s.m = m;
  s.x_star = Vector::Ones(n);
  s.f_star = 0.0;
  s.R2 = static_cast<double>(n);
  // Protocol table value: S = 50 n at L1 = 1000.
  s.S = L1 * static_cast<double>(n) / 20.0;
  s.strongly_convex = m > 0.0;
  return s;
}

// f(x) = c/4 (1/2 x^T A x - x_1) + r/2 |x|^2, shared by both Nesterov members.
double nesterov_value(const Vector& x, double c, double r) {
  const Index n = x.size();
  double quad = x(0) * x(0) + x(n - 1) * x(n - 1);
  if (n > 1) quad += (x.tail(n - 1) - x.head(n - 1)).squaredNorm();
  return 0.25 * c * (0.5 * quad - x(0)) + 0.5 * r * x.squaredNorm();
}

Vector nesterov_gradient(const Vector& x, double c, double r) {
  Vector g = 0.25 * c * apply_stencil(x) + r * x;
  g(0) -= 0.25 * c;
  return g;
}

ObjectiveSpec make_nesterov(Benchmark kind, Index n, double L1, double m) {
  const bool strong = kind == Benchmark::nesterov_strong;
  double c = L1;
  double r = 0.0;
  if (strong) {
    require(m > 0.0 && L1 >= m, "nesterov_strong: need L1 >= m > 0");
    c = L1 - m;
    r = m;
  }
  ObjectiveSpec s;
  s.name = strong ? "nesterov_strong" : "nesterov_smooth";
  s.dim = n;
  s.eval = [c, r](const Vector& x) { return nesterov_value(x, c, r); };
  s.grad = [c, r](const Vector& x) -> Vector { return nesterov_gradient(x, c, r); };
  s.L1 = L1;

  // Optimum: (c/4 A + r I) x = c/4 e_1, i.e. (A + 4r/c I) x = e_1.
  Vector e1 = Vector::Zero(n);
  e1(0) = 1.0;
  if (c > 0.0) {
    s.x_star = solve_stencil(e1, 4.0 * r / c);
  } else {
    s.x_star = Vector::Zero(n);
  }
  s.f_star = s.eval(s.x_star);

  const double np1 = static_cast<double>(n + 1);
  if (strong) {
    s.m = m;
    s.strongly_convex = true;
    // Protocol table constants, not re-derived from |x0 - x*|.
    s.R2 = std::sqrt(L1) / 4.0;
    s.S = L1;
  } else {
    s.m = L1 / (4.0 * np1 * np1);
    s.strongly_convex = false;
    s.R2 = np1 / 3.0;
    s.S = 0.5 * L1 * s.R2;
  }
  return s;
}

ObjectiveSpec make_funnel(Index n, double L1, double m) {
  ObjectiveSpec s;
  s.name = "funnel";
  s.dim = n;
  // Same squared-distance kernel as sphere so the two order points identically.
  s.eval = [](const Vector& x) {
    const double sq = (x.array() - 1.0).square().sum();
    return std::log1p(10.0 * std::sqrt(sq));
  };
  s.grad = [](const Vector& x) -> Vector {
    Vector d = x.array() - 1.0;
    const double r = d.norm();
    if (r == 0.0) return Vector::Zero(x.size());
    return (10.0 / ((1.0 + 10.0 * r) * r)) * d;
  };
  s.L1 = L1;
  s.m = m;
  s.x_star = Vector::Ones(n);
  s.f_star = 0.0;
  s.R2 = static_cast<double>(n);
  s.S = 0.5 * static_cast<double>(n);
  s.convex = false;
  s.strongly_convex = false;
  return s;
}

}  // namespace

std::optional<Benchmark> parse_benchmark(std::string_view name) {
  std::string key(name);
  for (auto& ch : key) {
    if (ch == '-') ch = '_';
  }
  if (key == "sphere") return Benchmark::sphere;
  if (key == "ellipsoid") return Benchmark::ellipsoid;
  if (key == "nesterov_smooth") return Benchmark::nesterov_smooth;
  if (key == "nesterov_strong") return Benchmark::nesterov_strong;
  if (key == "funnel") return Benchmark::funnel;
  return std::nullopt;
}

std::string_view to_string(Benchmark b) {
  switch (b) {
    case Benchmark::sphere: return "sphere";
    case Benchmark::ellipsoid: return "ellipsoid";
    case Benchmark::nesterov_smooth: return "nesterov-smooth";
    case Benchmark::nesterov_strong: return "nesterov-strong";
    case Benchmark::funnel: return "funnel";
  }
  return "unknown";
}

ObjectiveSpec make_benchmark(Benchmark kind, Index n, double L1, double m) {
  require(n >= 1, "dimension must be positive");
  require(std::isfinite(L1) && L1 > 0.0, "L1 must be positive");
  require(std::isfinite(m) && m >= 0.0, "m must be nonnegative");
  require(m <= L1 || kind == Benchmark::nesterov_smooth, "m must not exceed L1");
  switch (kind) {
    case Benchmark::sphere: return make_sphere(n, L1, m);
    case Benchmark::ellipsoid: return make_ellipsoid(n, L1, m);
    case Benchmark::nesterov_smooth:
    case Benchmark::nesterov_strong: return make_nesterov(kind, n, L1, m);
    case Benchmark::funnel: return make_funnel(n, L1, m);
  }
  throw std::invalid_argument("unknown benchmark");
}

ObjectiveSpec make_benchmark(std::string_view name, Index n, double L1, double m) {
  const auto kind = parse_benchmark(name);
  if (!kind) throw std::invalid_argument("unknown benchmark: " + std::string(name));
  return make_benchmark(*kind, n, L1, m);
}

ObjectiveSpec make_protocol_benchmark(Benchmark kind, Index n) {
  switch (kind) {
    case Benchmark::sphere:
    case Benchmark::funnel: return make_benchmark(kind, n, 1.0, 1.0);
    case Benchmark::ellipsoid:
    case Benchmark::nesterov_strong: return make_benchmark(kind, n, 1000.0, 1.0);
    case Benchmark::nesterov_smooth: return make_benchmark(kind, n, 1000.0, 0.0);
  }
  throw std::invalid_argument("unknown benchmark");
}

ObjectiveSpec make_callback_objective(std::string name, Index n,
                                      std::function<double(const Vector&)> eval,
                                      std::function<Vector(const Vector&)> grad,
                                      double L1, double m, Vector x_star, double f_star,
                                      double S) {
  require(n >= 1, "dimension must be positive");
  require(static_cast<bool>(eval), "callback objective needs an evaluator");
  require(x_star.size() == n, "x_star dimension mismatch");
  ObjectiveSpec s;
  s.name = std::move(name);
  s.dim = n;
  s.eval = std::move(eval);
  s.grad = std::move(grad);
  s.L1 = L1;
  s.m = m;
  s.x_star = std::move(x_star);
  s.f_star = f_star;
  s.S = S;
  s.R2 = L1 > 0.0 ? 2.0 * S / L1 : 0.0;
  s.strongly_convex = m > 0.0;
  return s;
}

double eval_counted(const ObjectiveSpec& spec, const Vector& x, FesCounter& counter) {
  if (x.size() != spec.dim) {
    throw std::invalid_argument("eval_counted: dimension mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(spec.dim) + ")");
  }
  counter.add(1);
  return spec.eval(x);
}

}  // namespace rpursuit
