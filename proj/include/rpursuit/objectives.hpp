#ifndef RPURSUIT_OBJECTIVES_HPP
#define RPURSUIT_OBJECTIVES_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rpursuit/types.hpp"

namespace rpursuit {

enum class Benchmark { sphere, ellipsoid, nesterov_smooth, nesterov_strong, funnel };

/// Accepts both `nesterov-smooth` and `nesterov_smooth` spellings.
std::optional<Benchmark> parse_benchmark(std::string_view name);
std::string_view to_string(Benchmark b);

/// A benchmark objective together with the constants the protocol and the
/// convergence bounds need. Immutable after construction; safe to share
/// between concurrent runs.
struct ObjectiveSpec {
  std::string name;
  Index dim = 0;
  std::function<double(const Vector&)> eval;
  std::function<Vector(const Vector&)> grad;  // empty when unavailable
  double L1 = 0.0;
  double m = 0.0;
  Vector x_star;
  double f_star = 0.0;
  double R2 = 0.0;
  double S = 0.0;
  bool convex = true;
  bool strongly_convex = false;

  bool has_gradient() const { return static_cast<bool>(grad); }
};

/// Builds one of the five protocol benchmarks.
///
/// sphere / ellipsoid are f(x) = 1/2 (x-1)^T Q (x-1) with Q = I resp. Q
/// diagonal with the first n/2 entries equal to L1 and the rest 1.
/// nesterov_smooth is L1/4 (1/2 x^T A x - x_1) with A the tridiagonal
/// (-1, 2, -1) stencil; its `m` field holds L1/(4(n+1)^2) and the `m`
/// argument is ignored. nesterov_strong adds the m/2 |x|^2 regulariser.
/// funnel is log(1 + 10 |x - 1|), a strictly monotone transform of sphere.
///
/// Throws std::invalid_argument on an unknown name or an inconsistent
/// parameter combination.
ObjectiveSpec make_benchmark(Benchmark kind, Index n, double L1, double m);
ObjectiveSpec make_benchmark(std::string_view name, Index n, double L1, double m);

/// Benchmark with the standard protocol constants (L1 = 1000 and m = 1 for
/// the ill-conditioned members, L1 = m = 1 for sphere and funnel).
ObjectiveSpec make_protocol_benchmark(Benchmark kind, Index n);

/// Wraps a user callback. L1, m, the optimum and the scale are caller
/// supplied; nothing is estimated.
ObjectiveSpec make_callback_objective(std::string name, Index n,
                                      std::function<double(const Vector&)> eval,
                                      std::function<Vector(const Vector&)> grad,
                                      double L1, double m, Vector x_star, double f_star,
                                      double S);

/// Evaluates the objective and charges exactly one FES to `counter`.
double eval_counted(const ObjectiveSpec& spec, const Vector& x, FesCounter& counter);

// Matrix-free tridiagonal stencil of the Nesterov functions:
// (A x)_i = 2 x_i - x_{i-1} - x_{i+1}, with x_0 = x_{n+1} = 0.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>
apply_stencil(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Index n = x.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y = Scalar(2) * x;
  if (n > 1) {
    y.head(n - 1) -= x.tail(n - 1);
    y.tail(n - 1) -= x.head(n - 1);
  }
  return y;
}

/// Solves (A + shift I) x = rhs by the Thomas algorithm, with A the
/// stencil above. Requires shift > -2 + 2cos(pi/(n+1)) (A + shift I SPD).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>
solve_stencil(const Eigen::MatrixBase<Derived>& rhs, typename Derived::Scalar shift) {
  using Scalar = typename Derived::Scalar;
  const Index n = rhs.size();
  const Scalar diag = Scalar(2) + shift;
  const Scalar off = Scalar(-1);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c(n), d(n), x(n);
  c(0) = off / diag;
  d(0) = rhs(0) / diag;
  for (Index i = 1; i < n; ++i) {
    const Scalar denom = diag - off * c(i - 1);
    c(i) = off / denom;
    d(i) = (rhs(i) - off * d(i - 1)) / denom;
  }
  x(n - 1) = d(n - 1);
  for (Index i = n - 2; i >= 0; --i) x(i) = d(i) - c(i) * x(i + 1);
  return x;
}

}  // namespace rpursuit

#endif  // RPURSUIT_OBJECTIVES_HPP
