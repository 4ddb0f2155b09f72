#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rpursuit/objectives.hpp"
#include "rpursuit/sampling.hpp"

using namespace rpursuit;

namespace {

Vector random_vector(Rng& rng, Index n, double scale = 1.0) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = scale * rng.normal();
  return v;
}

const Benchmark kAll[] = {Benchmark::sphere, Benchmark::ellipsoid, Benchmark::nesterov_smooth,
                          Benchmark::nesterov_strong, Benchmark::funnel};
const Benchmark kSmooth[] = {Benchmark::sphere, Benchmark::ellipsoid, Benchmark::nesterov_smooth,
                             Benchmark::nesterov_strong};

}  // namespace

TEST(Objectives, SphereScaleAtProtocolDimension) {
  const ObjectiveSpec s = make_benchmark(Benchmark::sphere, 64, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(s.S, 32.0);
  EXPECT_DOUBLE_EQ(s.R2, 64.0);
  EXPECT_TRUE(s.convex);
  EXPECT_TRUE(s.strongly_convex);
}

TEST(Objectives, SphereOptimum) {
  for (Index n : {1, 3, 17}) {
    const ObjectiveSpec s = make_benchmark("sphere", n, 1.0, 1.0);
    EXPECT_EQ(s.eval(s.x_star), 0.0);
    EXPECT_EQ(s.grad(s.x_star).norm(), 0.0);
  }
}

TEST(Objectives, ProtocolTableConstants) {
  const Index n = 64;
  EXPECT_DOUBLE_EQ(make_protocol_benchmark(Benchmark::ellipsoid, n).S, 50.0 * n);
  const ObjectiveSpec f3 = make_protocol_benchmark(Benchmark::nesterov_smooth, n);
  EXPECT_DOUBLE_EQ(f3.R2, (n + 1) / 3.0);
  EXPECT_DOUBLE_EQ(f3.S, 500.0 * (n + 1) / 3.0);
  EXPECT_DOUBLE_EQ(f3.m, 1000.0 / (4.0 * 65.0 * 65.0));
  const ObjectiveSpec f4 = make_protocol_benchmark(Benchmark::nesterov_strong, n);
  EXPECT_DOUBLE_EQ(f4.R2, std::sqrt(1000.0) / 4.0);
  EXPECT_DOUBLE_EQ(f4.S, 1000.0);
  const ObjectiveSpec f5 = make_protocol_benchmark(Benchmark::funnel, n);
  EXPECT_DOUBLE_EQ(f5.S, 32.0);
  EXPECT_FALSE(f5.convex);
}

TEST(Objectives, NesterovSmoothOptimumMatchesDenseSolve) {
  const Index n = 8;
  const ObjectiveSpec s = make_benchmark(Benchmark::nesterov_smooth, n, 1000.0, 0.0);
  const Vector dense = oracle::nesterov_minimizer(n, 1000.0, 0.0);
  EXPECT_LT((s.x_star - dense).norm(), 1e-12);
  for (Index i = 0; i < n; ++i) EXPECT_NEAR(s.x_star(i), 1.0 - (i + 1.0) / (n + 1.0), 1e-12);
  EXPECT_NEAR(s.f_star, oracle::nesterov_value(dense, 1000.0, 0.0), 1e-10);
  EXPECT_NEAR(s.f_star, -1000.0 * n / (8.0 * (n + 1)), 1e-10);
  // No other point does better.
  Rng rng(1);
  for (int k = 0; k < 200; ++k) {
    const Vector x = s.x_star + random_vector(rng, n, 0.1);
    EXPECT_GE(s.eval(x), s.f_star);
  }
}

TEST(Objectives, NesterovStrongResidual) {
  const ObjectiveSpec s = make_benchmark(Benchmark::nesterov_strong, 64, 1000.0, 1.0);
  EXPECT_LE(s.grad(s.x_star).norm(), 1e-10);
  EXPECT_LT((s.x_star - oracle::nesterov_minimizer(64, 999.0, 1.0)).norm(), 1e-10);
  EXPECT_NEAR(s.eval(s.x_star), s.f_star, 1e-12);
}

TEST(Objectives, GradientVanishesAtOptimum) {
  for (Benchmark b : kSmooth) {
    const ObjectiveSpec s = make_protocol_benchmark(b, 16);
    EXPECT_LE(s.grad(s.x_star).norm(), 1e-10) << s.name;
    EXPECT_NEAR(s.eval(s.x_star), s.f_star, 1e-12) << s.name;
  }
}

TEST(Objectives, FiniteDifferenceGradient) {
  Rng rng(7);
  for (Benchmark b : kAll) {
    const ObjectiveSpec s = make_protocol_benchmark(b, 10);
    for (int k = 0; k < 100; ++k) {
      const Vector x = s.x_star + random_vector(rng, 10);
      const Vector fd = oracle::central_difference(s.eval, x);
      const Vector g = s.grad(x);
      EXPECT_LE((fd - g).norm(), 1e-4 * std::max(1.0, g.norm())) << s.name;
    }
  }
}

TEST(Objectives, QuadraticUpperBound) {
  Rng rng(11);
  for (Benchmark b : kSmooth) {
    const ObjectiveSpec s = make_protocol_benchmark(b, 12);
    for (int k = 0; k < 200; ++k) {
      const Vector x = random_vector(rng, 12, 2.0);
      const Vector y = random_vector(rng, 12, 2.0);
      const double lhs = s.eval(y) - s.eval(x) - s.grad(x).dot(y - x);
      EXPECT_LE(lhs, 0.5 * s.L1 * (x - y).squaredNorm() + 1e-9 * std::max(1.0, std::abs(s.eval(y)))) << s.name;
    }
  }
}

TEST(Objectives, StrongConvexityLowerBound) {
  Rng rng(12);
  for (Benchmark b : {Benchmark::sphere, Benchmark::ellipsoid, Benchmark::nesterov_strong}) {
    const ObjectiveSpec s = make_protocol_benchmark(b, 12);
    for (int k = 0; k < 200; ++k) {
      const Vector x = random_vector(rng, 12, 2.0);
      const Vector y = random_vector(rng, 12, 2.0);
      const double lhs = s.eval(y) - s.eval(x) - s.grad(x).dot(y - x);
      EXPECT_GE(lhs, 0.5 * s.m * (y - x).squaredNorm() - 1e-9 * std::max(1.0, std::abs(s.eval(y)))) << s.name;
    }
  }
}

TEST(Objectives, FunnelOrdersPointsLikeSphere) {
  const ObjectiveSpec f1 = make_protocol_benchmark(Benchmark::sphere, 6);
  const ObjectiveSpec f5 = make_protocol_benchmark(Benchmark::funnel, 6);
  Rng rng(3);
  for (int k = 0; k < 1000; ++k) {
    const Vector x = random_vector(rng, 6, 3.0);
    const Vector y = random_vector(rng, 6, 3.0);
    EXPECT_EQ(f1.eval(x) < f1.eval(y), f5.eval(x) < f5.eval(y));
  }
  EXPECT_EQ(f5.grad(f5.x_star).norm(), 0.0);
}

TEST(Objectives, StencilIsSymmetric) {
  Rng rng(5);
  for (Index n : {1, 2, 9, 40}) {
    const Vector a = random_vector(rng, n);
    const Vector b = random_vector(rng, n);
    EXPECT_NEAR(a.dot(apply_stencil(b)), apply_stencil(a).dot(b), 1e-12 * (1.0 + a.norm() * b.norm()));
    EXPECT_LT((apply_stencil(a) - oracle::stencil_matrix(n) * a).norm(), 1e-12);
  }
}

TEST(Objectives, StencilSolveTemplatedOnScalar) {
  Eigen::VectorXf rhs = Eigen::VectorXf::Ones(5);
  const Eigen::VectorXf x = solve_stencil(rhs, 0.5f);
  EXPECT_LT((apply_stencil(x) + 0.5f * x - rhs).norm(), 1e-5f);
}

TEST(Objectives, EvalCounted) {
  FesCounter c;
  const ObjectiveSpec f1 = make_protocol_benchmark(Benchmark::sphere, 4);
  EXPECT_DOUBLE_EQ(eval_counted(f1, Vector::Zero(4), c), 2.0);
  EXPECT_EQ(c.count(), 1u);
  const ObjectiveSpec f5 = make_protocol_benchmark(Benchmark::funnel, 4);
  EXPECT_DOUBLE_EQ(eval_counted(f5, Vector::Ones(4), c), 0.0);
  EXPECT_EQ(c.count(), 2u);
  const ObjectiveSpec f2 = make_benchmark(Benchmark::ellipsoid, 2, 1000.0, 1.0);
  EXPECT_DOUBLE_EQ(eval_counted(f2, Vector::Zero(2), c), 500.5);
  EXPECT_EQ(c.count(), 3u);
  EXPECT_THROW(eval_counted(f1, Vector::Zero(3), c), std::invalid_argument);
  EXPECT_EQ(c.count(), 3u);
}

TEST(Objectives, Errors) {
  EXPECT_THROW(make_benchmark("rosenbrock", 4, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(make_benchmark(Benchmark::ellipsoid, 5, 1000.0, 1.0), std::invalid_argument);
  EXPECT_THROW(make_benchmark(Benchmark::nesterov_strong, 8, 1.0, 2.0), std::invalid_argument);
  EXPECT_THROW(make_benchmark(Benchmark::nesterov_strong, 8, 1000.0, 0.0), std::invalid_argument);
  EXPECT_THROW(make_benchmark(Benchmark::sphere, 0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(make_benchmark(Benchmark::sphere, 4, -1.0, 0.0), std::invalid_argument);
}

TEST(Objectives, NameRegistry) {
  for (Benchmark b : kAll) {
    EXPECT_EQ(parse_benchmark(to_string(b)), b);
  }
  EXPECT_EQ(parse_benchmark("nesterov_smooth"), Benchmark::nesterov_smooth);
  EXPECT_FALSE(parse_benchmark("nesterov"));
}

TEST(Objectives, CallbackAdapter) {
  const ObjectiveSpec s = make_callback_objective(
      "shifted", 2, [](const Vector& x) { return (x.array() - 2.0).square().sum(); }, {}, 2.0, 2.0,
      Vector::Constant(2, 2.0), 0.0, 4.0);
  EXPECT_FALSE(s.has_gradient());
  EXPECT_DOUBLE_EQ(s.eval(Vector::Zero(2)), 8.0);
  EXPECT_THROW(make_callback_objective("bad", 2, {}, {}, 1.0, 0.0, Vector::Zero(2), 0.0, 1.0),
               std::invalid_argument);
}
