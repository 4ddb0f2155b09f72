#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rpursuit/theory.hpp"
#include "rpursuit/verify.hpp"

using namespace rpursuit;
using namespace rpursuit::theory;

TEST(Theory, SignedUnitEnumeration) {
  Vector x(2);
  x << 3.0, 4.0;
  const MomentCheckReport r = enumerate_signed_unit_moments(x);
  EXPECT_TRUE(r.exact);
  EXPECT_NEAR(r.estimator_mean(0), 1.5, 1e-12);
  EXPECT_NEAR(r.estimator_mean(1), 2.0, 1e-12);
  EXPECT_NEAR(r.estimator_second, 12.5, 1e-12);
  EXPECT_TRUE(r.passes());
}

TEST(Theory, GaussianSecondMoment) {
  Vector x = Vector::Zero(5);
  x(0) = 1.0;
  const MomentCheckReport r = check_moments(SamplerKind::gaussian, x, 1000000, 3);
  EXPECT_DOUBLE_EQ(r.target_second, 7.0);
  EXPECT_LE(std::abs(r.estimator_second - 7.0), 4.0 * r.mc_stderr);
  EXPECT_TRUE(r.passes());
}

TEST(Theory, MomentsScaleBilinearly) {
  Vector x(3);
  x << 0.2, -1.0, 0.0;
  const MomentCheckReport a = check_moments(SamplerKind::unit_sphere, x, 20000, 11);
  const MomentCheckReport b = check_moments(SamplerKind::unit_sphere, 3.0 * x, 20000, 11);
  EXPECT_LT((b.estimator_mean - 3.0 * a.estimator_mean).norm(), 1e-12);
  EXPECT_NEAR(b.estimator_second, 9.0 * a.estimator_second, 1e-12);
}

TEST(Theory, MomentPreconditions) {
  EXPECT_THROW(check_moments(SamplerKind::unit_sphere, Vector::Zero(3), 20000, 1), std::invalid_argument);
  EXPECT_THROW(check_moments(SamplerKind::unit_sphere, Vector::Ones(3), 100, 1), std::invalid_argument);
}

TEST(Theory, ScalarNormalMoments) {
  const ScalarNormalMoments m = normal_moments(1000000, 5);
  EXPECT_LE(std::abs(m.m1), 4.0 * m.se1);
  EXPECT_LE(std::abs(m.m2 - 1.0), 4.0 * m.se2);
  EXPECT_LE(std::abs(m.m3), 4.0 * m.se3);
  EXPECT_LE(std::abs(m.m4 - 3.0), 4.0 * m.se4);
}

TEST(Theory, StrongBoundFormula) {
  EXPECT_NEAR(strongly_convex_bound(1.0, 1.0, 16.0, 8.0, 160, 0.0), 8.0 * std::pow(15.0 / 16.0, 160), 1e-18);
  EXPECT_NEAR(strongly_convex_bound(1.0, 1.0, 16.0, 8.0, 160, 0.0), 2.6212e-4, 1e-8);
  EXPECT_NEAR(strongly_convex_bound(1.0, 1.0, 16.0, 0.0, 160, 1e-5), 8e-10, 1e-22);
  const ObjectiveSpec f1 = make_protocol_benchmark(Benchmark::sphere, 16);
  EXPECT_DOUBLE_EQ(theorem_bound(Theorem::strongly_convex, f1, 8.0, 160, 0.0), 8.0 * std::pow(15.0 / 16.0, 160));
  EXPECT_DOUBLE_EQ(theorem_bound(Theorem::local_strong, f1, 8.0, 10, 0.0), 8.0 * std::pow(1.0 - 1.0 / 64.0, 10));
}

TEST(Theory, ConvexBoundIsDecreasingWithoutNoise) {
  const ObjectiveSpec f3 = make_protocol_benchmark(Benchmark::nesterov_smooth, 8);
  double prev = theorem_bound(Theorem::convex_bounded, f3, 10.0, 0, 0.0);
  for (long N = 1; N < 200; ++N) {
    const double b = theorem_bound(Theorem::convex_bounded, f3, 10.0, N, 0.0);
    EXPECT_LT(b, prev);
    prev = b;
  }
  const double Q = std::max(2.0 * 8 * 1000.0 * f3.R2, 10.0);
  EXPECT_DOUBLE_EQ(theorem_bound(Theorem::convex_bounded, f3, 10.0, 4, 1e-3), Q / 5.0 + 4 * 1000.0 * 1e-6 / 2.0);
}

TEST(Theory, OptimalIterations) {
  const double Q = 50.0, L1 = 2.0, mu = 1e-3;
  const double N = optimal_iterations(Q, L1, mu);
  EXPECT_DOUBLE_EQ(N, std::sqrt(2.0 * Q / (L1 * mu * mu)));
  EXPECT_LE(convex_bounded_bound(L1, 1.0, 0.0, Q, static_cast<long>(N), mu), mu * std::sqrt(2.0 * Q * L1));
}

TEST(Theory, InapplicablePairings) {
  const ObjectiveSpec f3 = make_protocol_benchmark(Benchmark::nesterov_smooth, 8);
  const ObjectiveSpec f5 = make_protocol_benchmark(Benchmark::funnel, 8);
  EXPECT_THROW(theorem_bound(Theorem::strongly_convex, f5, 1.0, 10, 0.0), std::invalid_argument);
  EXPECT_THROW(theorem_bound(Theorem::convex_bounded, f5, 1.0, 10, 0.0), std::invalid_argument);
  const ObjectiveSpec flat = make_callback_objective(
      "flat", 2, [](const Vector& x) { return x.squaredNorm(); }, {}, 2.0, 0.0, Vector::Zero(2), 0.0, 1.0);
  EXPECT_THROW(theorem_bound(Theorem::local_strong, flat, 1.0, 10, 0.0), std::invalid_argument);
  EXPECT_THROW(theorem_bound(Theorem::strongly_convex, f3, 1.0, -1, 0.0), std::invalid_argument);
}

TEST(Theory, RecurrenceHandIteration) {
  const RecurrenceParams p{2.0, 1.0, 0.0, 4.0};
  EXPECT_DOUBLE_EQ(recurrence_Q(p), 4.0);
  const RecurrenceReport r = check_recurrence(p, 2);
  EXPECT_TRUE(r.passed);
  const auto f = oracle::recurrence(2.0, 1.0, 0.0, 4.0, 2);
  EXPECT_DOUBLE_EQ(f[1], 0.0);
  EXPECT_DOUBLE_EQ(recurrence_bound(p, 2), 2.0);
}

TEST(Theory, RecurrenceMatchesBruteForce) {
  for (double theta : {1.5, 2.0, 4.0}) {
    for (double C : {0.1, 1.0, 10.0}) {
      for (double D : {0.0, 1e-6}) {
        RecurrenceParams p{theta, C, D, 0.0};
        p.f1 = recurrence_Q(p);
        const auto f = oracle::recurrence(theta, C, D, p.f1, 10000);
        bool ok = true;
        for (long t = 1; t <= 10000; ++t) {
          const double b = std::max(theta * theta * C / (theta - 1.0), p.f1) / t + (t - 1) * D;
          ok = ok && f[t - 1] <= b + 1e-12 * std::abs(b);
        }
        EXPECT_EQ(check_recurrence(p, 10000).passed, ok) << theta << ' ' << C << ' ' << D;
      }
    }
  }
}

TEST(Theory, RecurrenceSlackIsLinearInD) {
  RecurrenceParams a{2.0, 1.0, 0.0, 1.0};
  RecurrenceParams b{2.0, 1.0, 1e-3, 1.0};
  for (long t = 1; t < 50; ++t) {
    EXPECT_NEAR(recurrence_bound(b, t) - recurrence_bound(a, t), (t - 1) * 1e-3, 1e-14);
  }
}

TEST(Theory, RecurrenceReportsViolation) {
  // For t < theta the first factor is negative; theta = 4 exposes it at t = 3.
  const RecurrenceParams p{4.0, 1.0, 0.0, 16.0 / 3.0};
  const RecurrenceReport r = check_recurrence(p, 100);
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.violation_t, 3);
  EXPECT_DOUBLE_EQ(r.violation_value, 4.0);
  EXPECT_THROW(check_recurrence({1.0, 1.0, 0.0, 0.0}, 10), std::invalid_argument);
  EXPECT_THROW(check_recurrence({2.0, 0.0, 0.0, 0.0}, 10), std::invalid_argument);
}

TEST(Theory, SingleStepAtOptimum) {
  const ObjectiveSpec f1 = make_protocol_benchmark(Benchmark::sphere, 6);
  LineSearchConfig ls;
  ls.mu = 1e-3;
  const SingleStepReport r = check_single_step(f1, f1.x_star, 1.0, f1.x_star, ls, 20000, 2);
  EXPECT_LE(r.empirical_mean, 0.5 * ls.mu * ls.mu);
  EXPECT_TRUE(r.passes());
}

TEST(Theory, GradientFormOnEllipsoid) {
  const ObjectiveSpec f2 = make_protocol_benchmark(Benchmark::ellipsoid, 8);
  LineSearchConfig ls;
  ls.mu = 0.0;
  const SingleStepReport r = check_single_step_gradient(f2, Vector::Zero(8), 1.0 / f2.L1, ls, 100000, 4);
  EXPECT_TRUE(r.passes()) << r.margin_sigma();
  EXPECT_DOUBLE_EQ(r.bound, f2.eval(Vector::Zero(8)) - f2.grad(Vector::Zero(8)).squaredNorm() / (2.0 * 8 * 1000.0));
  EXPECT_THROW(check_single_step_gradient(f2, Vector::Zero(8), 1.0, ls, 100, 4), std::invalid_argument);
}

TEST(Theory, RelativeBoundUsesInflatedDimension) {
  const ObjectiveSpec f1 = make_protocol_benchmark(Benchmark::sphere, 4);
  const Vector x = Vector::Zero(4);
  const double mu = 0.2;
  const double n1 = 4.0 / (1.0 - mu);
  const double expected = 2.0 + (1.0 / n1) * (-4.0) + 1.0 / (2.0 * n1) * 4.0;
  EXPECT_DOUBLE_EQ(one_step_bound_relative(f1, x, 1.0, f1.x_star, mu), expected);
  LineSearchConfig ls;
  ls.mode = LineSearchMode::relative;
  ls.mu = mu;
  EXPECT_TRUE(check_single_step(f1, x, 1.0, f1.x_star, ls, 50000, 9).passes());
}

TEST(Theory, SweepsPassOnSmallProblems) {
  const ObjectiveSpec f1 = make_protocol_benchmark(Benchmark::sphere, 4);
  EXPECT_EQ(sweep_gradient_bound(f1, 1e-5, 3, 20000, 1, 1).failures, 0);
  EXPECT_EQ(sweep_relative_bound(f1, 0.1, 3, 20000, 2, 1).failures, 0);
}

TEST(Theory, RateExperimentShape) {
  const RateExperiment e = sphere_rate_experiment(8, 40, 1e-9, 20, 3, 1);
  ASSERT_EQ(e.mean_gap.size(), 41u);
  EXPECT_DOUBLE_EQ(e.mean_gap[0], 4.0);
  EXPECT_LT(e.fitted_log_decay, 0.0);
}
