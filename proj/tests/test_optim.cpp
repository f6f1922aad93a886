#include "gradstop/optim.hpp"

#include "oracle_values.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace gradstop;
using namespace gradstop::optim;

TEST(GdStep, OneDimensional) {
  OptimizerState s(Vector::Constant(1, 1.0));
  const double g[] = {2.0};
  gd_step(s, g, 0.1);
  EXPECT_DOUBLE_EQ(s.theta(0), 0.8);
  EXPECT_EQ(s.step_count, 1);
}

TEST(GdStep, ZeroGradientKeepsTheta) {
  const Vector theta0 = (Vector(3) << 1.5, -2.0, 0.25).finished();
  OptimizerState s(theta0);
  const std::vector<double> g(3, 0.0);
  for (int k = 0; k < 10; ++k) gd_step(s, g, 0.3);
  EXPECT_EQ(s.theta, theta0);
}

TEST(AdamStep, FirstStepMovesByLearningRate) {
  OptimizerConfig cfg;
  cfg.method = Method::Adam;
  cfg.learning_rate = 0.01;
  for (double g0 : {3.7, -0.02, 150.0}) {
    OptimizerState s(Vector::Constant(1, 0.0));
    const double g[] = {g0};
    adam_step(s, g, cfg);
    EXPECT_NEAR(s.theta(0), -std::copysign(0.01, g0), 1e-6);
  }
}

TEST(AdamStep, TwoStepOracle) {
  OptimizerConfig cfg;
  cfg.method = Method::Adam;
  cfg.learning_rate = 0.05;
  OptimizerState s(Vector::Constant(1, 1.0));
  const double g1[] = {0.8};
  step(s, g1, cfg);
  EXPECT_NEAR(s.theta(0), oracle_values::adam_theta_step1, 1e-15);
  const double g2[] = {-0.3};
  step(s, g2, cfg);
  EXPECT_NEAR(s.theta(0), oracle_values::adam_theta_step2, 1e-15);
}

TEST(AdamStep, ZeroGradientKeepsTheta) {
  OptimizerConfig cfg;
  cfg.method = Method::Adam;
  const Vector theta0 = (Vector(2) << 0.5, -3.0).finished();
  OptimizerState s(theta0);
  const std::vector<double> g(2, 0.0);
  for (int k = 0; k < 100; ++k) step(s, g, cfg);
  EXPECT_EQ(s.theta, theta0);
}

TEST(Config, ValidationAndNames) {
  OptimizerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.learning_rate = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.beta2 = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_EQ(parse_method("adam"), Method::Adam);
  EXPECT_EQ(parse_method(method_name(Method::GD)), Method::GD);
  EXPECT_THROW(parse_method("sgd"), std::invalid_argument);
}

TEST(Run, SingleIterationBudget) {
  const auto m = models::QuadraticModel::make(3, 10, std::vector<double>{1, 2, 3}, 1);
  const Vector theta0 = Vector::Ones(3);
  std::vector<std::int64_t> seen;
  const std::vector<Observer> obs{[&](const Observation& o) {
    seen.push_back(o.t);
    EXPECT_EQ(o.gradients.n(), 10u);
    EXPECT_DOUBLE_EQ(o.train_loss, m.total_loss(as_span(theta0)));
  }};
  const auto state = run(m, theta0, {}, 1, obs);
  EXPECT_EQ(seen, std::vector<std::int64_t>{1});
  EXPECT_EQ(state.step_count, 1);
}

TEST(Run, ZeroBudgetThrows) {
  const auto m = models::QuadraticModel::make(2, 5, std::vector<double>{1, 2}, 1);
  EXPECT_THROW(run(m, Vector::Zero(2), {}, 0, {}), std::invalid_argument);
}

TEST(Run, GradientDescentDecreasesQuadraticLoss) {
  const auto m = models::QuadraticModel::make(20, 100, models::log_spaced_spectrum(20, 0.1, 10.0), 2);
  std::mt19937_64 rng(3);
  const Vector theta0 = m.theta_star() + 3.0 * test_util::random_vector(20, rng);
  std::vector<double> losses;
  std::vector<std::int64_t> ts;
  const std::vector<Observer> obs{[&](const Observation& o) {
    losses.push_back(o.train_loss);
    ts.push_back(o.t);
  }};
  OptimizerConfig cfg;
  cfg.learning_rate = 1e-2;  // < 2 / lambda_max
  run(m, theta0, cfg, 500, obs);
  ASSERT_EQ(losses.size(), 500u);
  for (std::size_t k = 1; k < losses.size(); ++k) {
    EXPECT_LE(losses[k], losses[k - 1]) << "t=" << ts[k];
    EXPECT_EQ(ts[k], ts[k - 1] + 1);
  }
}

TEST(Run, ObserversSeeCurrentThetaAndStepUsesSummedGradient) {
  const auto m = models::QuadraticModel::make(4, 12, std::vector<double>{0.5, 1, 2, 4}, 5);
  const Vector theta0 = Vector::Constant(4, 2.0);
  std::vector<Vector> thetas;
  std::vector<Vector> sums;
  const std::vector<Observer> obs{[&](const Observation& o) {
    thetas.emplace_back(Eigen::Map<const Vector>(o.theta.data(), static_cast<Eigen::Index>(o.theta.size())));
    sums.push_back(total_gradient(o.gradients));
  }};
  OptimizerConfig cfg;
  cfg.learning_rate = 0.05;
  const auto final_state = run(m, theta0, cfg, 5, obs);
  EXPECT_EQ(thetas.front(), theta0);
  for (std::size_t k = 1; k < thetas.size(); ++k) {
    EXPECT_LT((thetas[k] - (thetas[k - 1] - 0.05 * sums[k - 1])).norm(), 1e-14);
  }
  EXPECT_LT((final_state.theta - (thetas.back() - 0.05 * sums.back())).norm(), 1e-14);
}

TEST(Run, ObserverCannotAlterTrajectory) {
  const auto m = models::QuadraticModel::make(3, 8, std::vector<double>{1, 2, 3}, 6);
  const Vector theta0 = Vector::Ones(3);
  const auto plain = run(m, theta0, {}, 20, {});
  const std::vector<Observer> obs{[](const Observation& o) {
    // The span is read-only; a cast-away write would land in a copy.
    auto* p = const_cast<double*>(o.theta.data());
    p[0] += 100.0;
  }};
  const auto observed = run(m, theta0, {}, 20, obs);
  EXPECT_EQ(plain.theta, observed.theta);
}
