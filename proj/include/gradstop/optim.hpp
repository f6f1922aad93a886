#pragma once
// Full-batch optimizers and the training loop that feeds observers.

#include "gradstop/gradient_matrix.hpp"
#include "gradstop/models.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>

namespace gradstop::optim {

enum class Method { GD, Adam };

std::string_view method_name(Method m);
// Accepts "gd" and "adam"; throws std::invalid_argument otherwise.
Method parse_method(std::string_view name);

struct OptimizerConfig {
  Method method = Method::GD;
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  // Throws std::invalid_argument on a non-positive rate or betas outside [0, 1).
  void validate() const;
};

struct OptimizerState {
  explicit OptimizerState(Vector theta0);

  Vector theta;
  std::int64_t step_count = 0;
  Vector adam_m;
  Vector adam_v;
};

// theta <- theta - lr * grad
void gd_step(OptimizerState& s, std::span<const double> grad, double lr);
// Bias-corrected Adam update.
void adam_step(OptimizerState& s, std::span<const double> grad, const OptimizerConfig& cfg);
void step(OptimizerState& s, std::span<const double> grad, const OptimizerConfig& cfg);

// Sum of the rows of g.
Vector total_gradient(const GradientMatrix& g);

struct Observation {
  std::int64_t t;  // 1-based; t = 1 is the initial parameter
  std::span<const double> theta;
  const GradientMatrix& gradients;
  double train_loss;
};

using Observer = std::function<void(const Observation&)>;

// For t = 1..budget: computes G_t at theta_t, shows (t, theta_t, G_t, L(theta_t))
// to every observer in order, then steps with the summed gradient. Returns the
// state after the last step.
OptimizerState run(const models::LossModel& model, Vector theta0, const OptimizerConfig& cfg,
                   std::int64_t budget, std::span<const Observer> observers);

}  // namespace gradstop::optim
