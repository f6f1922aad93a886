#include "gradstop/optim.hpp"

#include "gradstop/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gradstop::optim {
namespace {

void check_grad(const OptimizerState& s, std::span<const double> grad) {
  if (grad.size() != static_cast<std::size_t>(s.theta.size())) {
    throw std::invalid_argument("gradient has the wrong dimension");
  }
}

}  // namespace

std::string_view method_name(Method m) { return m == Method::GD ? "gd" : "adam"; }

Method parse_method(std::string_view name) {
  if (name == "gd") return Method::GD;
  if (name == "adam") return Method::Adam;
  throw std::invalid_argument("unknown optimizer: " + std::string(name));
}

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("learning rate must be positive");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("Adam betas must lie in [0, 1)");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("Adam eps must be positive");
}

OptimizerState::OptimizerState(Vector theta0)
    : theta(std::move(theta0)),
      adam_m(Vector::Zero(theta.size())),
      adam_v(Vector::Zero(theta.size())) {}

void gd_step(OptimizerState& s, std::span<const double> grad, double lr) {
  if (!(lr > 0.0)) throw std::invalid_argument("learning rate must be positive");
  check_grad(s, grad);
  kernels::axpy(-lr, grad, as_span(s.theta));
  ++s.step_count;
}

void adam_step(OptimizerState& s, std::span<const double> grad, const OptimizerConfig& cfg) {
  cfg.validate();
  check_grad(s, grad);
  ++s.step_count;
  const double t = static_cast<double>(s.step_count);
  const kernels::AdamHyper h{cfg.learning_rate,
                             cfg.beta1,
                             cfg.beta2,
                             cfg.eps,
                             1.0 - std::pow(cfg.beta1, t),
                             1.0 - std::pow(cfg.beta2, t)};
  kernels::active().adam(h, grad.data(), s.adam_m.data(), s.adam_v.data(), s.theta.data(),
                         grad.size());
}

void step(OptimizerState& s, std::span<const double> grad, const OptimizerConfig& cfg) {
  if (cfg.method == Method::GD) {
    gd_step(s, grad, cfg.learning_rate);
  } else {
    adam_step(s, grad, cfg);
  }
}

Vector total_gradient(const GradientMatrix& g) {
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(g.d()));
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < g.n(); ++i) k.axpy(1.0, g.row(i).data(), sum.data(), g.d());
  return sum;
}

OptimizerState run(const models::LossModel& model, Vector theta0, const OptimizerConfig& cfg,
                   std::int64_t budget, std::span<const Observer> observers) {
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  if (static_cast<std::size_t>(theta0.size()) != model.dim()) {
    throw std::invalid_argument("initial theta has the wrong dimension");
  }
  cfg.validate();
  OptimizerState state(std::move(theta0));
  for (std::int64_t t = 1; t <= budget; ++t) {
    const Vector theta = state.theta;
    const GradientMatrix g = model.sample_gradients(as_span(theta));
    const Observation obs{t, as_span(theta), g, model.total_loss(as_span(theta))};
    for (const auto& observer : observers) observer(obs);
    const Vector grad = total_gradient(g);
    step(state, as_span(grad), cfg);
  }
  return state;
}

}  // namespace gradstop::optim
