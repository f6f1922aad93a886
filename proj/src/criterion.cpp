#include "gradstop/criterion.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace gradstop::criterion {
namespace {

void check_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("kappa must be a positive finite number");
  }
}

double initial_u(const StopMode& mode) {
  if (const auto* det = std::get_if<DeterministicThreshold>(&mode)) {
    if (!(det->u >= 0.0 && det->u <= 1.0)) {
      throw std::invalid_argument("threshold u must lie in [0, 1]");
    }
    return det->u;
  }
  std::mt19937_64 rng(std::get<Stochastic>(mode).seed);
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace

CredibleValue credible_value(const GradientMatrix& g, std::int64_t iteration, double kappa,
                             const numstats::ShrinkageOptions& options) {
  check_kappa(kappa);
  const auto q = numstats::quad_stat(g, options);
  const double z = kappa * q.z;
  return {numstats::chi2_sf(z, static_cast<int>(g.d())), z, iteration};
}

StopController::StopController(StopMode mode)
    : mode_(mode), u_(initial_u(mode)), best_s_(std::numeric_limits<double>::infinity()) {}

Decision StopController::observe(std::span<const double> theta, const CredibleValue& s) {
  if (stopped_) throw std::logic_error("StopController observed after it stopped");

  if (!stochastic()) {
    if (s.s_hat >= u_) {
      best_theta_.assign(theta.begin(), theta.end());
      best_s_ = s.s_hat;
      best_iteration_ = s.iteration;
      stopped_ = true;
      return Decision::Stop;
    }
    return Decision::Continue;
  }

  if (std::abs(s.s_hat - u_) < std::abs(best_s_ - u_)) {
    best_theta_.assign(theta.begin(), theta.end());
    best_s_ = s.s_hat;
    best_iteration_ = s.iteration;
    return Decision::NewBest;
  }
  return Decision::Continue;
}

UncertaintyEstimate uncertainty_of(const Vector& f_grad, const GradientMatrix& g, double kappa,
                                   const numstats::ShrinkageOptions& options) {
  check_kappa(kappa);
  if (static_cast<std::size_t>(f_grad.size()) != g.d()) {
    throw std::invalid_argument("f_grad dimension does not match the gradient matrix");
  }
  if (f_grad.isZero(0.0)) return {0.0, f_grad};
  const auto c = numstats::mean_and_centered(g);
  const numstats::ShrunkCovariance cov(c.centered, options);
  const double q = std::max(0.0, cov.inverse_quadratic(f_grad));
  return {std::sqrt(q / (kappa * static_cast<double>(g.n()))), f_grad};
}

Vector parameter_uncertainty(const GradientMatrix& g, double kappa,
                             const numstats::ShrinkageOptions& options) {
  check_kappa(kappa);
  const auto c = numstats::mean_and_centered(g);
  const numstats::ShrunkCovariance cov(c.centered, options);
  const double scale = 1.0 / (kappa * static_cast<double>(g.n()));
  return (cov.inverse_diagonal().array().max(0.0) * scale).sqrt().matrix();
}

}  // namespace gradstop::criterion
