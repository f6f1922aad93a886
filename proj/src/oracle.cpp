#include "gradstop/oracle.hpp"

#include "gradstop/numstats.hpp"

#include <Eigen/Cholesky>
#include <spdlog/spdlog.h>

#include <cmath>
#include <stdexcept>

namespace gradstop::oracle {
namespace {

Vector standard_normal(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector x(static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = normal(rng);
  return x;
}

struct Walk {
  Vector theta;
  double log_p;
  std::size_t accepted = 0;
};

void metropolis_step(const models::LossModel& model, Walk& w, double scale,
                     std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Vector proposal = w.theta + scale * standard_normal(model.dim(), rng);
  const double log_p = -model.total_loss(as_span(proposal));
  const double log_u = std::log(unif(rng));
  if (std::isfinite(log_p) && log_u < log_p - w.log_p) {
    w.theta = proposal;
    w.log_p = log_p;
    ++w.accepted;
  }
}

Walk start(const models::LossModel& model, const Vector& init) {
  if (static_cast<std::size_t>(init.size()) != model.dim()) {
    throw std::invalid_argument("initial theta has the wrong dimension");
  }
  const double log_p = -model.total_loss(as_span(init));
  if (!std::isfinite(log_p)) throw std::invalid_argument("initial theta has non-finite loss");
  return {init, log_p};
}

}  // namespace

PosteriorOracle::PosteriorOracle(Vector theta_star, Eigen::MatrixXd hessian)
    : theta_star_(std::move(theta_star)), hessian_(std::move(hessian)) {
  if (hessian_.rows() != hessian_.cols() || hessian_.rows() != theta_star_.size() ||
      theta_star_.size() < 1) {
    throw std::invalid_argument("hessian must be d x d with d = dim(theta*)");
  }
  if (!hessian_.isApprox(hessian_.transpose(), 1e-12)) {
    throw std::invalid_argument("hessian must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(hessian_);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("hessian must be positive definite");
  const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(hessian_.rows(), hessian_.cols()));
  chol_ = Eigen::LLT<Eigen::MatrixXd>(0.5 * (cov + cov.transpose())).matrixL();
}

Vector PosteriorOracle::marginal_std() const {
  return chol_.rowwise().squaredNorm().cwiseSqrt();
}

Vector PosteriorOracle::exact_sample(std::mt19937_64& rng) const {
  return theta_star_ + chol_ * standard_normal(dim(), rng);
}

Vector PosteriorOracle::exact_sample(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  return exact_sample(rng);
}

double PosteriorOracle::exact_credibility(std::span<const double> theta) const {
  if (theta.size() != dim()) throw std::invalid_argument("theta has the wrong dimension");
  const Vector r = Eigen::Map<const Vector>(theta.data(), theta_star_.size()) - theta_star_;
  const double q = std::max(0.0, r.dot(hessian_ * r));
  return numstats::chi2_sf(q, static_cast<int>(dim()));
}

Vector McmcChain::mean() const { return samples.colwise().mean().transpose(); }

Vector McmcChain::stddev() const {
  if (samples.rows() < 2) throw std::logic_error("chain needs at least two samples");
  const RowMatrix c = samples.rowwise() - samples.colwise().mean();
  return (c.colwise().squaredNorm() / static_cast<double>(samples.rows() - 1)).cwiseSqrt().transpose();
}

McmcChain mcmc_run(const models::LossModel& model, const Vector& init, const McmcOptions& opt) {
  if (opt.n_samples < 1 || opt.thin < 1 || !(opt.step_scale > 0.0)) {
    throw std::invalid_argument("MCMC parameters must be positive");
  }
  std::mt19937_64 rng(opt.seed);
  Walk w = start(model, init);
  for (std::size_t i = 0; i < opt.burn_in; ++i) metropolis_step(model, w, opt.step_scale, rng);
  w.accepted = 0;

  McmcChain chain;
  chain.step_scale = opt.step_scale;
  chain.samples.resize(static_cast<Eigen::Index>(opt.n_samples / opt.thin),
                       static_cast<Eigen::Index>(model.dim()));
  Eigen::Index kept = 0;
  for (std::size_t i = 1; i <= opt.n_samples; ++i) {
    metropolis_step(model, w, opt.step_scale, rng);
    if (i % opt.thin == 0) chain.samples.row(kept++) = w.theta.transpose();
  }
  chain.acceptance_rate = static_cast<double>(w.accepted) / static_cast<double>(opt.n_samples);
  chain.tuning_warning = chain.acceptance_rate < 0.1 || chain.acceptance_rate > 0.6;
  if (chain.tuning_warning) {
    spdlog::warn("MCMC acceptance rate {:.3f} outside [0.1, 0.6] (step scale {:.3g})",
                 chain.acceptance_rate, opt.step_scale);
  }
  return chain;
}

double tune_step_scale(const models::LossModel& model, const Vector& init, double initial_scale,
                       std::uint64_t seed, double target, int rounds,
                       std::size_t steps_per_round) {
  if (!(initial_scale > 0.0) || !(target > 0.0 && target < 1.0) || rounds < 1 ||
      steps_per_round < 1) {
    throw std::invalid_argument("invalid tuning parameters");
  }
  std::mt19937_64 rng(seed);
  Walk w = start(model, init);
  double log_scale = std::log(initial_scale);
  for (int r = 0; r < rounds; ++r) {
    w.accepted = 0;
    for (std::size_t i = 0; i < steps_per_round; ++i) metropolis_step(model, w, std::exp(log_scale), rng);
    const double rate = static_cast<double>(w.accepted) / static_cast<double>(steps_per_round);
    log_scale += 2.0 * (rate - target);
  }
  return std::exp(log_scale);
}

}  // namespace gradstop::oracle
