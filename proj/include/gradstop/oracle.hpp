#pragma once
// Ground truth: the exact Gaussian posterior of the quadratic model, and a
// random-walk Metropolis sampler for any LossModel's posterior exp(-L).

#include "gradstop/gradient_matrix.hpp"
#include "gradstop/models.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <span>

namespace gradstop::oracle {

// N(theta*, H^-1).
class PosteriorOracle {
 public:
  // Throws std::invalid_argument unless H is symmetric positive definite.
  PosteriorOracle(Vector theta_star, Eigen::MatrixXd hessian);

  static PosteriorOracle of(const models::QuadraticModel& m) {
    return {m.theta_star(), m.hessian()};
  }

  std::size_t dim() const { return static_cast<std::size_t>(theta_star_.size()); }
  const Vector& theta_star() const { return theta_star_; }
  const Eigen::MatrixXd& hessian() const { return hessian_; }
  // Lower triangular L with L L^T = H^-1.
  const Eigen::MatrixXd& chol() const { return chol_; }
  // sqrt((H^-1)_jj)
  Vector marginal_std() const;

  Vector exact_sample(std::mt19937_64& rng) const;
  Vector exact_sample(std::uint64_t seed) const;

  // 1 - F_chi2_d((theta - theta*)^T H (theta - theta*))
  double exact_credibility(std::span<const double> theta) const;

 private:
  Vector theta_star_;
  Eigen::MatrixXd hessian_;
  Eigen::MatrixXd chol_;
};

struct McmcOptions {
  // Post-burn-in iterations; every `thin`-th state is kept.
  std::size_t n_samples = 200000;
  std::size_t burn_in = 10000;
  std::size_t thin = 10;
  double step_scale = 0.1;
  std::uint64_t seed = 0;
};

struct McmcChain {
  RowMatrix samples;
  // Fraction of accepted proposals after burn-in.
  double acceptance_rate = 0.0;
  double step_scale = 0.0;
  // Set when acceptance_rate falls outside [0.1, 0.6].
  bool tuning_warning = false;

  Vector mean() const;
  Vector stddev() const;
};

// Random-walk Metropolis on log p = -L(theta) with N(0, step_scale^2 I) proposals.
McmcChain mcmc_run(const models::LossModel& model, const Vector& init, const McmcOptions& opt);

// Adjusts the proposal scale over short pre-runs until the acceptance rate is
// near `target`; returns the tuned scale.
double tune_step_scale(const models::LossModel& model, const Vector& init, double initial_scale,
                       std::uint64_t seed, double target = 0.3, int rounds = 30,
                       std::size_t steps_per_round = 1000);

}  // namespace gradstop::oracle
