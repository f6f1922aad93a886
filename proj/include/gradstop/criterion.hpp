#pragma once
// Credibility-based stopping: the credible value of a gradient matrix, the
// stopping controller that matches it against a target level u, and the
// uncertainty of scalar functions of the parameters.

#include "gradstop/gradient_matrix.hpp"
#include "gradstop/numstats.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace gradstop::criterion {

struct CredibleValue {
  double s_hat;
  double z;
  std::int64_t iteration;
};

// s_hat = 1 - F_{chi2_d}(kappa * z) with z = n g_bar^T Sigma_hat^-1 g_bar.
// kappa is the loss scale relating the training loss to a negative log
// posterior. Propagates numstats::DegenerateCovariance.
CredibleValue credible_value(const GradientMatrix& g, std::int64_t iteration = 0,
                             double kappa = 1.0,
                             const numstats::ShrinkageOptions& options = {});

struct Stochastic {
  std::uint64_t seed;
};

struct DeterministicThreshold {
  double u;
};

using StopMode = std::variant<Stochastic, DeterministicThreshold>;

enum class Decision { Continue, NewBest, Stop };

// Tracks the best-so-far parameter copy.
//
// Stochastic mode draws u ~ U(0, 1) once and keeps the iterate whose credible
// value is closest to u over the whole budget (ties keep the earlier one); it
// never returns Stop. DeterministicThreshold stops at the first iterate with
// s_hat >= u; observing after that is a logic error.
class StopController {
 public:
  explicit StopController(StopMode mode);

  Decision observe(std::span<const double> theta, const CredibleValue& s);

  double u() const { return u_; }
  bool stochastic() const { return std::holds_alternative<Stochastic>(mode_); }
  bool stopped() const { return stopped_; }
  // Infinity until the first observation that sets a best.
  double best_s() const { return best_s_; }
  std::optional<std::int64_t> best_iteration() const { return best_iteration_; }
  const std::vector<double>& best_theta() const { return best_theta_; }

 private:
  StopMode mode_;
  double u_;
  double best_s_;
  std::optional<std::int64_t> best_iteration_;
  std::vector<double> best_theta_;
  bool stopped_ = false;
};

struct UncertaintyEstimate {
  double sigma_f;
  Vector f_grad;
};

// sigma = sqrt(f'^T Sigma_hat^-1 f' / (kappa n)), with the same shrunk
// covariance as the credible value. G should be taken near the optimum.
UncertaintyEstimate uncertainty_of(const Vector& f_grad, const GradientMatrix& g,
                                   double kappa = 1.0,
                                   const numstats::ShrinkageOptions& options = {});

// Per-coordinate standard deviations, i.e. uncertainty_of(e_j, ...) for all j.
Vector parameter_uncertainty(const GradientMatrix& g, double kappa = 1.0,
                             const numstats::ShrinkageOptions& options = {});

}  // namespace gradstop::criterion
