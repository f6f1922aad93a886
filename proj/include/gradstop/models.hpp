#pragma once
// Loss models written as a sum of per-sample terms l_i(theta), each exposing
// its per-sample gradients.

#include "gradstop/gradient_matrix.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gradstop::models {

class LossModel {
 public:
  virtual ~LossModel() = default;

  virtual std::size_t dim() const = 0;
  virtual std::size_t n_samples() const = 0;

  // Throws std::out_of_range for i >= n_samples().
  virtual double sample_loss(std::size_t i, std::span<const double> theta) const = 0;
  // Row i is the gradient of l_i at theta.
  virtual GradientMatrix sample_gradients(std::span<const double> theta) const = 0;

  // L(theta) = sum_i l_i(theta)
  virtual double total_loss(std::span<const double> theta) const;
};

// Per-sample quadratics l_i = (theta - c_i)^T A (theta - c_i) / (2n) + offset_i
// sharing one SPD matrix A, so that:
//   L(theta) = (theta - theta*)^T H (theta - theta*) / 2 with H = A, theta* = mean(c_i),
//   the gradient covariance does not depend on theta,
//   and the exact posterior is N(theta*, H^-1).
class QuadraticModel final : public LossModel {
 public:
  QuadraticModel(Eigen::MatrixXd a, RowMatrix centers);

  // A has the given eigenvalues in a random orthonormal basis; centers are
  // drawn from N(0, n A^-1), which makes n * Sigma_G an unbiased estimate of H.
  static QuadraticModel make(std::size_t d, std::size_t n, std::span<const double> spectrum,
                             std::uint64_t seed);

  std::size_t dim() const override { return static_cast<std::size_t>(a_.rows()); }
  std::size_t n_samples() const override { return static_cast<std::size_t>(centers_.rows()); }
  double sample_loss(std::size_t i, std::span<const double> theta) const override;
  GradientMatrix sample_gradients(std::span<const double> theta) const override;
  double total_loss(std::span<const double> theta) const override;

  const Vector& theta_star() const { return theta_star_; }
  const Eigen::MatrixXd& hessian() const { return a_; }
  const RowMatrix& centers() const { return centers_; }

 private:
  Eigen::MatrixXd a_;
  RowMatrix centers_;
  // Row i = A c_i / n.
  RowMatrix scaled_centers_;
  Vector offsets_;
  Vector theta_star_;
};

// d values log-spaced on [lo, hi].
std::vector<double> log_spaced_spectrum(std::size_t d, double lo, double hi);

// L2-regularised logistic regression on standardized features with an
// appended constant column (the bias is the last parameter):
//   l_i = log(1 + exp(-y_i x_i^T theta)) + (lambda / 2n) ||theta||^2, y_i in {-1, +1}.
class LogisticModel final : public LossModel {
 public:
  // labels in {0, 1}; features are n x p, dim() is p + 1.
  LogisticModel(const RowMatrix& features, std::span<const int> labels, double prior_precision);

  std::size_t dim() const override { return static_cast<std::size_t>(design_.cols()); }
  std::size_t n_samples() const override { return static_cast<std::size_t>(design_.rows()); }
  double sample_loss(std::size_t i, std::span<const double> theta) const override;
  GradientMatrix sample_gradients(std::span<const double> theta) const override;

  // Mean negative log-likelihood (no prior term).
  double mean_log_loss(std::span<const double> theta) const;
  // Fraction of samples with sign(x^T theta) matching the label; ties count as 0.
  double accuracy(std::span<const double> theta) const;

  double prior_precision() const { return lambda_; }
  const RowMatrix& design() const { return design_; }

 private:
  double margin(std::size_t i, std::span<const double> theta) const;

  RowMatrix design_;
  std::vector<double> signs_;
  double lambda_;
};

double softplus(double t);
double sigmoid(double t);

}  // namespace gradstop::models
