#pragma once
// Numerical kernels behind the credibility statistic: chi-squared CDF, gradient
// covariance, OAS shrinkage and the quadratic form n * g_bar^T Sigma_hat^-1 g_bar.

#include "gradstop/gradient_matrix.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <stdexcept>

namespace gradstop::numstats {

// Regularized lower incomplete gamma P(d/2, x/2). Throws std::domain_error for
// x < 0, NaN or d < 1.
double chi2_cdf(double x, int d);

// Upper tail 1 - chi2_cdf(x, d), evaluated directly so small tails keep their
// relative precision.
double chi2_sf(double x, int d);

struct CenteredGradients {
  Vector g_bar;
  // (G - 1 g_bar^T) / sqrt(n), so centered^T * centered is the covariance.
  RowMatrix centered;
};

CenteredGradients mean_and_centered(const GradientMatrix& g);

// Sigma_G = centered^T * centered (d x d).
Eigen::MatrixXd covariance(const RowMatrix& centered);

struct CovarianceTraces {
  double trace;     // tr(Sigma)
  double trace_sq;  // tr(Sigma^2)
};

// Computed through the smaller of the d x d covariance and the n x n Gram matrix.
CovarianceTraces covariance_traces(const RowMatrix& centered);

// Oracle-approximating shrinkage coefficient in [0, 1]. Degenerate inputs
// (zero or isotropic covariance, d = 1) give 1.
double oas_epsilon(const RowMatrix& centered);
double oas_epsilon(const CovarianceTraces& traces, std::size_t n, std::size_t d);

// Raised when tr(Sigma_G) = 0 but the mean gradient is not zero.
class DegenerateCovariance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InversionPath { Direct, Woodbury };

struct ShrinkageOptions {
  // Defaults to Woodbury when d > n, Direct otherwise.
  std::optional<InversionPath> path;
  // Overrides the OAS coefficient.
  std::optional<double> epsilon;
};

struct CovarianceEstimate {
  Eigen::MatrixXd sigma_hat;
  double epsilon;
  double trace_sigma;
};

// Materialized (1 - eps) Sigma_G + eps tr(Sigma_G) I / d.
CovarianceEstimate covariance_estimate(const GradientMatrix& g,
                                       std::optional<double> epsilon = std::nullopt);

// Applies the inverse of the shrunk covariance without forming it when d > n.
class ShrunkCovariance {
 public:
  ShrunkCovariance(const RowMatrix& centered, const ShrinkageOptions& options = {});

  Vector solve(const Vector& rhs) const;
  // v^T Sigma_hat^-1 v
  double inverse_quadratic(const Vector& v) const;
  // diag(Sigma_hat^-1)
  Vector inverse_diagonal() const;

  double epsilon() const { return epsilon_; }
  double trace() const { return trace_; }
  InversionPath path() const { return path_; }
  std::size_t dim() const { return dim_; }

 private:
  // Cholesky first, pivoted LDL^T if the matrix is not numerically PD.
  class SpdSolver {
   public:
    void compute(const Eigen::MatrixXd& a);
    Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

   private:
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::LDLT<Eigen::MatrixXd> ldlt_;
    bool pivoted_ = false;
  };

  InversionPath path_;
  double epsilon_ = 1.0;
  double trace_ = 0.0;
  std::size_t dim_ = 0;
  // Woodbury only: centered gradients and delta = (eps tr / d)^-1.
  RowMatrix centered_;
  double delta_ = 0.0;
  SpdSolver solver_;
};

struct QuadStat {
  double z;
  Vector g_bar;
  InversionPath path;
};

QuadStat quad_stat(const GradientMatrix& g, const ShrinkageOptions& options = {});

InversionPath default_path(std::size_t n, std::size_t d);

}  // namespace gradstop::numstats
