#include "gradstop/models.hpp"

#include "gradstop/kernels.hpp"

#include <Eigen/QR>

#include <cmath>
#include <random>
#include <stdexcept>

namespace gradstop::models {
namespace {

void check_theta(std::span<const double> theta, std::size_t dim) {
  if (theta.size() != dim) throw std::invalid_argument("theta has the wrong dimension");
}

void check_index(std::size_t i, std::size_t n) {
  if (i >= n) throw std::out_of_range("sample index out of range");
}

Eigen::Map<const Vector> view(std::span<const double> theta) {
  return {theta.data(), static_cast<Eigen::Index>(theta.size())};
}

// Haar-distributed orthogonal matrix.
Eigen::MatrixXd random_rotation(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const auto dd = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd m(dd, dd);
  for (Eigen::Index j = 0; j < dd; ++j)
    for (Eigen::Index i = 0; i < dd; ++i) m(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dd; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace

double LossModel::total_loss(std::span<const double> theta) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < n_samples(); ++i) sum += sample_loss(i, theta);
  return sum;
}

QuadraticModel::QuadraticModel(Eigen::MatrixXd a, RowMatrix centers)
    : a_(std::move(a)), centers_(std::move(centers)) {
  if (a_.rows() != a_.cols() || a_.rows() < 1) throw std::invalid_argument("A must be square");
  if (centers_.cols() != a_.rows() || centers_.rows() < 1) {
    throw std::invalid_argument("centers must be n x d");
  }
  if (!a_.isApprox(a_.transpose(), 1e-12)) throw std::invalid_argument("A must be symmetric");
  if (a_.llt().info() != Eigen::Success) throw std::invalid_argument("A must be positive definite");

  const double n = static_cast<double>(centers_.rows());
  theta_star_ = centers_.colwise().mean().transpose();
  scaled_centers_ = (centers_ * a_) / n;  // A symmetric: row i = (A c_i)^T / n
  offsets_.resize(centers_.rows());
  for (Eigen::Index i = 0; i < centers_.rows(); ++i) {
    const Vector r = theta_star_ - centers_.row(i).transpose();
    offsets_(i) = -r.dot(a_ * r) / (2.0 * n);
  }
}

QuadraticModel QuadraticModel::make(std::size_t d, std::size_t n, std::span<const double> spectrum,
                                    std::uint64_t seed) {
  if (d < 1 || n < 1) throw std::invalid_argument("d and n must be positive");
  if (spectrum.size() != d) throw std::invalid_argument("spectrum must have d entries");
  for (double s : spectrum) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("spectrum must be positive");
  }
  std::mt19937_64 rng(seed);
  const Eigen::MatrixXd q = random_rotation(d, rng);
  const Eigen::Map<const Vector> lam(spectrum.data(), static_cast<Eigen::Index>(d));
  Eigen::MatrixXd a = q * lam.asDiagonal() * q.transpose();
  a = (0.5 * (a + a.transpose())).eval();

  // c_i = sqrt(n) Q diag(lam^-1/2) xi_i
  const Eigen::MatrixXd factor = std::sqrt(static_cast<double>(n)) * q * lam.cwiseSqrt().cwiseInverse().asDiagonal();
  std::normal_distribution<double> normal;
  RowMatrix xi(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < xi.rows(); ++i)
    for (Eigen::Index j = 0; j < xi.cols(); ++j) xi(i, j) = normal(rng);
  RowMatrix centers = xi * factor.transpose();
  return QuadraticModel(std::move(a), std::move(centers));
}

double QuadraticModel::sample_loss(std::size_t i, std::span<const double> theta) const {
  check_theta(theta, dim());
  check_index(i, n_samples());
  const Vector r = view(theta) - centers_.row(static_cast<Eigen::Index>(i)).transpose();
  return r.dot(a_ * r) / (2.0 * static_cast<double>(n_samples())) + offsets_(static_cast<Eigen::Index>(i));
}

double QuadraticModel::total_loss(std::span<const double> theta) const {
  check_theta(theta, dim());
  const Vector r = view(theta) - theta_star_;
  return 0.5 * r.dot(a_ * r);
}

GradientMatrix QuadraticModel::sample_gradients(std::span<const double> theta) const {
  check_theta(theta, dim());
  // g_i = A theta / n - A c_i / n
  const Vector shared = (a_ * view(theta)) / static_cast<double>(n_samples());
  RowMatrix rows = (-scaled_centers_).rowwise() + shared.transpose();
  return GradientMatrix(std::move(rows));
}

std::vector<double> log_spaced_spectrum(std::size_t d, double lo, double hi) {
  if (d < 1 || !(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("invalid spectrum range");
  std::vector<double> out(d);
  if (d == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (std::log(hi) - std::log(lo)) / static_cast<double>(d - 1);
  for (std::size_t k = 0; k < d; ++k) out[k] = std::exp(std::log(lo) + step * static_cast<double>(k));
  out.back() = hi;
  return out;
}

double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

LogisticModel::LogisticModel(const RowMatrix& features, std::span<const int> labels,
                             double prior_precision)
    : lambda_(prior_precision) {
  if (features.rows() < 1) throw std::invalid_argument("logistic model needs samples");
  if (labels.size() != static_cast<std::size_t>(features.rows())) {
    throw std::invalid_argument("labels and features differ in length");
  }
  if (!(prior_precision >= 0.0)) throw std::invalid_argument("prior precision must be >= 0");
  design_.resize(features.rows(), features.cols() + 1);
  design_.leftCols(features.cols()) = features;
  design_.col(features.cols()).setOnes();
  signs_.reserve(labels.size());
  for (int y : labels) {
    if (y != 0 && y != 1) throw std::invalid_argument("labels must be 0 or 1");
    signs_.push_back(y == 1 ? 1.0 : -1.0);
  }
}

double LogisticModel::margin(std::size_t i, std::span<const double> theta) const {
  return kernels::active().dot(design_.data() + i * dim(), theta.data(), dim());
}

double LogisticModel::sample_loss(std::size_t i, std::span<const double> theta) const {
  check_theta(theta, dim());
  check_index(i, n_samples());
  const double sq = kernels::active().dot(theta.data(), theta.data(), dim());
  return softplus(-signs_[i] * margin(i, theta)) +
         lambda_ / (2.0 * static_cast<double>(n_samples())) * sq;
}

GradientMatrix LogisticModel::sample_gradients(std::span<const double> theta) const {
  check_theta(theta, dim());
  const auto& k = kernels::active();
  const std::size_t n = n_samples();
  const std::size_t d = dim();
  const Vector prior = view(theta) * (lambda_ / static_cast<double>(n));
  RowMatrix rows(design_.rows(), design_.cols());
  for (std::size_t i = 0; i < n; ++i) {
    double* row = rows.data() + i * d;
    std::copy(prior.data(), prior.data() + d, row);
    const double coef = -signs_[i] * sigmoid(-signs_[i] * margin(i, theta));
    k.axpy(coef, design_.data() + i * d, row, d);
  }
  return GradientMatrix(std::move(rows));
}

double LogisticModel::mean_log_loss(std::span<const double> theta) const {
  check_theta(theta, dim());
  double sum = 0.0;
  for (std::size_t i = 0; i < n_samples(); ++i) sum += softplus(-signs_[i] * margin(i, theta));
  return sum / static_cast<double>(n_samples());
}

double LogisticModel::accuracy(std::span<const double> theta) const {
  check_theta(theta, dim());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n_samples(); ++i) hits += signs_[i] * margin(i, theta) > 0.0;
  return static_cast<double>(hits) / static_cast<double>(n_samples());
}

}  // namespace gradstop::models
