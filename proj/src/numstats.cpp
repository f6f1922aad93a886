#include "gradstop/numstats.hpp"

#include "gradstop/kernels.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gradstop::numstats {
namespace {

constexpr int kMaxGammaIterations = 200000;
constexpr double kGammaEps = 1e-16;
constexpr double kTiny = 1e-300;

// log(x^a e^-x / Gamma(a))
double gamma_log_prefactor(double a, double x) {
  return a * std::log(x) - x - std::lgamma(a);
}

// P(a, x) by its power series; converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int k = 0; k < kMaxGammaIterations; ++k) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaEps) break;
  }
  return sum * std::exp(gamma_log_prefactor(a, x));
}

// Q(a, x) by the Legendre continued fraction (modified Lentz), for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxGammaIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kGammaEps) break;
  }
  return std::exp(gamma_log_prefactor(a, x)) * h;
}

void check_chi2_args(double x, int d) {
  if (d < 1) throw std::domain_error("chi2: degrees of freedom must be >= 1");
  if (!(x >= 0.0)) throw std::domain_error("chi2: x must be non-negative");
}

bool all_zero(const Vector& v) {
  return std::all_of(v.data(), v.data() + v.size(), [](double x) { return x == 0.0; });
}

// Gram matrix centered * centered^T (n x n).
Eigen::MatrixXd gram(const RowMatrix& centered) {
  const auto n = centered.rows();
  const auto d = static_cast<std::size_t>(centered.cols());
  const auto& k = kernels::active();
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* ri = centered.data() + i * centered.cols();
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = k.dot(ri, centered.data() + j * centered.cols(), d);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

}  // namespace

double chi2_cdf(double x, int d) {
  check_chi2_args(x, d);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double a = 0.5 * d;
  const double h = 0.5 * x;
  if (h < a + 1.0) return std::min(1.0, gamma_p_series(a, h));
  return std::max(0.0, 1.0 - gamma_q_fraction(a, h));
}

double chi2_sf(double x, int d) {
  check_chi2_args(x, d);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double a = 0.5 * d;
  const double h = 0.5 * x;
  if (h < a + 1.0) return std::max(0.0, 1.0 - gamma_p_series(a, h));
  return std::min(1.0, gamma_q_fraction(a, h));
}

CenteredGradients mean_and_centered(const GradientMatrix& g) {
  const std::size_t n = g.n();
  const std::size_t d = g.d();
  const auto& k = kernels::active();

  Vector sum = Vector::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) k.axpy(1.0, g.row(i).data(), sum.data(), d);
  Vector g_bar = sum / static_cast<double>(n);

  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  RowMatrix centered = (g.entries().rowwise() - g_bar.transpose()) * inv_sqrt_n;
  return {std::move(g_bar), std::move(centered)};
}

Eigen::MatrixXd covariance(const RowMatrix& centered) {
  const auto n = centered.rows();
  const auto d = static_cast<std::size_t>(centered.cols());
  const auto& k = kernels::active();
  // Accumulated as n rank-1 updates; out(j, l) and out(l, j) see identical
  // operations, so the result is exactly symmetric.
  RowMatrix acc = RowMatrix::Zero(centered.cols(), centered.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* r = centered.data() + i * centered.cols();
    for (std::size_t j = 0; j < d; ++j) k.axpy(r[j], r, acc.data() + j * d, d);
  }
  return acc;
}

CovarianceTraces covariance_traces(const RowMatrix& centered) {
  const auto n = centered.rows();
  const auto d = centered.cols();
  const auto& k = kernels::active();
  double trace = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* r = centered.data() + i * d;
    trace += k.dot(r, r, static_cast<std::size_t>(d));
  }
  // tr(S^2) = ||G^T G||_F^2 = ||G G^T||_F^2
  const double trace_sq = d <= n ? covariance(centered).squaredNorm() : gram(centered).squaredNorm();
  return {trace, trace_sq};
}

double oas_epsilon(const CovarianceTraces& t, std::size_t n, std::size_t d) {
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  const double num = (1.0 - 2.0 / dd) * t.trace_sq + t.trace * t.trace;
  const double den = (nn + 1.0 - 2.0 / dd) * (t.trace_sq - t.trace * t.trace / dd);
  if (!(den > 0.0)) return 1.0;
  return std::clamp(num / den, 0.0, 1.0);
}

double oas_epsilon(const RowMatrix& centered) {
  return oas_epsilon(covariance_traces(centered), static_cast<std::size_t>(centered.rows()),
                     static_cast<std::size_t>(centered.cols()));
}

CovarianceEstimate covariance_estimate(const GradientMatrix& g, std::optional<double> epsilon) {
  const auto c = mean_and_centered(g);
  const Eigen::MatrixXd sigma = covariance(c.centered);
  const double trace = sigma.trace();
  const double eps = epsilon ? *epsilon : oas_epsilon(c.centered);
  const auto d = static_cast<double>(g.d());
  Eigen::MatrixXd shrunk = (1.0 - eps) * sigma;
  shrunk.diagonal().array() += eps * trace / d;
  return {std::move(shrunk), eps, trace};
}

InversionPath default_path(std::size_t n, std::size_t d) {
  return d > n ? InversionPath::Woodbury : InversionPath::Direct;
}

void ShrunkCovariance::SpdSolver::compute(const Eigen::MatrixXd& a) {
  llt_.compute(a);
  pivoted_ = llt_.info() != Eigen::Success;
  if (pivoted_) {
    spdlog::warn("Cholesky failed on a {}x{} shrunk covariance; using pivoted LDL^T", a.rows(),
                 a.cols());
    ldlt_.compute(a);
  }
}

Eigen::MatrixXd ShrunkCovariance::SpdSolver::solve(const Eigen::MatrixXd& rhs) const {
  return pivoted_ ? Eigen::MatrixXd(ldlt_.solve(rhs)) : Eigen::MatrixXd(llt_.solve(rhs));
}

ShrunkCovariance::ShrunkCovariance(const RowMatrix& centered, const ShrinkageOptions& options)
    : dim_(static_cast<std::size_t>(centered.cols())) {
  const auto n = static_cast<std::size_t>(centered.rows());
  path_ = options.path.value_or(default_path(n, dim_));
  // The covariance (Direct) or the Gram matrix (Woodbury) also yields the traces.
  Eigen::MatrixXd base = path_ == InversionPath::Direct ? covariance(centered) : gram(centered);
  const CovarianceTraces traces{base.trace(), base.squaredNorm()};
  trace_ = traces.trace;
  if (!(trace_ > 0.0)) throw DegenerateCovariance("gradient covariance has zero trace");
  epsilon_ = options.epsilon ? *options.epsilon : oas_epsilon(traces, n, dim_);
  if (epsilon_ < 0.0 || epsilon_ > 1.0) throw std::invalid_argument("epsilon must lie in [0, 1]");

  const double ridge = epsilon_ * trace_ / static_cast<double>(dim_);
  if (path_ == InversionPath::Woodbury) {
    if (!(ridge > 0.0)) throw std::invalid_argument("Woodbury inversion needs epsilon > 0");
    delta_ = 1.0 / ridge;
    centered_ = centered;
  }
  // Direct: (1 - eps) Sigma + ridge I_d.  Woodbury: (1 - eps) G G^T + delta^-1 I_n.
  base *= 1.0 - epsilon_;
  base.diagonal().array() += ridge;
  solver_.compute(base);
}

Vector ShrunkCovariance::solve(const Vector& rhs) const {
  if (static_cast<std::size_t>(rhs.size()) != dim_) throw std::invalid_argument("dimension mismatch");
  if (path_ == InversionPath::Direct) return solver_.solve(rhs);

  const auto& k = kernels::active();
  const auto n = centered_.rows();
  Vector projected(n);
  for (Eigen::Index i = 0; i < n; ++i) projected(i) = k.dot(centered_.data() + i * dim_, rhs.data(), dim_);
  const Vector w = solver_.solve(projected);
  // delta (v - (1 - eps) G^T w)
  Vector out = rhs;
  for (Eigen::Index i = 0; i < n; ++i) {
    k.axpy(-(1.0 - epsilon_) * w(i), centered_.data() + i * dim_, out.data(), dim_);
  }
  return delta_ * out;
}

double ShrunkCovariance::inverse_quadratic(const Vector& v) const {
  return kernels::dot(as_span(v), as_span(solve(v)));
}

Vector ShrunkCovariance::inverse_diagonal() const {
  if (path_ == InversionPath::Direct) {
    const auto d = static_cast<Eigen::Index>(dim_);
    return solver_.solve(Eigen::MatrixXd::Identity(d, d)).diagonal();
  }
  // delta (1 - (1 - eps) sum_a G_ak (M^-1 G)_ak)
  const Eigen::MatrixXd m_inv_g = solver_.solve(Eigen::MatrixXd(centered_));
  const Eigen::ArrayXd col = (centered_.array() * m_inv_g.array()).colwise().sum().transpose();
  return (delta_ * (1.0 - (1.0 - epsilon_) * col)).matrix();
}

QuadStat quad_stat(const GradientMatrix& g, const ShrinkageOptions& options) {
  auto c = mean_and_centered(g);
  const auto path = options.path.value_or(default_path(g.n(), g.d()));
  if (all_zero(c.g_bar)) return {0.0, std::move(c.g_bar), path};
  const ShrunkCovariance cov(c.centered, options);
  const double z = static_cast<double>(g.n()) * cov.inverse_quadratic(c.g_bar);
  return {std::max(0.0, z), std::move(c.g_bar), cov.path()};
}

}  // namespace gradstop::numstats
