#include "gradstop/baselines.hpp"

#include "gradstop/kernels.hpp"
#include "gradstop/numstats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace gradstop::baselines {
namespace {

// sum_k g_bar_k^2 / (Sigma_kk + tau)
double snr_sum(const GradientMatrix& g) {
  const auto c = numstats::mean_and_centered(g);
  const Eigen::ArrayXd var = c.centered.array().square().colwise().sum().transpose();
  return (c.g_bar.array().square() / (var + kVarianceFloor)).sum();
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

template <typename PairFn>
double pairwise_mean(const GradientMatrix& g, PairFn&& fn) {
  const auto& k = kernels::active();
  const std::size_t n = g.n();
  const std::size_t d = g.d();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      sum += fn(i, j, k.dot(g.row(i).data(), g.row(j).data(), d));
    }
  }
  return sum / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

}  // namespace

std::string_view kind_name(Kind kind) {
  switch (kind) {
    case Kind::EB: return "eb";
    case Kind::GSNR: return "gsnr";
    case Kind::Sign: return "sign";
    case Kind::Cos: return "cos";
    case Kind::GD: return "gd";
  }
  return "unknown";
}

double stat_sign(const GradientMatrix& g) {
  return pairwise_mean(g, [](std::size_t, std::size_t, double ip) { return sign_of(ip); });
}

double stat_cos(const GradientMatrix& g) {
  const auto& k = kernels::active();
  std::vector<double> norms(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) norms[i] = std::sqrt(k.dot(g.row(i).data(), g.row(i).data(), g.d()));
  return pairwise_mean(g, [&](std::size_t i, std::size_t j, double ip) {
    const double denom = norms[i] * norms[j];
    return denom > 0.0 ? ip / denom : 0.0;
  });
}

double stat_gsnr(const GradientMatrix& g) {
  return snr_sum(g) / static_cast<double>(g.d());
}

double stat_eb(const GradientMatrix& g) {
  return 1.0 - static_cast<double>(g.n()) / static_cast<double>(g.d()) * snr_sum(g);
}

double stat_gd(const GradientMatrix& half1, const GradientMatrix& half2) {
  if (half1.d() != half2.d()) throw std::invalid_argument("gradient halves differ in dimension");
  const Vector diff = half1.entries().colwise().mean() - half2.entries().colwise().mean();
  return diff.norm();
}

GdSplit make_gd_split(std::size_t n, std::uint64_t seed) {
  if (n < 4) throw std::invalid_argument("gradient disparity needs at least 4 samples");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  GdSplit split{{idx.begin(), idx.begin() + half}, {idx.begin() + half, idx.end()}};
  std::sort(split.first.begin(), split.first.end());
  std::sort(split.second.begin(), split.second.end());
  return split;
}

double stat_gd(const GradientMatrix& g, const GdSplit& split) {
  return stat_gd(g.select_rows(split.first), g.select_rows(split.second));
}

BaselineStopRule::BaselineStopRule(Kind kind, int patience) : kind_(kind), patience_(patience) {
  if (patience < 1) throw std::invalid_argument("patience must be >= 1");
}

Decision BaselineStopRule::step(std::optional<double> prev, double cur) {
  if (stopped_) throw std::logic_error("baseline rule stepped after it stopped");
  if (kind_ == Kind::EB) {
    stopped_ = cur > 0.0;
    return stopped_ ? Decision::Stop : Decision::Continue;
  }
  if (!prev) return Decision::Continue;
  const bool adverse = kind_ == Kind::GD ? cur > *prev : cur < *prev;
  if (adverse && ++counter_ >= patience_) {
    stopped_ = true;
    return Decision::Stop;
  }
  return Decision::Continue;
}

}  // namespace gradstop::baselines
