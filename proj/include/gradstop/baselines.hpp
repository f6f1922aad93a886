#pragma once
// Validation-free comparison criteria computed from the same per-sample
// gradient matrix, with their stop rules.

#include "gradstop/gradient_matrix.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace gradstop::baselines {

enum class Kind { EB, GSNR, Sign, Cos, GD };

std::string_view kind_name(Kind kind);

// Variance floor in GSNR / EB.
inline constexpr double kVarianceFloor = 1e-12;

struct BaselineStat {
  Kind kind;
  double value;
  std::int64_t iteration;
};

// Mean of sign(g_i . g_j) over unordered pairs i < j.
double stat_sign(const GradientMatrix& g);
// Mean cosine similarity over unordered pairs; zero-norm rows contribute 0.
double stat_cos(const GradientMatrix& g);
// (1/d) sum_k g_bar_k^2 / (Sigma_kk + tau)
double stat_gsnr(const GradientMatrix& g);
// 1 - (n/d) sum_k g_bar_k^2 / (Sigma_kk + tau); fires when positive.
double stat_eb(const GradientMatrix& g);
// || g_bar(half1) - g_bar(half2) ||_2
double stat_gd(const GradientMatrix& half1, const GradientMatrix& half2);

// Disjoint halves of the sample axis, fixed for a whole run.
struct GdSplit {
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
};

GdSplit make_gd_split(std::size_t n, std::uint64_t seed);
double stat_gd(const GradientMatrix& g, const GdSplit& split);

enum class Decision { Continue, Stop };

// GD stops on the patience-th increase, GSNR/Sign/Cos on the patience-th
// decrease (cumulative, equal values never count), EB as soon as the value is
// positive.
class BaselineStopRule {
 public:
  explicit BaselineStopRule(Kind kind, int patience = 5);

  // prev is ignored for EB and may be empty for the first observation.
  Decision step(std::optional<double> prev, double cur);

  Kind kind() const { return kind_; }
  int counter() const { return counter_; }
  int patience() const { return patience_; }
  bool stopped() const { return stopped_; }

 private:
  Kind kind_;
  int counter_ = 0;
  int patience_;
  bool stopped_ = false;
};

}  // namespace gradstop::baselines
