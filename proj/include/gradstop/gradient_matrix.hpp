#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <stdexcept>

namespace gradstop {

// Rows are samples, so every per-sample vector is contiguous.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
inline std::span<double> as_span(Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// n x d matrix of per-sample loss gradients g_i(theta) at one parameter value.
// Holds at least two rows and only finite entries.
class GradientMatrix {
 public:
  explicit GradientMatrix(RowMatrix entries);

  std::size_t n() const { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(entries_.cols()); }

  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * d(), d()};
  }

  const RowMatrix& entries() const { return entries_; }

  // Rows selected by index, in the given order.
  GradientMatrix select_rows(std::span<const std::size_t> rows) const;

  // Every entry multiplied by `factor`.
  GradientMatrix scaled(double factor) const;

 private:
  RowMatrix entries_;
};

}  // namespace gradstop
