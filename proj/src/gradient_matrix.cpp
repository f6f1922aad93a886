#include "gradstop/gradient_matrix.hpp"

#include <string>

namespace gradstop {

GradientMatrix::GradientMatrix(RowMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 2) {
    throw std::invalid_argument("gradient matrix needs at least 2 samples, got " +
                                std::to_string(entries_.rows()));
  }
  if (entries_.cols() < 1) {
    throw std::invalid_argument("gradient matrix needs at least one parameter");
  }
  if (!entries_.allFinite()) {
    throw std::invalid_argument("gradient matrix contains non-finite entries");
  }
}

GradientMatrix GradientMatrix::select_rows(std::span<const std::size_t> rows) const {
  RowMatrix out(static_cast<Eigen::Index>(rows.size()), entries_.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= n()) throw std::out_of_range("row index out of range");
    out.row(static_cast<Eigen::Index>(k)) = entries_.row(static_cast<Eigen::Index>(rows[k]));
  }
  return GradientMatrix(std::move(out));
}

GradientMatrix GradientMatrix::scaled(double factor) const {
  return GradientMatrix(entries_ * factor);
}

}  // namespace gradstop
