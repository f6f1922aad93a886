#include "gradstop/kernels.hpp"

#include <cmath>

namespace gradstop::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void adam_scalar(const AdamHyper& h, const double* g, double* m, double* v,
                 double* theta, std::size_t n) {
  const double c1 = 1.0 - h.beta1;
  const double c2 = 1.0 - h.beta2;
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = h.beta1 * m[i] + c1 * g[i];
    v[i] = h.beta2 * v[i] + c2 * (g[i] * g[i]);
    const double m_hat = m[i] / h.bias1;
    const double v_hat = v[i] / h.bias2;
    theta[i] -= h.learning_rate * m_hat / (std::sqrt(v_hat) + h.eps);
  }
}

}  // namespace

namespace detail {
const KernelTable scalar_table{Isa::Scalar, &dot_scalar, &axpy_scalar, &adam_scalar};
}

}  // namespace gradstop::kernels
