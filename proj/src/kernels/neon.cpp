#include "gradstop/kernels.hpp"

#include <arm_neon.h>

#include <cmath>

namespace gradstop::kernels {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc = std::fma(a[i], b[i], acc);
  return acc;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void adam_neon(const AdamHyper& h, const double* g, double* m, double* v,
               double* theta, std::size_t n) {
  const float64x2_t b1 = vdupq_n_f64(h.beta1);
  const float64x2_t b2 = vdupq_n_f64(h.beta2);
  const float64x2_t c1 = vdupq_n_f64(1.0 - h.beta1);
  const float64x2_t c2 = vdupq_n_f64(1.0 - h.beta2);
  const float64x2_t bias1 = vdupq_n_f64(h.bias1);
  const float64x2_t bias2 = vdupq_n_f64(h.bias2);
  const float64x2_t lr = vdupq_n_f64(h.learning_rate);
  const float64x2_t eps = vdupq_n_f64(h.eps);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vg = vld1q_f64(g + i);
    const float64x2_t vm = vaddq_f64(vmulq_f64(b1, vld1q_f64(m + i)), vmulq_f64(c1, vg));
    const float64x2_t vv =
        vaddq_f64(vmulq_f64(b2, vld1q_f64(v + i)), vmulq_f64(c2, vmulq_f64(vg, vg)));
    vst1q_f64(m + i, vm);
    vst1q_f64(v + i, vv);
    const float64x2_t step = vdivq_f64(vmulq_f64(lr, vdivq_f64(vm, bias1)),
                                       vaddq_f64(vsqrtq_f64(vdivq_f64(vv, bias2)), eps));
    vst1q_f64(theta + i, vsubq_f64(vld1q_f64(theta + i), step));
  }
  for (; i < n; ++i) {
    m[i] = h.beta1 * m[i] + (1.0 - h.beta1) * g[i];
    v[i] = h.beta2 * v[i] + (1.0 - h.beta2) * (g[i] * g[i]);
    theta[i] -= h.learning_rate * (m[i] / h.bias1) / (std::sqrt(v[i] / h.bias2) + h.eps);
  }
}

}  // namespace

namespace detail {
const KernelTable neon_table{Isa::Neon, &dot_neon, &axpy_neon, &adam_neon};
}

}  // namespace gradstop::kernels
