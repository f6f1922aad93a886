// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "gradstop/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace gradstop::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc = std::fma(a[i], b[i], acc);
  return acc;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

// Same operation order as the scalar kernel and no fused ops, so results are
// bitwise identical to it.
void adam_avx2(const AdamHyper& h, const double* g, double* m, double* v,
               double* theta, std::size_t n) {
  const __m256d b1 = _mm256_set1_pd(h.beta1);
  const __m256d b2 = _mm256_set1_pd(h.beta2);
  const __m256d c1 = _mm256_set1_pd(1.0 - h.beta1);
  const __m256d c2 = _mm256_set1_pd(1.0 - h.beta2);
  const __m256d bias1 = _mm256_set1_pd(h.bias1);
  const __m256d bias2 = _mm256_set1_pd(h.bias2);
  const __m256d lr = _mm256_set1_pd(h.learning_rate);
  const __m256d eps = _mm256_set1_pd(h.eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vg = _mm256_loadu_pd(g + i);
    const __m256d vm = _mm256_add_pd(_mm256_mul_pd(b1, _mm256_loadu_pd(m + i)),
                                     _mm256_mul_pd(c1, vg));
    const __m256d vv = _mm256_add_pd(_mm256_mul_pd(b2, _mm256_loadu_pd(v + i)),
                                     _mm256_mul_pd(c2, _mm256_mul_pd(vg, vg)));
    _mm256_storeu_pd(m + i, vm);
    _mm256_storeu_pd(v + i, vv);
    const __m256d m_hat = _mm256_div_pd(vm, bias1);
    const __m256d v_hat = _mm256_div_pd(vv, bias2);
    const __m256d step = _mm256_div_pd(_mm256_mul_pd(lr, m_hat),
                                       _mm256_add_pd(_mm256_sqrt_pd(v_hat), eps));
    _mm256_storeu_pd(theta + i, _mm256_sub_pd(_mm256_loadu_pd(theta + i), step));
  }
  for (; i < n; ++i) {
    m[i] = h.beta1 * m[i] + (1.0 - h.beta1) * g[i];
    v[i] = h.beta2 * v[i] + (1.0 - h.beta2) * (g[i] * g[i]);
    const double m_hat = m[i] / h.bias1;
    const double v_hat = v[i] / h.bias2;
    theta[i] -= h.learning_rate * m_hat / (std::sqrt(v_hat) + h.eps);
  }
}

}  // namespace

namespace detail {
const KernelTable avx2_table{Isa::Avx2, &dot_avx2, &axpy_avx2, &adam_avx2};
}

}  // namespace gradstop::kernels
