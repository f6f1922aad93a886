#pragma once
// Data-parallel inner loops used by the statistics, models and optimizers.
//
// Every kernel has a scalar reference implementation; SIMD variants are
// selected once at startup from the CPU feature set. Set GRADSTOP_KERNELS to
// "scalar", "avx2" or "neon" to pin a variant (unknown or unsupported values
// fall back to automatic selection).

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace gradstop::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

struct AdamHyper {
  double learning_rate;
  double beta1;
  double beta2;
  double eps;
  // 1 - beta^t for the current step.
  double bias1;
  double bias2;
};

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // m, v and theta updated in place from gradient g.
  void (*adam)(const AdamHyper& h, const double* g, double* m, double* v,
               double* theta, std::size_t n);
};

// Variant in use for this process.
const KernelTable& active();

// Variants that can run on this CPU, scalar first.
std::vector<Isa> available();

// Table for a specific variant. Throws std::invalid_argument if the variant
// was not compiled in or the CPU lacks the instructions.
const KernelTable& table(Isa isa);

namespace detail {
extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif
#if defined(__aarch64__)
extern const KernelTable neon_table;
#endif
}  // namespace detail

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace gradstop::kernels
