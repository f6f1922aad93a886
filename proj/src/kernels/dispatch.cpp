#include "gradstop/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace gradstop::kernels {
namespace {

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& select() {
  if (const char* env = std::getenv("GRADSTOP_KERNELS")) {
    const std::string want(env);
    for (Isa isa : available()) {
      if (isa_name(isa) == want) return table(isa);
    }
  }
  const auto isas = available();
  return table(isas.back());
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

std::vector<Isa> available() {
  std::vector<Isa> out{Isa::Scalar};
  if (cpu_has(Isa::Avx2)) out.push_back(Isa::Avx2);
  if (cpu_has(Isa::Neon)) out.push_back(Isa::Neon);
  return out;
}

const KernelTable& table(Isa isa) {
  if (!cpu_has(isa)) {
    throw std::invalid_argument("kernel variant not supported on this CPU: " +
                                std::string(isa_name(isa)));
  }
  switch (isa) {
    case Isa::Scalar:
      return detail::scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::Avx2:
      return detail::avx2_table;
#endif
#if defined(__aarch64__)
    case Isa::Neon:
      return detail::neon_table;
#endif
    default:
      break;
  }
  throw std::invalid_argument("kernel variant not compiled in");
}

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

}  // namespace gradstop::kernels
