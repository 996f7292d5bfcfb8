#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "cfiforge/kernels/modular.hpp"

namespace cfiforge::kernels {
namespace {

Isa detect() {
  if (const char* env = std::getenv("CFIFORGE_SIMD")) {
    if (std::string(env) == "scalar") return Isa::Scalar;
  }
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

std::atomic<int>& selected() {
  static std::atomic<int> isa{static_cast<int>(detect())};
  return isa;
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

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
      return __builtin_cpu_supports("avx2");
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

Isa active_isa() { return static_cast<Isa>(selected().load(std::memory_order_relaxed)); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::runtime_error("kernel variant not available on this CPU: " +
                             std::string(isa_name(isa)));
  }
  selected().store(static_cast<int>(isa), std::memory_order_relaxed);
}

const ModularKernels& kernels_for(Isa isa) {
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::Avx2: return avx2_kernels();
#endif
#if defined(__aarch64__)
    case Isa::Neon: return neon_kernels();
#endif
    default: return scalar_kernels();
  }
}

const ModularKernels& active() { return kernels_for(active_isa()); }

}  // namespace cfiforge::kernels
