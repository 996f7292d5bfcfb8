#pragma once

// Modular row kernels used by the F_p elimination engine.
//
// Every kernel has a scalar reference implementation that works for any
// p < 2^31. Vector variants (AVX2 on x86-64, NEON on AArch64) handle
// p < 2^16, where a lane product plus an addend stays below 2^32, and fall
// back to the scalar path otherwise. All variants produce bit-identical
// results; tests/kernels_test.cpp checks that.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace cfiforge::kernels {

using Residue = std::uint32_t;

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

/// Largest modulus the vector variants accept.
inline constexpr std::uint32_t kVectorModulusLimit = 1u << 16;

struct ModularKernels {
  /// dst[j] = (dst[j] + c * src[j]) mod p; inputs already reduced.
  void (*axpy)(std::span<Residue> dst, std::span<const Residue> src, Residue c,
               std::uint32_t p);
  /// row[j] = (c * row[j]) mod p.
  void (*scale)(std::span<Residue> row, Residue c, std::uint32_t p);
  /// sum_j a[j] * b[j] mod p.
  Residue (*dot)(std::span<const Residue> a, std::span<const Residue> b,
                 std::uint32_t p);
};

const ModularKernels& scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
const ModularKernels& avx2_kernels();
#endif
#if defined(__aarch64__)
const ModularKernels& neon_kernels();
#endif

/// True when the running CPU can execute the given variant.
bool isa_available(Isa isa);

/// The variant picked at first use: the best available vector ISA, unless
/// CFIFORGE_SIMD=scalar is set in the environment.
Isa active_isa();

/// Forces a variant (tests, benchmarking). Throws if unavailable.
void set_active_isa(Isa isa);

const ModularKernels& kernels_for(Isa isa);

/// Kernels of the active variant.
const ModularKernels& active();

}  // namespace cfiforge::kernels
