// AArch64 only; NEON is part of the base ISA there.
#include "cfiforge/kernels/modular.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace cfiforge::kernels {
namespace {

// Same Barrett scheme as the AVX2 variant, four u32 lanes at a time.
inline uint32x4_t reduce(uint32x4_t t, uint32x2_t m, uint32x4_t pv) {
  const uint64x2_t lo = vmull_u32(vget_low_u32(t), m);
  const uint64x2_t hi = vmull_u32(vget_high_u32(t), m);
  const uint32x4_t qhat = vcombine_u32(vshrn_n_u64(lo, 32), vshrn_n_u64(hi, 32));
  uint32x4_t r = vmlsq_u32(t, qhat, pv);
  const uint32x4_t ge = vcgeq_u32(r, pv);
  return vsubq_u32(r, vandq_u32(ge, pv));
}

void axpy_neon(std::span<Residue> dst, std::span<const Residue> src, Residue c,
               std::uint32_t p) {
  if (p >= kVectorModulusLimit) return scalar_kernels().axpy(dst, src, c, p);
  const uint32x2_t m = vdup_n_u32(static_cast<std::uint32_t>((std::uint64_t{1} << 32) / p));
  const uint32x4_t pv = vdupq_n_u32(p);
  const std::size_t n = dst.size();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const uint32x4_t t = vmlaq_n_u32(vld1q_u32(dst.data() + j), vld1q_u32(src.data() + j), c);
    vst1q_u32(dst.data() + j, reduce(t, m, pv));
  }
  if (j < n) scalar_kernels().axpy(dst.subspan(j), src.subspan(j), c, p);
}

void scale_neon(std::span<Residue> row, Residue c, std::uint32_t p) {
  if (p >= kVectorModulusLimit) return scalar_kernels().scale(row, c, p);
  const uint32x2_t m = vdup_n_u32(static_cast<std::uint32_t>((std::uint64_t{1} << 32) / p));
  const uint32x4_t pv = vdupq_n_u32(p);
  const std::size_t n = row.size();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const uint32x4_t t = vmulq_n_u32(vld1q_u32(row.data() + j), c);
    vst1q_u32(row.data() + j, reduce(t, m, pv));
  }
  if (j < n) scalar_kernels().scale(row.subspan(j), c, p);
}

Residue dot_neon(std::span<const Residue> a, std::span<const Residue> b, std::uint32_t p) {
  if (p >= kVectorModulusLimit) return scalar_kernels().dot(a, b, p);
  const uint32x2_t m = vdup_n_u32(static_cast<std::uint32_t>((std::uint64_t{1} << 32) / p));
  const uint32x4_t pv = vdupq_n_u32(p);
  const std::size_t n = a.size();
  uint32x4_t acc = vdupq_n_u32(0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    acc = reduce(vmlaq_u32(acc, vld1q_u32(a.data() + j), vld1q_u32(b.data() + j)), m, pv);
  }
  std::uint64_t total = static_cast<std::uint64_t>(vgetq_lane_u32(acc, 0)) +
                        vgetq_lane_u32(acc, 1) + vgetq_lane_u32(acc, 2) +
                        vgetq_lane_u32(acc, 3);
  total %= p;
  if (j < n) total = (total + scalar_kernels().dot(a.subspan(j), b.subspan(j), p)) % p;
  return static_cast<Residue>(total);
}

}  // namespace

const ModularKernels& neon_kernels() {
  static const ModularKernels k{&axpy_neon, &scale_neon, &dot_neon};
  return k;
}

}  // namespace cfiforge::kernels
#endif
