// Compiled with -mavx2; only entered after a runtime CPU check.
#include "cfiforge/kernels/modular.hpp"

#include <immintrin.h>

namespace cfiforge::kernels {
namespace {

// Barrett reduction of eight u32 lanes t < 2^32 by p < 2^16, with
// m = floor(2^32 / p). The quotient estimate is at most one too small.
inline __m256i reduce(__m256i t, __m256i m, __m256i pv, __m256i pm1) {
  const __m256i even = _mm256_srli_epi64(_mm256_mul_epu32(t, m), 32);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(t, 32), m);
  const __m256i qhat = _mm256_blend_epi32(even, odd, 0b10101010);
  __m256i r = _mm256_sub_epi32(t, _mm256_mullo_epi32(qhat, pv));
  const __m256i ge = _mm256_cmpgt_epi32(r, pm1);
  return _mm256_sub_epi32(r, _mm256_and_si256(ge, pv));
}

struct Consts {
  __m256i m, pv, pm1;
  explicit Consts(std::uint32_t p)
      : m(_mm256_set1_epi32(static_cast<int>((std::uint64_t{1} << 32) / p))),
        pv(_mm256_set1_epi32(static_cast<int>(p))),
        pm1(_mm256_set1_epi32(static_cast<int>(p - 1))) {}
};

void axpy_avx2(std::span<Residue> dst, std::span<const Residue> src, Residue c,
               std::uint32_t p) {
  if (p >= kVectorModulusLimit) return scalar_kernels().axpy(dst, src, c, p);
  const Consts k(p);
  const __m256i cv = _mm256_set1_epi32(static_cast<int>(c));
  const std::size_t n = dst.size();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    auto* d = reinterpret_cast<__m256i*>(dst.data() + j);
    const auto* s = reinterpret_cast<const __m256i*>(src.data() + j);
    const __m256i t = _mm256_add_epi32(_mm256_loadu_si256(d),
                                       _mm256_mullo_epi32(cv, _mm256_loadu_si256(s)));
    _mm256_storeu_si256(d, reduce(t, k.m, k.pv, k.pm1));
  }
  if (j < n) scalar_kernels().axpy(dst.subspan(j), src.subspan(j), c, p);
}

void scale_avx2(std::span<Residue> row, Residue c, std::uint32_t p) {
  if (p >= kVectorModulusLimit) return scalar_kernels().scale(row, c, p);
  const Consts k(p);
  const __m256i cv = _mm256_set1_epi32(static_cast<int>(c));
  const std::size_t n = row.size();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    auto* d = reinterpret_cast<__m256i*>(row.data() + j);
    const __m256i t = _mm256_mullo_epi32(cv, _mm256_loadu_si256(d));
    _mm256_storeu_si256(d, reduce(t, k.m, k.pv, k.pm1));
  }
  if (j < n) scalar_kernels().scale(row.subspan(j), c, p);
}

Residue dot_avx2(std::span<const Residue> a, std::span<const Residue> b,
                 std::uint32_t p) {
  if (p >= kVectorModulusLimit) return scalar_kernels().dot(a, b, p);
  const Consts k(p);
  const std::size_t n = a.size();
  __m256i acc = _mm256_setzero_si256();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + j));
    const __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + j));
    // acc < p and x*y <= (p-1)^2, so the sum stays below 2^32.
    acc = reduce(_mm256_add_epi32(acc, _mm256_mullo_epi32(x, y)), k.m, k.pv, k.pm1);
  }
  alignas(32) Residue lanes[8];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t total = 0;
  for (Residue v : lanes) total += v;
  total %= p;
  if (j < n) total = (total + scalar_kernels().dot(a.subspan(j), b.subspan(j), p)) % p;
  return static_cast<Residue>(total);
}

}  // namespace

const ModularKernels& avx2_kernels() {
  static const ModularKernels k{&axpy_avx2, &scale_avx2, &dot_avx2};
  return k;
}

}  // namespace cfiforge::kernels
