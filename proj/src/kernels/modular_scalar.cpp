#include "cfiforge/kernels/modular.hpp"

namespace cfiforge::kernels {
namespace {

void axpy_scalar(std::span<Residue> dst, std::span<const Residue> src, Residue c,
                 std::uint32_t p) {
  const std::uint64_t cc = c;
  for (std::size_t j = 0; j < dst.size(); ++j) {
    dst[j] = static_cast<Residue>((dst[j] + cc * src[j]) % p);
  }
}

void scale_scalar(std::span<Residue> row, Residue c, std::uint32_t p) {
  const std::uint64_t cc = c;
  for (auto& v : row) v = static_cast<Residue>((cc * v) % p);
}

Residue dot_scalar(std::span<const Residue> a, std::span<const Residue> b,
                   std::uint32_t p) {
  std::uint64_t acc = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    acc = (acc + static_cast<std::uint64_t>(a[j]) * b[j]) % p;
  }
  return static_cast<Residue>(acc);
}

}  // namespace

const ModularKernels& scalar_kernels() {
  static const ModularKernels k{&axpy_scalar, &scale_scalar, &dot_scalar};
  return k;
}

}  // namespace cfiforge::kernels
