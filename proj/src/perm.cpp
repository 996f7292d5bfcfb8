#include "cfiforge/perm.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace cfiforge {

bool is_bijection(std::span<const std::uint32_t> perm) {
  std::vector<bool> seen(perm.size(), false);
  for (auto v : perm) {
    if (v >= perm.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

void require_bijection(std::span<const std::uint32_t> perm, std::size_t degree,
                       const char* what) {
  if (perm.size() != degree) {
    throw std::invalid_argument(std::string(what) + ": permutation has degree " +
                                std::to_string(perm.size()) + ", expected " +
                                std::to_string(degree));
  }
  if (!is_bijection(perm)) {
    throw std::invalid_argument(std::string(what) + ": not a bijection");
  }
}

Permutation identity_permutation(std::size_t n) {
  Permutation id(n);
  std::iota(id.begin(), id.end(), 0u);
  return id;
}

Permutation inverse(std::span<const std::uint32_t> perm) {
  Permutation inv(perm.size());
  for (std::uint32_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

Permutation compose(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  Permutation out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
  return out;
}

Permutation power_action(std::span<const std::uint32_t> perm, std::size_t len) {
  const std::size_t n = perm.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < len; ++i) total *= n;
  Permutation out(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx, img = 0, place = 1;
    for (std::size_t j = 0; j < len; ++j) {
      img += perm[rest % n] * place;
      rest /= n;
      place *= n;
    }
    out[idx] = static_cast<std::uint32_t>(img);
  }
  return out;
}

}  // namespace cfiforge
