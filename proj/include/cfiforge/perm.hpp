#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cfiforge {

/// A permutation of {0, ..., n-1} in image form: perm[i] is the image of i.
using Permutation = std::vector<std::uint32_t>;

bool is_bijection(std::span<const std::uint32_t> perm);

/// Throws std::invalid_argument unless perm is a bijection of the given degree.
void require_bijection(std::span<const std::uint32_t> perm, std::size_t degree,
                       const char* what);

Permutation identity_permutation(std::size_t n);
Permutation inverse(std::span<const std::uint32_t> perm);

/// (a * b)(i) = a(b(i)): apply b first.
Permutation compose(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

/// Action of perm on [n]^len (n = perm.size()), tuples indexed
/// lexicographically: (a_1, ..., a_len) -> (perm(a_1), ..., perm(a_len)).
Permutation power_action(std::span<const std::uint32_t> perm, std::size_t len);

}  // namespace cfiforge
