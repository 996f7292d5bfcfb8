#pragma once

// The q-Sylow subgroup Delta_r of Sym([q^r]) as an iterated wreath product,
// lowest-common-ancestor signatures of tuples, counting realisations of a
// signature modulo p, and the signature-indexed compact matrix of an
// equality formula.
//
// Points of [q^r] are leaves of the complete q-ary tree of depth r; the
// q-adic digits of a point, most significant first, name its root-to-leaf
// path. The level-i block P_i^x = {x q^i, ..., (x+1) q^i - 1} is the set of
// leaves below one node at height i.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cfiforge/caps.hpp"
#include "cfiforge/eqformula.hpp"
#include "cfiforge/gfp.hpp"
#include "cfiforge/perm.hpp"
#include "cfiforge/symred.hpp"

namespace cfiforge::sylow {

/// Throws std::invalid_argument unless q is prime, r >= 1 and q^r < 2^31.
std::uint64_t leaf_count(std::uint32_t q, std::uint32_t r);

class SylowGroup {
 public:
  /// Element of Delta_r: children are elements of Delta_(r-1), one per
  /// top-level block (empty when r = 1), followed by the block shift c.
  struct Element {
    std::vector<Element> children;
    std::uint32_t shift = 0;
    friend bool operator==(const Element&, const Element&) = default;
  };

  SylowGroup(std::uint32_t q, std::uint32_t r);

  std::uint32_t q() const { return q_; }
  std::uint32_t r() const { return r_; }
  std::uint64_t degree() const { return n_; }
  /// log_q |Delta_r| = (q^r - 1) / (q - 1).
  std::uint64_t order_exponent() const;
  /// |Delta_r|; throws ResourceCapError if it does not fit in 64 bits.
  std::uint64_t order() const;

  Element identity() const;
  /// x in top-level block y is first moved by children[y] inside the block,
  /// then the block index becomes (y + shift) mod q.
  Permutation to_permutation(const Element& e) const;
  /// All elements, in recursive product order. Throws ResourceCapError
  /// above caps.group_elements.
  std::vector<Element> elements(const Caps& caps = default_caps()) const;
  /// Permutations of all elements, sorted.
  std::vector<Permutation> materialize(const Caps& caps = default_caps()) const;
  /// The top-level shift together with the generators of Delta_(r-1)
  /// acting on block 0.
  std::vector<Permutation> generators() const;
  symred::PermutationGroup as_group() const;

 private:
  std::uint32_t q_, r_;
  std::uint64_t n_;
};

struct Signature {
  std::uint32_t level = 0;
  std::uint32_t offset = 0;
  friend auto operator<=>(const Signature&, const Signature&) = default;
};

/// Entries for the pairs (0,1), (0,2), ..., (0,l-1), (1,2), ..., (l-2,l-1).
using SignatureVector = std::vector<Signature>;

std::uint32_t digit(std::uint64_t a, std::uint32_t q, std::uint32_t pos);

/// (0, 0) when a = b; otherwise (m + 1, (b_m - a_m) mod q) for the most
/// significant differing digit m.
Signature signature(std::uint32_t q, std::uint32_t r, std::uint64_t a, std::uint64_t b);
SignatureVector tuple_signature(std::uint32_t q, std::uint32_t r, std::span<const std::uint32_t> tuple);

std::size_t pair_count(std::size_t l);
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t l);
/// sigma(i, j) for any i, j: sigma(j, i) = (h, -z) and sigma(i, i) = (0, 0).
Signature oriented(const SignatureVector& sigma, std::size_t l, std::size_t i, std::size_t j,
                   std::uint32_t q);
/// The signature vector of the reordered tuple (a_order[0], a_order[1], ...).
SignatureVector permute_signature(const SignatureVector& sigma, std::size_t l,
                                  std::span<const std::size_t> order, std::uint32_t q);
/// Throws std::invalid_argument unless sigma has l(l-1)/2 entries with
/// level <= r, offset < q and offset 0 at level 0.
void validate_signature(std::uint32_t q, std::uint32_t r, std::size_t l, const SignatureVector& sigma);

struct Realization {
  gfp::Residue residue = 0;
  /// The exact count is nonzero.
  bool realizable = false;
  /// Lexicographically least realising tuple, when realizable.
  std::vector<std::uint32_t> witness;
};

/// Counts l-tuples inside the block P_i^x whose signature is sigma and
/// whose first s = fixed.size() entries equal `fixed`, modulo p. Throws
/// std::invalid_argument for p = q, i > r, x out of range, fixed entries
/// outside the block or a malformed sigma.
Realization count_realizations(std::uint32_t q, std::uint32_t r, std::uint32_t p, std::size_t l,
                               const SignatureVector& sigma, std::uint32_t i, std::uint64_t x,
                               std::span<const std::uint32_t> fixed);

/// Same count over [q^r] with an arbitrary set of fixed positions.
Realization count_with_fixed(std::uint32_t q, std::uint32_t r, std::uint32_t p, std::size_t l,
                             const SignatureVector& sigma,
                             const std::vector<std::optional<std::uint32_t>>& fixed);

/// All realizable signature vectors of l-tuples, in lexicographic order.
std::vector<SignatureVector> realizable_signatures(std::uint32_t q, std::uint32_t r, std::size_t l);

/// |{b : sgn(b) = sigma_b and (a, b) has equality type tau}| mod p, where
/// a realises sigma_a. Throws std::invalid_argument if it does not.
gfp::Residue count_per_equality_type(std::uint32_t q, std::uint32_t r, std::uint32_t p,
                                     const eq::EqualityType& tau, const SignatureVector& sigma_a,
                                     const SignatureVector& sigma_b,
                                     std::span<const std::uint32_t> a);

struct CompactMatrix {
  gfp::Matrix matrix;
  std::vector<SignatureVector> row_signatures;
  std::vector<SignatureVector> col_signatures;
  /// Lexicographically least tuple realising each row signature.
  std::vector<std::vector<std::uint32_t>> row_witnesses;
};

/// Rows are the realizable signatures of k-tuples, columns those of
/// l-tuples (k and l taken from alpha); entry (sa, sb) counts the b with
/// sgn(b) = sb and alpha(a, b) for a realising sa, modulo p.
CompactMatrix compact_matrix(const eq::Formula& alpha, std::uint32_t q, std::uint32_t r,
                             std::uint32_t p);

}  // namespace cfiforge::sylow
