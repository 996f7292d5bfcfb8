#include "cfiforge/sylow.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>

namespace cfiforge::sylow {

std::uint64_t leaf_count(std::uint32_t q, std::uint32_t r) {
  if (!gfp::is_prime(q)) throw std::invalid_argument("sylow: q must be prime");
  if (r == 0) throw std::invalid_argument("sylow: depth r must be >= 1");
  std::uint64_t n = 1;
  for (std::uint32_t i = 0; i < r; ++i) {
    n *= q;
    if (n >= (std::uint64_t{1} << 31)) throw std::invalid_argument("sylow: q^r must stay below 2^31");
  }
  return n;
}

namespace {

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

SylowGroup::SylowGroup(std::uint32_t q, std::uint32_t r) : q_(q), r_(r), n_(leaf_count(q, r)) {}

std::uint64_t SylowGroup::order_exponent() const { return (n_ - 1) / (q_ - 1); }

std::uint64_t SylowGroup::order() const {
  const std::uint64_t e = order_exponent();
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (out > UINT64_MAX / q_) throw ResourceCapError("sylow: group order exceeds 64 bits");
    out *= q_;
  }
  return out;
}

SylowGroup::Element SylowGroup::identity() const {
  std::function<Element(std::uint32_t)> make = [&](std::uint32_t depth) {
    Element e;
    if (depth > 1) e.children.assign(q_, make(depth - 1));
    return e;
  };
  return make(r_);
}

Permutation SylowGroup::to_permutation(const Element& e) const {
  std::function<void(const Element&, std::uint32_t, Permutation&)> fill =
      [&](const Element& el, std::uint32_t depth, Permutation& out) {
        const std::uint64_t size = ipow(q_, depth);
        out.resize(size);
        if (depth == 1) {
          for (std::uint32_t x = 0; x < q_; ++x) out[x] = (x + el.shift) % q_;
          return;
        }
        if (el.children.size() != q_) throw std::invalid_argument("sylow element: wrong number of children");
        const std::uint64_t block = size / q_;
        Permutation sub;
        for (std::uint32_t y = 0; y < q_; ++y) {
          fill(el.children[y], depth - 1, sub);
          const std::uint64_t target = ((y + el.shift) % q_) * block;
          for (std::uint64_t o = 0; o < block; ++o) out[y * block + o] = static_cast<std::uint32_t>(target + sub[o]);
        }
      };
  if (e.shift >= q_) throw std::invalid_argument("sylow element: shift out of range");
  Permutation out;
  fill(e, r_, out);
  return out;
}

std::vector<SylowGroup::Element> SylowGroup::elements(const Caps& caps) const {
  if (order_exponent() >= 64 || order() > caps.group_elements) {
    throw ResourceCapError("sylow: group enumeration exceeds the cap of " + std::to_string(caps.group_elements));
  }
  std::function<std::vector<Element>(std::uint32_t)> all = [&](std::uint32_t depth) {
    std::vector<Element> out;
    if (depth == 1) {
      for (std::uint32_t c = 0; c < q_; ++c) out.push_back(Element{{}, c});
      return out;
    }
    const auto sub = all(depth - 1);
    // Mixed-radix counter over the q children.
    std::vector<std::size_t> pick(q_, 0);
    while (true) {
      Element base;
      for (auto i : pick) base.children.push_back(sub[i]);
      for (std::uint32_t c = 0; c < q_; ++c) {
        base.shift = c;
        out.push_back(base);
      }
      std::size_t pos = q_;
      while (pos > 0) {
        --pos;
        if (++pick[pos] < sub.size()) break;
        pick[pos] = 0;
        if (pos == 0) return out;
      }
    }
  };
  return all(r_);
}

std::vector<Permutation> SylowGroup::materialize(const Caps& caps) const {
  std::vector<Permutation> out;
  for (const auto& e : elements(caps)) out.push_back(to_permutation(e));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Permutation> SylowGroup::generators() const {
  std::vector<Permutation> gens;
  Element gamma = identity();
  gamma.shift = 1;
  gens.push_back(to_permutation(gamma));
  if (r_ > 1) {
    const SylowGroup sub(q_, r_ - 1);
    for (const auto& g : sub.generators()) {
      Permutation p = identity_permutation(n_);
      std::copy(g.begin(), g.end(), p.begin());
      gens.push_back(std::move(p));
    }
  }
  return gens;
}

symred::PermutationGroup SylowGroup::as_group() const { return {n_, generators()}; }

std::uint32_t digit(std::uint64_t a, std::uint32_t q, std::uint32_t pos) {
  for (std::uint32_t i = 0; i < pos; ++i) a /= q;
  return static_cast<std::uint32_t>(a % q);
}

Signature signature(std::uint32_t q, std::uint32_t r, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t n = leaf_count(q, r);
  if (a >= n || b >= n) throw std::invalid_argument("signature: point outside [q^r]");
  if (a == b) return {0, 0};
  for (std::uint32_t m = r; m-- > 0;) {
    const std::uint32_t da = digit(a, q, m), db = digit(b, q, m);
    if (da != db) return {m + 1, (db + q - da) % q};
  }
  return {0, 0};
}

std::size_t pair_count(std::size_t l) { return l < 2 ? 0 : l * (l - 1) / 2; }

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t l) {
  if (i >= j || j >= l) throw std::invalid_argument("pair_index: need i < j < l");
  return i * l - i * (i + 1) / 2 + (j - i - 1);
}

SignatureVector tuple_signature(std::uint32_t q, std::uint32_t r, std::span<const std::uint32_t> tuple) {
  SignatureVector out;
  out.reserve(pair_count(tuple.size()));
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    for (std::size_t j = i + 1; j < tuple.size(); ++j) out.push_back(signature(q, r, tuple[i], tuple[j]));
  }
  return out;
}

Signature oriented(const SignatureVector& sigma, std::size_t l, std::size_t i, std::size_t j, std::uint32_t q) {
  if (i == j) return {0, 0};
  if (i < j) return sigma[pair_index(i, j, l)];
  const Signature s = sigma[pair_index(j, i, l)];
  return {s.level, (q - s.offset) % q};
}

SignatureVector permute_signature(const SignatureVector& sigma, std::size_t l, std::span<const std::size_t> order,
                                  std::uint32_t q) {
  if (order.size() != l) throw std::invalid_argument("permute_signature: order has the wrong length");
  SignatureVector out;
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = i + 1; j < l; ++j) out.push_back(oriented(sigma, l, order[i], order[j], q));
  }
  return out;
}

void validate_signature(std::uint32_t q, std::uint32_t r, std::size_t l, const SignatureVector& sigma) {
  if (sigma.size() != pair_count(l)) {
    throw std::invalid_argument("signature vector: expected " + std::to_string(pair_count(l)) + " entries for l = " +
                                std::to_string(l));
  }
  for (const auto& s : sigma) {
    if (s.level > r || s.offset >= q || (s.level == 0 && s.offset != 0)) {
      throw std::invalid_argument("signature vector: malformed entry (" + std::to_string(s.level) + ", " +
                                  std::to_string(s.offset) + ")");
    }
  }
}

namespace {

struct Counter {
  std::uint32_t q, r, p;
  std::size_t l;
  const SignatureVector& sigma;

  Signature sig(std::size_t i, std::size_t j) const { return oriented(sigma, l, i, j, q); }

  // Signature of (a_j, a_k) implied by their signatures (h1, d1) and
  // (h2, d2) relative to a common anchor.
  Signature implied(Signature s1, Signature s2) const {
    if (s1.level == s2.level) return {s1.level, (s2.offset + q - s1.offset) % q};
    if (s1.level < s2.level) return s2;
    return {s1.level, (q - s1.offset) % q};
  }

  // q^level mod p, with the exponent reduced mod p - 1 (q is a unit).
  gfp::Residue block_size_mod_p(std::uint32_t level) const {
    return gfp::pow_mod(q, level % (p - 1), p);
  }

  // Counts assignments to `idx` (sorted original positions) inside the
  // level-i block starting at `start`, honouring `values` for fixed
  // positions; fills `values` with the lex-least witness when realizable.
  Realization count(std::uint32_t i, std::uint64_t start, const std::vector<std::size_t>& idx,
                    std::vector<std::optional<std::uint32_t>>& values) const {
    Realization out;
    if (idx.empty()) {
      out.residue = 1 % p;
      out.realizable = true;
      return out;
    }
    auto anchor_it = std::find_if(idx.begin(), idx.end(), [&](std::size_t j) { return values[j].has_value(); });
    if (anchor_it == idx.end()) {
      // Delta_i is transitive on the block and preserves signatures, so every
      // anchor value gives the same count; the block start is the least.
      values[idx.front()] = static_cast<std::uint32_t>(start);
      Realization anchored = count(i, start, idx, values);
      if (!anchored.realizable) values[idx.front()].reset();
      anchored.residue = static_cast<gfp::Residue>(
          (static_cast<std::uint64_t>(anchored.residue) * block_size_mod_p(i)) % p);
      return anchored;
    }
    const std::size_t anchor = *anchor_it;
    const std::uint64_t a = *values[anchor];

    // Fixed pairs must already carry their prescribed signatures.
    for (std::size_t u = 0; u < idx.size(); ++u) {
      if (!values[idx[u]]) continue;
      for (std::size_t v = u + 1; v < idx.size(); ++v) {
        if (!values[idx[v]]) continue;
        if (signature(q, r, *values[idx[u]], *values[idx[v]]) != sig(idx[u], idx[v])) return out;
      }
    }

    // Partition the other positions by their signature relative to the anchor.
    std::map<Signature, std::vector<std::size_t>> classes;
    for (auto j : idx) {
      if (j == anchor) continue;
      const Signature s = sig(anchor, j);
      if (s.level > i || (s.level > 0 && s.offset == 0)) return out;
      classes[s].push_back(j);
    }
    for (auto w1 = classes.begin(); w1 != classes.end(); ++w1) {
      for (auto w2 = w1; w2 != classes.end(); ++w2) {
        const bool same = w1 == w2;
        if (same && w1->first.level != 0) continue;  // checked by the recursion
        const Signature want = implied(w1->first, w2->first);
        for (auto j : w1->second) {
          for (auto k : w2->second) {
            if (j == k) continue;
            if (sig(j, k) != want) return out;
          }
        }
      }
    }

    out.residue = 1 % p;
    out.realizable = true;
    for (const auto& [s, members] : classes) {
      if (s.level == 0) {
        for (auto j : members) values[j] = static_cast<std::uint32_t>(a);
        continue;
      }
      const std::uint32_t h = s.level;
      const std::uint64_t big = ipow(q, h), small = big / q;
      const std::uint32_t child = (digit(a, q, h - 1) + s.offset) % q;
      const std::uint64_t sub_start = (a / big) * big + child * small;
      Realization part = count(h - 1, sub_start, members, values);
      out.residue = static_cast<gfp::Residue>((static_cast<std::uint64_t>(out.residue) * part.residue) % p);
      out.realizable = out.realizable && part.realizable;
      if (!out.realizable) {
        out.residue = 0;
        return out;
      }
    }
    return out;
  }
};

Realization run(std::uint32_t q, std::uint32_t r, std::uint32_t p, std::size_t l, const SignatureVector& sigma,
                std::uint32_t i, std::uint64_t x, std::vector<std::optional<std::uint32_t>> values) {
  leaf_count(q, r);
  gfp::require_prime(p);
  if (p == q) throw std::invalid_argument("count_realizations: p must differ from q");
  if (i > r) throw std::invalid_argument("count_realizations: level exceeds r");
  validate_signature(q, r, l, sigma);
  const std::uint64_t size = ipow(q, i);
  if (x >= ipow(q, r - i)) throw std::invalid_argument("count_realizations: block index out of range");
  const std::uint64_t start = x * size;
  for (const auto& v : values) {
    if (v && (*v < start || *v >= start + size)) {
      throw std::invalid_argument("count_realizations: fixed entry outside the block");
    }
  }
  std::vector<std::size_t> idx(l);
  for (std::size_t j = 0; j < l; ++j) idx[j] = j;
  Counter c{q, r, p, l, sigma};
  Realization out = c.count(i, start, idx, values);
  if (out.realizable) {
    for (const auto& v : values) out.witness.push_back(*v);
  }
  return out;
}

}  // namespace

Realization count_realizations(std::uint32_t q, std::uint32_t r, std::uint32_t p, std::size_t l,
                               const SignatureVector& sigma, std::uint32_t i, std::uint64_t x,
                               std::span<const std::uint32_t> fixed) {
  if (fixed.size() > l) throw std::invalid_argument("count_realizations: more fixed entries than positions");
  std::vector<std::optional<std::uint32_t>> values(l);
  for (std::size_t j = 0; j < fixed.size(); ++j) values[j] = fixed[j];
  return run(q, r, p, l, sigma, i, x, std::move(values));
}

Realization count_with_fixed(std::uint32_t q, std::uint32_t r, std::uint32_t p, std::size_t l,
                             const SignatureVector& sigma, const std::vector<std::optional<std::uint32_t>>& fixed) {
  if (fixed.size() != l) throw std::invalid_argument("count_with_fixed: expected one slot per position");
  return run(q, r, p, l, sigma, r, 0, fixed);
}

std::vector<SignatureVector> realizable_signatures(std::uint32_t q, std::uint32_t r, std::size_t l) {
  leaf_count(q, r);
  // Any prime other than q serves; only realizability is used.
  const std::uint32_t p = q == 2 ? 3 : 2;
  std::vector<Signature> options{{0, 0}};
  for (std::uint32_t h = 1; h <= r; ++h) {
    for (std::uint32_t z = 1; z < q; ++z) options.push_back({h, z});
  }
  const std::size_t m = pair_count(l);
  std::vector<SignatureVector> out;
  std::vector<std::size_t> pick(m, 0);
  while (true) {
    SignatureVector sigma(m);
    for (std::size_t t = 0; t < m; ++t) sigma[t] = options[pick[t]];
    if (count_realizations(q, r, p, l, sigma, r, 0, {}).realizable) out.push_back(std::move(sigma));
    std::size_t pos = m;
    while (pos > 0) {
      --pos;
      if (++pick[pos] < options.size()) break;
      pick[pos] = 0;
      if (pos == 0) return out;
    }
    if (m == 0) return out;
  }
}

gfp::Residue count_per_equality_type(std::uint32_t q, std::uint32_t r, std::uint32_t p, const eq::EqualityType& tau,
                                     const SignatureVector& sigma_a, const SignatureVector& sigma_b,
                                     std::span<const std::uint32_t> a) {
  const std::size_t k = tau.k, l = tau.l;
  if (a.size() != k || tau.block.size() != k + l) {
    throw std::invalid_argument("count_per_equality_type: arities of tau and a disagree");
  }
  validate_signature(q, r, k, sigma_a);
  validate_signature(q, r, l, sigma_b);
  const std::uint64_t n = leaf_count(q, r);
  for (auto v : a) {
    if (v >= n) throw std::invalid_argument("count_per_equality_type: entry of a outside [q^r]");
  }
  if (tuple_signature(q, r, a) != sigma_a) {
    throw std::invalid_argument("count_per_equality_type: a does not realise sigma_a");
  }
  // tau on the x-block must be the equality pattern of a.
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if ((tau.block[i] == tau.block[j]) != (a[i] == a[j])) return 0;
    }
  }
  // tau on the y-block must be the equality pattern of sigma_b.
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = i + 1; j < l; ++j) {
      if ((tau.block[k + i] == tau.block[k + j]) != (oriented(sigma_b, l, i, j, q).level == 0)) return 0;
    }
  }
  // y_j sharing a class with some x_i is forced to a_i; the others must avoid
  // every value of a.
  std::vector<std::optional<std::uint32_t>> fixed(l);
  std::vector<std::size_t> avoid;
  for (std::size_t j = 0; j < l; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      if (tau.block[i] == tau.block[k + j]) {
        fixed[j] = a[i];
        break;
      }
    }
    if (!fixed[j]) avoid.push_back(j);
  }
  std::vector<std::uint32_t> distinct(a.begin(), a.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  // |B_Y^eps| = |B_{Y\j}^eps| - sum_{v in a} |B_{Y\j}^{eps + (j -> v)}|.
  std::function<gfp::Residue(std::size_t, std::vector<std::optional<std::uint32_t>>&)> ie =
      [&](std::size_t pos, std::vector<std::optional<std::uint32_t>>& eps) -> gfp::Residue {
    if (pos == avoid.size()) return count_with_fixed(q, r, p, l, sigma_b, eps).residue;
    std::uint64_t acc = ie(pos + 1, eps);
    const std::size_t j = avoid[pos];
    for (auto v : distinct) {
      eps[j] = v;
      acc += p - ie(pos + 1, eps);
      eps[j].reset();
    }
    return static_cast<gfp::Residue>(acc % p);
  };
  return ie(0, fixed);
}

CompactMatrix compact_matrix(const eq::Formula& alpha, std::uint32_t q, std::uint32_t r, std::uint32_t p) {
  gfp::require_prime(p);
  if (p == q) throw std::invalid_argument("compact_matrix: p must differ from q");
  const std::size_t k = alpha.k(), l = alpha.l();
  auto rows = realizable_signatures(q, r, k);
  auto cols = realizable_signatures(q, r, l);
  const auto types = eq::decompose(alpha);
  CompactMatrix out{gfp::Matrix(p, rows.size(), cols.size()), rows, cols, {}};
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    auto wit = count_realizations(q, r, p, k, rows[ri], r, 0, {}).witness;
    for (std::size_t ci = 0; ci < cols.size(); ++ci) {
      std::uint64_t acc = 0;
      for (const auto& tau : types) acc += count_per_equality_type(q, r, p, tau, rows[ri], cols[ci], wit);
      out.matrix.set(ri, ci, static_cast<gfp::Residue>(acc % p));
    }
    out.row_witnesses.push_back(std::move(wit));
  }
  return out;
}

}  // namespace cfiforge::sylow
