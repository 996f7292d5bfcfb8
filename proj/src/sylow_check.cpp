#include "cfiforge/sylow_check.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cfiforge/symred.hpp"

namespace cfiforge::sylow::check {
namespace {

std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return r;
}

std::vector<std::uint32_t> apply(const Permutation& pi, const std::vector<std::uint32_t>& t) {
  std::vector<std::uint32_t> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = pi[t[i]];
  return out;
}

std::string show(const std::vector<std::uint32_t>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

}  // namespace

std::uint64_t brute_count(std::uint32_t q, std::uint32_t r, std::size_t l, const SignatureVector& sigma,
                          const std::vector<std::optional<std::uint32_t>>& fixed) {
  const std::uint64_t n = leaf_count(q, r);
  std::uint64_t count = 0;
  for (std::uint64_t idx = 0; idx < ipow(n, l); ++idx) {
    const auto t = eq::decode_tuple(idx, n, l);
    bool ok = true;
    for (std::size_t j = 0; j < l && ok; ++j) ok = !fixed[j] || *fixed[j] == t[j];
    if (ok && tuple_signature(q, r, t) == sigma) ++count;
  }
  return count;
}

std::vector<std::uint32_t> tuple_orbits(const SylowGroup& g, std::size_t l) {
  std::vector<Permutation> gens;
  for (const auto& gen : g.generators()) gens.push_back(power_action(gen, l));
  const symred::PermutationGroup induced(ipow(g.degree(), l), std::move(gens));
  return symred::orbits(induced).block_of();
}

CheckResult check_group(const SylowGroup& g) {
  CheckResult res;
  const auto elems = g.materialize();
  res.checked = elems.size();
  if (elems.size() != g.order()) {
    res.ok = false;
    res.detail = "materialised " + std::to_string(elems.size()) + " elements, expected " + std::to_string(g.order());
    return res;
  }
  const std::set<Permutation> set(elems.begin(), elems.end());
  if (set.size() != elems.size()) {
    res.ok = false;
    res.detail = "recursive elements are not pairwise distinct";
    return res;
  }
  if (!set.count(identity_permutation(g.degree()))) {
    res.ok = false;
    res.detail = "identity missing";
    return res;
  }
  for (const auto& a : elems) {
    for (const auto& b : elems) {
      if (!set.count(compose(a, b))) {
        res.ok = false;
        res.detail = "not closed under composition";
        return res;
      }
    }
  }
  auto closure = g.as_group().elements();
  std::sort(closure.begin(), closure.end());
  if (closure != elems) {
    res.ok = false;
    res.detail = "generator closure differs from the recursive elements";
  }
  return res;
}

CheckResult check_invariance(const SylowGroup& g, std::size_t l, std::optional<std::size_t> samples,
                             std::mt19937_64& rng) {
  CheckResult res;
  const auto elems = g.materialize();
  const std::uint64_t n = g.degree(), total = ipow(n, l);
  auto test = [&](const Permutation& pi, std::uint64_t idx) {
    const auto t = eq::decode_tuple(idx, n, l);
    ++res.checked;
    if (tuple_signature(g.q(), g.r(), apply(pi, t)) != tuple_signature(g.q(), g.r(), t)) {
      res.ok = false;
      res.detail = "signature changes on " + show(t);
      return false;
    }
    return true;
  };
  if (!samples) {
    for (const auto& pi : elems) {
      for (std::uint64_t idx = 0; idx < total; ++idx) {
        if (!test(pi, idx)) return res;
      }
    }
    return res;
  }
  std::uniform_int_distribution<std::size_t> pick_elem(0, elems.size() - 1);
  std::uniform_int_distribution<std::uint64_t> pick_tuple(0, total - 1);
  for (std::size_t s = 0; s < *samples; ++s) {
    const auto& pi = elems[pick_elem(rng)];
    if (!test(pi, pick_tuple(rng))) return res;
  }
  return res;
}

CheckResult check_completeness(const SylowGroup& g, std::size_t l, std::optional<std::size_t> samples,
                               std::mt19937_64& rng) {
  CheckResult res;
  const std::uint64_t n = g.degree(), total = ipow(n, l);
  const auto orbit = tuple_orbits(g, l);
  std::vector<SignatureVector> sig(total);
  for (std::uint64_t idx = 0; idx < total; ++idx) sig[idx] = tuple_signature(g.q(), g.r(), eq::decode_tuple(idx, n, l));
  auto test_class = [&](std::uint64_t idx) {
    for (std::uint64_t other = 0; other < total; ++other) {
      if (sig[other] != sig[idx]) continue;
      ++res.checked;
      if (orbit[other] != orbit[idx]) {
        res.ok = false;
        res.detail = "equal signatures but different orbits: " + show(eq::decode_tuple(idx, n, l)) + " and " +
                     show(eq::decode_tuple(other, n, l));
        return false;
      }
    }
    return true;
  };
  if (!samples) {
    // One representative per signature class suffices.
    std::map<SignatureVector, std::uint64_t> first;
    for (std::uint64_t idx = 0; idx < total; ++idx) first.emplace(sig[idx], idx);
    for (const auto& [s, idx] : first) {
      if (!test_class(idx)) return res;
    }
    return res;
  }
  std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
  for (std::size_t s = 0; s < *samples; ++s) {
    if (!test_class(pick(rng))) return res;
  }
  return res;
}

CheckResult check_counting(std::uint32_t q, std::uint32_t r, std::uint32_t p, std::size_t l) {
  CheckResult res;
  const std::uint64_t n = leaf_count(q, r), total = ipow(n, l);

  // Candidate signature vectors: every well-formed entry per pair.
  std::vector<Signature> options{{0, 0}};
  for (std::uint32_t h = 1; h <= r; ++h) {
    for (std::uint32_t z = 0; z < q; ++z) options.push_back({h, z});
  }
  std::vector<SignatureVector> candidates;
  {
    const std::size_t m = pair_count(l);
    std::vector<std::size_t> pick(m, 0);
    while (true) {
      SignatureVector s(m);
      for (std::size_t t = 0; t < m; ++t) s[t] = options[pick[t]];
      candidates.push_back(std::move(s));
      std::size_t pos = m;
      bool done = m == 0;
      while (pos > 0) {
        --pos;
        if (++pick[pos] < options.size()) break;
        pick[pos] = 0;
        if (pos == 0) done = true;
      }
      if (done) break;
    }
  }

  struct Bucket {
    std::uint64_t count = 0;
    std::vector<std::uint32_t> least;
  };
  auto compare = [&](const Realization& got, const Bucket* want, const std::string& what) {
    ++res.checked;
    const std::uint64_t exact = want ? want->count : 0;
    if (got.residue != exact % p || got.realizable != (exact > 0) ||
        (exact > 0 && got.witness != want->least)) {
      res.ok = false;
      res.detail = what + ": expected " + std::to_string(exact) + " (mod " + std::to_string(p) + " = " +
                   std::to_string(exact % p) + "), got residue " + std::to_string(got.residue) +
                   (got.realizable ? " realizable" : " unrealizable");
      return false;
    }
    return true;
  };
  auto sig_text = [](const SignatureVector& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
      out += (i ? "," : "") + std::string("(") + std::to_string(s[i].level) + "," + std::to_string(s[i].offset) + ")";
    }
    return out + "]";
  };

  // Fixed prefixes over the whole tree.
  for (std::size_t s = 0; s <= std::min<std::size_t>(l, 2); ++s) {
    std::map<std::pair<SignatureVector, std::vector<std::uint32_t>>, Bucket> buckets;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      const auto t = eq::decode_tuple(idx, n, l);
      auto& b = buckets[{tuple_signature(q, r, t), std::vector<std::uint32_t>(t.begin(), t.begin() + s)}];
      if (b.count++ == 0) b.least = t;  // enumeration is lexicographic
    }
    for (std::uint64_t pre = 0; pre < ipow(n, s); ++pre) {
      const auto prefix = eq::decode_tuple(pre, n, s);
      for (const auto& sigma : candidates) {
        const auto got = count_realizations(q, r, p, l, sigma, r, 0, prefix);
        auto it = buckets.find({sigma, prefix});
        if (!compare(got, it == buckets.end() ? nullptr : &it->second,
                     "sigma " + sig_text(sigma) + " prefix " + show(prefix))) {
          return res;
        }
      }
    }
  }

  // Free tuples inside every proper sub-block.
  for (std::uint32_t i = 0; i < r; ++i) {
    const std::uint64_t size = ipow(q, i);
    for (std::uint64_t x = 0; x < n / size; ++x) {
      std::map<SignatureVector, Bucket> buckets;
      for (std::uint64_t idx = 0; idx < ipow(size, l); ++idx) {
        auto t = eq::decode_tuple(idx, size, l);
        for (auto& v : t) v += static_cast<std::uint32_t>(x * size);
        auto& b = buckets[tuple_signature(q, r, t)];
        if (b.count++ == 0) b.least = t;
      }
      for (const auto& sigma : candidates) {
        const auto got = count_realizations(q, r, p, l, sigma, i, x, {});
        auto it = buckets.find(sigma);
        if (!compare(got, it == buckets.end() ? nullptr : &it->second,
                     "sigma " + sig_text(sigma) + " in block P_" + std::to_string(i) + "^" + std::to_string(x))) {
          return res;
        }
      }
    }
  }
  return res;
}

ChainReport check_chain(const eq::Formula& alpha, std::uint32_t q, std::uint32_t r, std::uint32_t p) {
  ChainReport rep;
  const SylowGroup g(q, r);
  const std::uint64_t n = g.degree();
  const std::size_t k = alpha.k(), l = alpha.l();
  const gfp::Matrix m = eq::build_matrix(alpha, n, p);
  rep.full_rows = m.rows();
  rep.full_cols = m.cols();
  rep.solvable_full = gfp::is_solvable(gfp::LinearSystem::all_ones(m));

  std::vector<Permutation> row_gens;
  for (const auto& gen : g.generators()) row_gens.push_back(power_action(gen, k));
  const symred::PermutationGroup delta_rows(m.rows(), row_gens);
  const gfp::Matrix avg = symred::group_average(m, delta_rows);
  rep.solvable_averaged = gfp::is_solvable(gfp::LinearSystem::all_ones(avg));

  const auto row_orbits = symred::orbits(delta_rows);
  std::vector<Permutation> col_gens;
  for (const auto& gen : g.generators()) col_gens.push_back(power_action(gen, l));
  const auto col_orbits = symred::orbits(symred::PermutationGroup(m.cols(), col_gens));
  gfp::Matrix dedup(p, row_orbits.block_count(), col_orbits.block_count());
  for (std::size_t a = 0; a < row_orbits.block_count(); ++a) {
    for (std::size_t b = 0; b < col_orbits.block_count(); ++b) {
      dedup.set(a, b, avg(row_orbits.blocks()[a].front(), col_orbits.blocks()[b].front()));
    }
  }
  rep.solvable_dedup = gfp::is_solvable(gfp::LinearSystem::all_ones(dedup));

  const CompactMatrix compact = compact_matrix(alpha, q, r, p);
  rep.compact_rows = compact.matrix.rows();
  rep.compact_cols = compact.matrix.cols();
  rep.solvable_compact = gfp::is_solvable(gfp::LinearSystem::all_ones(compact.matrix));

  // Orbits correspond to realizable signatures one to one.
  auto index_of = [](const std::vector<SignatureVector>& list, const SignatureVector& s) -> std::int64_t {
    auto it = std::lower_bound(list.begin(), list.end(), s);
    return it != list.end() && *it == s ? it - list.begin() : -1;
  };
  std::vector<std::int64_t> row_sig(row_orbits.block_count()), col_sig(col_orbits.block_count());
  rep.orbits_match_signatures = row_orbits.block_count() == compact.row_signatures.size() &&
                                col_orbits.block_count() == compact.col_signatures.size();
  for (std::size_t a = 0; a < row_orbits.block_count() && rep.orbits_match_signatures; ++a) {
    std::set<SignatureVector> seen;
    for (auto idx : row_orbits.blocks()[a]) seen.insert(tuple_signature(q, r, eq::decode_tuple(idx, n, k)));
    row_sig[a] = seen.size() == 1 ? index_of(compact.row_signatures, *seen.begin()) : -1;
    rep.orbits_match_signatures = row_sig[a] >= 0;
  }
  for (std::size_t b = 0; b < col_orbits.block_count() && rep.orbits_match_signatures; ++b) {
    std::set<SignatureVector> seen;
    for (auto idx : col_orbits.blocks()[b]) seen.insert(tuple_signature(q, r, eq::decode_tuple(idx, n, l)));
    col_sig[b] = seen.size() == 1 ? index_of(compact.col_signatures, *seen.begin()) : -1;
    rep.orbits_match_signatures = col_sig[b] >= 0;
  }
  if (!rep.orbits_match_signatures) return rep;

  // Brute orbit counts: |{b in orbit : M(witness, b) = 1}| mod p.
  rep.entries_match = true;
  rep.stabilizer_scaling = true;
  const std::uint64_t order = g.order();
  for (std::size_t a = 0; a < row_orbits.block_count(); ++a) {
    const std::size_t ci_row = static_cast<std::size_t>(row_sig[a]);
    const std::uint64_t wit_idx = eq::encode_tuple(compact.row_witnesses[ci_row], n);
    const std::uint64_t rep_idx = row_orbits.blocks()[a].front();
    for (std::size_t b = 0; b < col_orbits.block_count(); ++b) {
      const std::size_t ci_col = static_cast<std::size_t>(col_sig[b]);
      std::uint64_t hits = 0, hits_rep = 0;
      for (auto idx : col_orbits.blocks()[b]) {
        hits += m(wit_idx, idx);
        hits_rep += m(rep_idx, idx);
      }
      const gfp::Residue entry = compact.matrix(ci_row, ci_col);
      if (entry != hits % p || hits_rep % p != entry) rep.entries_match = false;
      const std::uint64_t stab = order / col_orbits.blocks()[b].size();
      if (dedup(a, b) != (stab % p) * entry % p) rep.stabilizer_scaling = false;
    }
  }
  return rep;
}

}  // namespace cfiforge::sylow::check
