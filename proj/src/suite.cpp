#include "cfiforge/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "cfiforge/cfi.hpp"
#include "cfiforge/eqformula.hpp"
#include "cfiforge/gfp.hpp"
#include "cfiforge/isoles.hpp"
#include "cfiforge/sylow.hpp"
#include "cfiforge/sylow_check.hpp"
#include "cfiforge/symred.hpp"
#include "cfiforge/wl.hpp"

namespace cfiforge::suite {
namespace {

CriterionResult start(int id, const char* name, double limit) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.limit = limit;
  return r;
}

// All gadget vectors in F_q^n, lexicographic.
std::vector<std::vector<std::uint32_t>> all_vectors(std::uint32_t q, std::size_t n) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> d(n, 0);
  while (true) {
    out.push_back(d);
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++d[i] < q) break;
      d[i] = 0;
      if (i == 0) return out;
    }
    if (n == 0) return out;
  }
}

std::uint32_t sum_mod(const std::vector<std::uint32_t>& d, std::uint32_t q) {
  return static_cast<std::uint32_t>(std::accumulate(d.begin(), d.end(), std::uint64_t{0}) % q);
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

// Partition of [0, n) from a labelling, as sorted blocks ordered by least element.
std::vector<std::vector<std::uint32_t>> blocks_of(const std::vector<std::uint32_t>& label) {
  std::map<std::uint32_t, std::vector<std::uint32_t>> by;
  for (std::uint32_t i = 0; i < label.size(); ++i) by[label[i]].push_back(i);
  std::vector<std::vector<std::uint32_t>> out;
  for (auto& [l, b] : by) out.push_back(std::move(b));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

CriterionResult iso_class_law(const Options&) {
  auto res = start(1, "iso-class law", 5);
  std::vector<std::string> parts;
  res.passed = true;
  const auto g = rel::complete_graph(4);
  for (std::uint32_t q : {2u, 3u}) {
    const auto ds = all_vectors(q, 4);
    std::vector<cfi::CfiInstance> insts;
    for (const auto& d : ds) insts.emplace_back(g, q, d);
    // Classes of the oracle relation, compared pairwise against the sum law.
    std::size_t mismatches = 0;
    std::vector<int> cls(insts.size(), -1);
    int classes = 0;
    for (std::size_t a = 0; a < insts.size(); ++a) {
      for (std::size_t b = a; b < insts.size(); ++b) {
        const bool iso = cfi::brute_iso_oracle(insts[a], insts[b]);
        if (iso != (sum_mod(ds[a], q) == sum_mod(ds[b], q))) ++mismatches;
      }
      if (cls[a] < 0) {
        cls[a] = classes++;
        for (std::size_t b = a + 1; b < insts.size(); ++b) {
          if (cls[b] < 0 && cfi::brute_iso_oracle(insts[a], insts[b])) cls[b] = cls[a];
        }
      }
    }
    const bool ok = mismatches == 0 && classes == static_cast<int>(q);
    res.passed = res.passed && ok;
    parts.push_back("q=" + std::to_string(q) + ": " + std::to_string(insts.size()) + " instances, " +
                    std::to_string(classes) + " oracle classes, " + std::to_string(mismatches) + " pair mismatches");
  }
  res.detail = join(parts);
  return res;
}

CriterionResult les_correctness(const Options&) {
  auto res = start(2, "LES correctness", 60);
  std::vector<std::string> parts;
  res.passed = true;
  for (std::uint32_t q : {2u, 3u}) {
    for (std::size_t n : {4u, 5u}) {
      const auto g = rel::complete_graph(n);
      std::size_t checks = 0, bad = 0;
      for (const auto& d : all_vectors(q, n)) {
        const auto s = cfi::build(cfi::CfiInstance(g, q, d));
        for (std::uint32_t z = 0; z < q; ++z) {
          const bool solvable = gfp::is_solvable(isoles::build_system(s, z).system);
          ++checks;
          if (solvable != (sum_mod(d, q) == z)) ++bad;
        }
      }
      res.passed = res.passed && bad == 0;
      parts.push_back("K" + std::to_string(n) + " q=" + std::to_string(q) + ": " + std::to_string(checks) +
                      " systems, " + std::to_string(bad) + " wrong");
    }
  }
  res.detail = join(parts);
  return res;
}

CriterionResult canonisation(const Options&) {
  auto res = start(3, "canonisation", 10);
  const auto g = rel::complete_graph(4);
  std::vector<cfi::CfiInstance> insts;
  std::vector<rel::Structure> canon;
  for (const auto& d : all_vectors(2, 4)) {
    insts.emplace_back(g, 2, d);
    canon.push_back(cfi::canonical_form(insts.back()));
  }
  std::size_t pairs = 0, bad = 0, self_bad = 0;
  for (std::size_t a = 0; a < insts.size(); ++a) {
    // The canonical representative is itself isomorphic to the input.
    const cfi::CfiInstance rep(g, 2, {cfi::iso_class(insts[a]), 0, 0, 0});
    if (!(cfi::build(rep) == canon[a]) || !cfi::brute_iso_oracle(insts[a], rep)) ++self_bad;
    for (std::size_t b = 0; b < insts.size(); ++b) {
      ++pairs;
      if ((canon[a] == canon[b]) != cfi::brute_iso_oracle(insts[a], insts[b])) ++bad;
    }
  }
  res.passed = bad == 0 && self_bad == 0;
  res.detail = std::to_string(pairs) + " ordered pairs, " + std::to_string(bad) + " disagreements with the oracle, " +
               std::to_string(self_bad) + " representatives not isomorphic to their input";
  return res;
}

CriterionResult wl_indistinguishability(const Options& opts) {
  auto res = start(4, "WL indistinguishability", 120);
  std::vector<std::string> parts;
  res.passed = true;
  wl::Options w;
  w.threads = opts.threads;

  {
    const auto g = rel::complete_graph(4);
    std::vector<rel::Structure> ss;
    for (const auto& d : all_vectors(2, 4)) ss.push_back(cfi::build(cfi::CfiInstance(g, 2, d)));
    w.k = 1;
    std::size_t pairs = 0, distinguished = 0;
    for (std::size_t a = 0; a < ss.size(); ++a) {
      for (std::size_t b = a + 1; b < ss.size(); ++b) {
        ++pairs;
        if (wl::wl_distinguish(ss[a], ss[b], w).distinguished) ++distinguished;
      }
    }
    res.passed = res.passed && distinguished == 0;
    parts.push_back("1-WL on CFI_2(K4): " + std::to_string(pairs) + " pairs, " + std::to_string(distinguished) +
                    " distinguished");
  }
  const auto k5 = rel::complete_graph(5);
  auto run_pair = [&](std::uint32_t q, std::uint32_t za, std::uint32_t zb) {
    w.k = 2;
    const auto a = cfi::build(cfi::CfiInstance(k5, q, {za, 0, 0, 0, 0}));
    const auto b = cfi::build(cfi::CfiInstance(k5, q, {zb, 0, 0, 0, 0}));
    const auto v = wl::wl_distinguish(a, b, w);
    res.passed = res.passed && !v.distinguished;
    parts.push_back("2-WL CFI_" + std::to_string(q) + "(K5) sum " + std::to_string(za) + " vs " + std::to_string(zb) +
                    ": " + v.verdict_name() + " after " + std::to_string(v.rounds) + " rounds");
  };
  run_pair(2, 0, 1);
  run_pair(3, 0, 1);
  run_pair(3, 0, 2);
  run_pair(3, 1, 2);
  res.detail = join(parts);
  return res;
}

CriterionResult orbit_correspondence(const Options& opts) {
  auto res = start(5, "orbit correspondence", 60);
  std::vector<std::string> parts;
  res.passed = true;
  const auto g = rel::complete_graph(5);
  for (const std::vector<std::uint32_t>& d : {std::vector<std::uint32_t>{0, 0, 0, 0, 0},
                                              std::vector<std::uint32_t>{1, 0, 0, 0, 0}}) {
    const cfi::CfiInstance inst(g, 2, d);
    const auto s = cfi::build(inst);
    wl::Options w;
    w.k = 2;
    w.threads = opts.threads;
    const auto diag = wl::wl_refine(s, w).diagonal();
    const auto wl_blocks = blocks_of(diag);

    const auto auts = cfi::automorphisms(inst);
    std::vector<Permutation> gens;
    for (const auto& t : auts) {
      auto tw = cfi::apply_twist(inst, t);
      if (!(tw.instance == inst) || !rel::is_isomorphism(s, s, tw.element_map)) {
        res.passed = false;
        parts.push_back("an enumerated automorphism fails to preserve the structure");
      }
      gens.push_back(std::move(tw.element_map));
    }
    const auto orbit_blocks = symred::orbits(symred::PermutationGroup(s.universe(), gens)).blocks();
    const bool ok = auts.size() == 64 && wl_blocks.size() == 25 && wl_blocks == orbit_blocks;
    res.passed = res.passed && ok;
    parts.push_back("d=" + std::to_string(cfi::iso_class(inst)) + "...: " + std::to_string(auts.size()) +
                    " automorphisms, " + std::to_string(orbit_blocks.size()) + " orbits, " +
                    std::to_string(wl_blocks.size()) + " diagonal colours, partitions " +
                    (wl_blocks == orbit_blocks ? "equal" : "differ"));
  }
  res.detail = join(parts);
  return res;
}

namespace {

struct RandomSystem {
  gfp::LinearSystem sys;
  symred::PermutationGroup gamma;
  std::uint32_t q;
};

// Gamma acting on rows and columns, built from either translations of
// F_q^m on several copies or a Sylow group on tuples.
RandomSystem random_symmetric_system(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<Permutation> row_gens, col_gens;
  std::size_t rows = 0, cols = 0;
  std::uint32_t q = 2;
  if (coin(rng) == 0) {
    const std::uint32_t qs[] = {2, 3, 5};
    q = qs[rng() % 3];
    const std::size_t m = q == 5 ? 1 : 1 + rng() % 2;
    std::size_t size = 1;
    for (std::size_t i = 0; i < m; ++i) size *= q;
    const std::size_t row_copies = 1 + rng() % 3, col_copies = 1 + rng() % 3;
    const std::size_t row_fixed = rng() % 3, col_fixed = rng() % 3;
    rows = row_copies * size + row_fixed;
    cols = col_copies * size + col_fixed;
    for (std::size_t axis = 0; axis < m; ++axis) {
      std::size_t stride = 1;
      for (std::size_t i = 0; i < axis; ++i) stride *= q;
      auto translate = [&](std::size_t copies, std::size_t fixed) {
        Permutation p(copies * size + fixed);
        std::iota(p.begin(), p.end(), 0u);
        for (std::size_t c = 0; c < copies; ++c) {
          for (std::size_t v = 0; v < size; ++v) {
            const std::size_t digit = (v / stride) % q;
            const std::size_t w = v - digit * stride + ((digit + 1) % q) * stride;
            p[c * size + v] = static_cast<std::uint32_t>(c * size + w);
          }
        }
        return p;
      };
      row_gens.push_back(translate(row_copies, row_fixed));
      col_gens.push_back(translate(col_copies, col_fixed));
    }
  } else {
    const std::pair<std::uint32_t, std::uint32_t> shapes[] = {{2, 2}, {2, 3}, {3, 2}, {2, 1}, {3, 1}};
    const auto [sq, sr] = shapes[rng() % 5];
    q = sq;
    const sylow::SylowGroup g(sq, sr);
    const std::size_t n = g.degree();
    const std::size_t row_len = n * n <= 64 ? 1 + rng() % 2 : 1;
    const std::size_t col_len = n * n <= 64 ? 1 + rng() % 2 : 1;
    for (const auto& gen : g.generators()) {
      row_gens.push_back(power_action(gen, row_len));
      col_gens.push_back(power_action(gen, col_len));
    }
    rows = row_gens.front().size();
    cols = col_gens.front().size();
  }
  const std::uint32_t primes[] = {2, 3, 5, 7};
  std::uint32_t p = q;
  while (p == q) p = primes[rng() % 4];

  // Orbit-constant matrix: union-find over the diagonal action on I x J.
  std::vector<std::uint32_t> parent(rows * cols);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t gi = 0; gi < row_gens.size(); ++gi) {
    for (std::size_t a = 0; a < rows; ++a) {
      for (std::size_t b = 0; b < cols; ++b) {
        const auto x = find(static_cast<std::uint32_t>(a * cols + b));
        const auto y = find(row_gens[gi][a] * static_cast<std::uint32_t>(cols) + col_gens[gi][b]);
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
      }
    }
  }
  std::uniform_int_distribution<std::uint32_t> value(0, p - 1);
  const double density = std::uniform_real_distribution<double>(0.05, 0.6)(rng);
  std::map<std::uint32_t, gfp::Residue> orbit_value;
  gfp::Matrix m(p, rows, cols);
  for (std::size_t a = 0; a < rows; ++a) {
    for (std::size_t b = 0; b < cols; ++b) {
      const auto root = find(static_cast<std::uint32_t>(a * cols + b));
      auto it = orbit_value.find(root);
      if (it == orbit_value.end()) {
        gfp::Residue v = 0;
        if (std::uniform_real_distribution<double>(0, 1)(rng) < density) v = 1 + value(rng) % (p - 1);
        it = orbit_value.emplace(root, v).first;
      }
      m.set(a, b, it->second);
    }
  }
  std::vector<Permutation> gens;
  for (std::size_t gi = 0; gi < row_gens.size(); ++gi) {
    Permutation both(rows + cols);
    for (std::size_t a = 0; a < rows; ++a) both[a] = row_gens[gi][a];
    for (std::size_t b = 0; b < cols; ++b) both[rows + b] = static_cast<std::uint32_t>(rows + col_gens[gi][b]);
    gens.push_back(std::move(both));
  }
  return {gfp::LinearSystem::all_ones(std::move(m)), symred::PermutationGroup(rows + cols, std::move(gens)), q};
}

}  // namespace

CriterionResult symmetric_folding(const Options& opts) {
  auto res = start(6, "symmetric solution and folding", 30);
  std::mt19937_64 rng(opts.seed ^ 0x6a09e667f3bcc908ull);
  std::size_t solvable = 0, bad = 0;
  std::string first_bad;
  for (int trial = 0; trial < 200; ++trial) {
    const auto rs = random_symmetric_system(rng);
    const auto& m = rs.sys.matrix();
    const bool plain = gfp::is_solvable(rs.sys);
    const auto folded_sys = symred::fold_columns(rs.sys, symred::orbits(rs.gamma, m.rows(), m.cols()));
    const bool folded = gfp::is_solvable(folded_sys);
    const auto sym = symred::symmetric_solution(rs.sys, rs.gamma);
    bool ok = plain == folded && plain == sym.has_value();
    if (sym) {
      ok = ok && gfp::satisfies(rs.sys, *sym);
      for (const auto& g : rs.gamma.elements()) {
        const auto act = symred::split_action(g, m.rows(), m.cols());
        for (std::size_t b = 0; b < m.cols(); ++b) ok = ok && (*sym)[act.cols[b]] == (*sym)[b];
      }
    }
    solvable += plain;
    if (!ok) {
      ++bad;
      if (first_bad.empty()) first_bad = " (first failure at trial " + std::to_string(trial) + ")";
    }
  }
  // p = q: folding [1 1 1] over F_3 by C_3 loses solvability and must be refused.
  bool guard = false;
  {
    const gfp::LinearSystem sys = gfp::LinearSystem::all_ones(gfp::Matrix::from_rows(3, {{1, 1, 1}}));
    const symred::PermutationGroup c3(4, {{0, 2, 3, 1}});
    const bool plain = gfp::is_solvable(sys);
    const bool folded = gfp::is_solvable(symred::fold_columns(sys, symred::orbits(c3, 1, 3)));
    try {
      (void)symred::symmetric_solution(sys, c3);
    } catch (const symred::PreconditionError&) {
      guard = plain && !folded;
    }
  }
  res.passed = bad == 0 && guard && solvable > 0 && solvable < 200;
  res.detail = "200 systems (" + std::to_string(solvable) + " solvable), " + std::to_string(bad) + " failures" +
               first_bad + "; F_3/C_3 counterexample " + (guard ? "rejected at the precondition" : "NOT rejected");
  return res;
}

CriterionResult rank_via_solvability(const Options& opts) {
  auto res = start(7, "rank via solvability", 10);
  std::mt19937_64 rng(opts.seed ^ 0xbb67ae8584caa73bull);
  const std::uint32_t primes[] = {2, 3, 5};
  std::size_t bad = 0, queries = 0;
  std::map<std::size_t, std::size_t> rank_hist;
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t p = primes[trial % 3];
    const std::size_t rows = 1 + rng() % 12, cols = 1 + rng() % 12;
    gfp::Matrix m(p, rows, cols);
    std::uniform_int_distribution<std::uint32_t> val(0, p - 1);
    if (rng() % 2) {
      // Product of thin factors for a spread of low ranks.
      const std::size_t t = rng() % (std::min(rows, cols) + 1);
      gfp::Matrix a(p, rows, std::max<std::size_t>(t, 1)), b(p, std::max<std::size_t>(t, 1), cols);
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < t; ++j) a.set(i, j, val(rng));
      for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = 0; j < cols; ++j) b.set(i, j, val(rng));
      m = gfp::multiply(a, b);
    } else {
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.set(i, j, val(rng));
    }
    std::vector<std::uint32_t> order(cols);
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<std::uint32_t>> blocks;
    for (std::size_t i = 0; i < cols;) {
      const std::size_t len = 1 + rng() % (cols - i);
      blocks.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                          order.begin() + static_cast<std::ptrdiff_t>(i + len));
      i += len;
    }
    const auto got = symred::rank_via_solvability(m, symred::OrbitPartition(cols, std::move(blocks)));
    const std::size_t want = gfp::rank(m);
    queries += got.queries;
    ++rank_hist[want];
    if (got.rank != want) ++bad;
  }
  res.passed = bad == 0;
  res.detail = "200 matrices, " + std::to_string(bad) + " mismatches, " + std::to_string(queries) +
               " solvability queries, " + std::to_string(rank_hist.size()) + " distinct ranks";
  return res;
}

CriterionResult sylow_structure(const Options& opts) {
  auto res = start(8, "Sylow structure", 60);
  std::mt19937_64 rng(opts.seed ^ 0x3c6ef372fe94f82bull);
  std::vector<std::string> parts;
  res.passed = true;
  const std::tuple<std::uint32_t, std::uint32_t, std::uint64_t> shapes[] = {{2, 2, 8}, {2, 3, 128}, {3, 2, 81}};
  for (const auto& [q, r, expected] : shapes) {
    const sylow::SylowGroup g(q, r);
    const auto grp = sylow::check::check_group(g);
    bool ok = grp.ok && g.order() == expected;
    std::string why = grp.detail;
    for (std::size_t l = 1; l <= 3 && ok; ++l) {
      const std::optional<std::size_t> samples = l <= 2 ? std::nullopt : std::optional<std::size_t>(4000);
      const std::optional<std::size_t> classes = l <= 2 ? std::nullopt : std::optional<std::size_t>(40);
      const auto inv = sylow::check::check_invariance(g, l, samples, rng);
      const auto com = sylow::check::check_completeness(g, l, classes, rng);
      ok = inv.ok && com.ok;
      if (!ok) why = "l=" + std::to_string(l) + ": " + inv.detail + com.detail;
    }
    res.passed = res.passed && ok;
    parts.push_back("(q,r)=(" + std::to_string(q) + "," + std::to_string(r) + "): order " +
                    std::to_string(grp.checked) + (ok ? ", invariance and completeness hold" : ", FAILED " + why));
  }
  res.detail = join(parts);
  return res;
}

CriterionResult counting(const Options&) {
  auto res = start(9, "realization counting", 60);
  std::vector<std::string> parts;
  res.passed = true;
  const std::tuple<std::uint32_t, std::uint32_t, std::uint32_t> configs[] = {{2, 2, 3}, {2, 3, 3}, {3, 2, 2}};
  for (const auto& [q, r, p] : configs) {
    std::uint64_t checked = 0;
    bool ok = true;
    std::string why;
    for (std::size_t l = 1; l <= 3 && ok; ++l) {
      const auto c = sylow::check::check_counting(q, r, p, l);
      checked += c.checked;
      ok = c.ok;
      why = c.detail;
    }
    res.passed = res.passed && ok;
    parts.push_back("(q,r,p)=(" + std::to_string(q) + "," + std::to_string(r) + "," + std::to_string(p) + "): " +
                    std::to_string(checked) + " counts" + (ok ? " agree" : ", FAILED " + why));
  }
  res.detail = join(parts);
  return res;
}

CriterionResult compact_equivalence(const Options& opts) {
  auto res = start(10, "compact-system equivalence", 120);
  std::mt19937_64 rng(opts.seed ^ 0xa54ff53a5f1d36f1ull);
  std::size_t bad = 0, solvable = 0;
  std::string first_bad;
  for (int trial = 0; trial < 50; ++trial) {
    const bool nine = trial % 2 == 1;
    const std::size_t k = 1 + rng() % 2, l = 1 + rng() % 2;
    const auto alpha = eq::random_formula(k, l, rng() % 6, rng);
    const auto rep = nine ? sylow::check::check_chain(alpha, 3, 2, 2) : sylow::check::check_chain(alpha, 2, 3, 3);
    solvable += rep.solvable_full;
    if (!rep.consistent()) {
      ++bad;
      if (first_bad.empty()) first_bad = " (first failure: " + alpha.to_string() + ")";
    }
  }
  res.passed = bad == 0;
  res.detail = "50 formulas (" + std::to_string(solvable) + " with solvable M_n), " + std::to_string(bad) +
               " broken chains" + first_bad;
  return res;
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{iso_class_law,          les_correctness,      canonisation,
                                          wl_indistinguishability, orbit_correspondence, symmetric_folding,
                                          rank_via_solvability,   sylow_structure,      counting,
                                          compact_equivalence};
  return all;
}

std::vector<CriterionResult> run(const Options& opts, const std::vector<int>& only) {
  std::vector<CriterionResult> out;
  const auto& all = criteria();
  for (std::size_t i = 0; i < all.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = all[i](opts);
    } catch (const std::exception& e) {
      r.id = id;
      r.name = "criterion " + std::to_string(id);
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.limit > 0 && r.seconds >= r.limit) {
      r.passed = false;
      r.detail += "; exceeded the time limit";
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string format(const CriterionResult& r) {
  char head[128];
  std::snprintf(head, sizeof head, "[%s] %2d %s (%.2f s / %.0f s): ", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.limit);
  return head + r.detail;
}

}  // namespace cfiforge::suite
