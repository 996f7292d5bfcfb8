#include "cfiforge/wl.hpp"

#include <algorithm>
#include <stdexcept>
#include <cmath>
#include <thread>

namespace cfiforge::wl {
namespace {

using rel::Element;

std::uint64_t mix(std::uint64_t h, std::uint64_t w) {
  h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ull;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebull;
  h ^= h >> 31;
  return h;
}

struct Sig {
  std::uint32_t old;
  std::uint64_t h1, h2;
  friend auto operator<=>(const Sig&, const Sig&) = default;
};

std::uint64_t ipow(std::size_t n, std::size_t k) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= n;
  return r;
}

void decode(std::uint64_t idx, std::size_t n, std::size_t k, std::vector<Element>& out) {
  out.resize(k);
  for (std::size_t j = k; j-- > 0;) {
    out[j] = static_cast<Element>(idx % n);
    idx /= n;
  }
}

// One structure's refinement state.
struct Track {
  const rel::Structure* s;
  std::size_t n;
  std::uint64_t tuples;
  std::vector<std::uint32_t> colors;
  // Ids of atomic types of the extended tuples (t, c), indexed t * n + c,
  // when required.
  std::vector<std::uint32_t> ext;
};

bool needs_extended_type(const rel::Structure& s, std::size_t k) {
  if (k == 1) return true;
  for (const auto& r : s.relations()) {
    if (r.arity() > k) return true;
  }
  return false;
}

// Maps codes to ids shared by all tracks: ids follow sorted code order.
template <class Code>
std::vector<std::vector<std::uint32_t>> assign_ids(const std::vector<std::vector<Code>>& codes) {
  std::vector<Code> all;
  for (const auto& c : codes) all.insert(all.end(), c.begin(), c.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<std::vector<std::uint32_t>> ids(codes.size());
  for (std::size_t t = 0; t < codes.size(); ++t) {
    ids[t].resize(codes[t].size());
    for (std::size_t i = 0; i < codes[t].size(); ++i) {
      ids[t][i] = static_cast<std::uint32_t>(std::lower_bound(all.begin(), all.end(), codes[t][i]) - all.begin());
    }
  }
  return ids;
}

std::size_t distinct(const std::vector<Track>& tracks) {
  std::vector<std::uint32_t> all;
  for (const auto& t : tracks) all.insert(all.end(), t.colors.begin(), t.colors.end());
  std::sort(all.begin(), all.end());
  return static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
}

Histogram histogram(const Track& t) {
  Histogram h;
  for (auto c : t.colors) ++h[c];
  return h;
}

template <class F>
void parallel_for(std::uint64_t count, unsigned threads, F&& body) {
  if (threads <= 1 || count < 1024) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (count + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t lo = w * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

class JointRefiner {
 public:
  JointRefiner(std::vector<const rel::Structure*> structures, const Options& opts) : opts_(opts) {
    if (opts.k == 0) throw std::invalid_argument("wl: dimension k must be >= 1");
    for (const auto* s : structures) {
      const std::uint64_t tuples = ipow(s->universe(), opts.k);
      if (static_cast<long double>(s->universe()) > 0 &&
          (tuples > opts.caps.wl_tuples ||
           std::pow(static_cast<long double>(s->universe()), opts.k) > static_cast<long double>(opts.caps.wl_tuples))) {
        throw ResourceCapError("wl: n^k = " + std::to_string(s->universe()) + "^" + std::to_string(opts.k) +
                               " exceeds the tuple cap of " + std::to_string(opts.caps.wl_tuples));
      }
      tracks_.push_back(Track{s, s->universe(), tuples, {}, {}});
    }
    extended_ = false;
    for (const auto& t : tracks_) extended_ = extended_ || needs_extended_type(*t.s, opts.k);
    initial_colors();
  }

  std::vector<Track>& tracks() { return tracks_; }

  // Returns the number of colours after the round.
  std::size_t refine_round() {
    std::vector<std::vector<Sig>> sigs(tracks_.size());
    for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
      auto& tr = tracks_[ti];
      sigs[ti].resize(tr.tuples);
      parallel_for(tr.tuples, opts_.threads, [&](std::uint64_t lo, std::uint64_t hi) {
        compute_signatures(tr, lo, hi, sigs[ti]);
      });
    }
    auto ids = assign_ids(sigs);
    for (std::size_t ti = 0; ti < tracks_.size(); ++ti) tracks_[ti].colors = std::move(ids[ti]);
    return distinct(tracks_);
  }

 private:
  void initial_colors() {
    const std::size_t k = opts_.k;
    std::vector<std::vector<std::vector<std::uint32_t>>> codes(tracks_.size());
    std::vector<Element> tuple;
    for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
      auto& tr = tracks_[ti];
      codes[ti].resize(tr.tuples);
      for (std::uint64_t idx = 0; idx < tr.tuples; ++idx) {
        decode(idx, tr.n, k, tuple);
        codes[ti][idx] = rel::atomic_type(*tr.s, tuple);
      }
    }
    auto ids = assign_ids(codes);
    for (std::size_t ti = 0; ti < tracks_.size(); ++ti) tracks_[ti].colors = std::move(ids[ti]);
    if (!extended_) return;
    std::vector<std::vector<std::vector<std::uint32_t>>> ext_codes(tracks_.size());
    for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
      auto& tr = tracks_[ti];
      ext_codes[ti].resize(tr.tuples * tr.n);
      for (std::uint64_t idx = 0; idx < tr.tuples; ++idx) {
        decode(idx, tr.n, k, tuple);
        tuple.push_back(0);
        for (std::size_t c = 0; c < tr.n; ++c) {
          tuple[k] = static_cast<Element>(c);
          ext_codes[ti][idx * tr.n + c] = rel::atomic_type(*tr.s, tuple);
        }
      }
    }
    auto ext_ids = assign_ids(ext_codes);
    for (std::size_t ti = 0; ti < tracks_.size(); ++ti) tracks_[ti].ext = std::move(ext_ids[ti]);
  }

  void compute_signatures(const Track& tr, std::uint64_t lo, std::uint64_t hi, std::vector<Sig>& out) const {
    const std::size_t k = opts_.k;
    const std::size_t n = tr.n;
    const std::size_t width = k + (extended_ ? 1 : 0);
    std::vector<std::uint64_t> place(k);
    for (std::size_t j = 0; j < k; ++j) place[j] = ipow(n, k - 1 - j);
    std::vector<Element> tuple;
    std::vector<std::uint32_t> entries(n * width);
    std::vector<std::uint32_t> order(n);
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      decode(idx, n, k, tuple);
      for (std::size_t c = 0; c < n; ++c) {
        std::uint32_t* e = &entries[c * width];
        for (std::size_t j = 0; j < k; ++j) {
          const std::uint64_t sub = idx - tuple[j] * place[j] + c * place[j];
          e[j] = tr.colors[sub];
        }
        if (extended_) e[k] = tr.ext[idx * n + c];
      }
      for (std::uint32_t c = 0; c < n; ++c) order[c] = c;
      std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::lexicographical_compare(&entries[a * width], &entries[a * width] + width,
                                            &entries[b * width], &entries[b * width] + width);
      });
      std::uint64_t h1 = 0x243f6a8885a308d3ull, h2 = 0x13198a2e03707344ull;
      for (auto c : order) {
        for (std::size_t w = 0; w < width; ++w) {
          h1 = mix(h1, entries[c * width + w]);
          h2 = mix(h2 ^ 0xa4093822299f31d0ull, entries[c * width + w]);
        }
      }
      out[idx] = Sig{tr.colors[idx], h1, h2};
    }
  }

  Options opts_;
  std::vector<Track> tracks_;
  bool extended_ = false;
};

}  // namespace

std::uint32_t Coloring::color_of(std::span<const Element> tuple) const {
  if (tuple.size() != k) throw std::invalid_argument("color_of: tuple length differs from k");
  std::uint64_t idx = 0;
  for (auto e : tuple) idx = idx * universe + e;
  return colors.at(idx);
}

std::vector<std::uint32_t> Coloring::diagonal() const {
  std::vector<std::uint32_t> out(universe);
  std::vector<Element> t(k);
  for (Element a = 0; a < universe; ++a) {
    std::fill(t.begin(), t.end(), a);
    out[a] = color_of(t);
  }
  return out;
}

Coloring wl_refine(const rel::Structure& s, const Options& opts) {
  JointRefiner jr({&s}, opts);
  Coloring out;
  out.k = opts.k;
  out.universe = s.universe();
  std::size_t count = distinct(jr.tracks());
  out.classes_per_round.push_back(count);
  while (true) {
    const std::size_t next = jr.refine_round();
    if (next == count) break;
    count = next;
    out.classes_per_round.push_back(count);
    ++out.rounds;
  }
  out.colors = std::move(jr.tracks()[0].colors);
  out.color_count = count;
  return out;
}

std::string Verdict::verdict_name() const { return distinguished ? "distinguished" : "stable-equivalent"; }

Verdict wl_distinguish(const rel::Structure& a, const rel::Structure& b, const Options& opts) {
  Verdict v;
  v.k = opts.k;
  if (a.universe() != b.universe() || a.vocabulary() != b.vocabulary()) {
    if (opts.k == 0) throw std::invalid_argument("wl: dimension k must be >= 1");
    v.distinguished = true;
    v.histogram_a[0] = ipow(a.universe(), opts.k);
    v.histogram_b[0] = ipow(b.universe(), opts.k);
    return v;
  }
  const bool identical = a == b;
  JointRefiner jr({&a, &b}, opts);
  std::size_t count = distinct(jr.tracks());
  std::size_t round = 0;
  while (true) {
    v.histogram_a = histogram(jr.tracks()[0]);
    v.histogram_b = histogram(jr.tracks()[1]);
    v.round = identical ? 0 : round;
    v.rounds = round;
    if (v.histogram_a != v.histogram_b) {
      v.distinguished = true;
      return v;
    }
    const std::size_t next = jr.refine_round();
    if (next == count) return v;
    count = next;
    ++round;
  }
}

}  // namespace cfiforge::wl
