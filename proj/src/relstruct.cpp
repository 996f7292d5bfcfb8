#include "cfiforge/relstruct.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace cfiforge::rel {
namespace {

constexpr std::size_t kDenseBinaryLimit = 4096;

std::uint64_t encode(std::span<const Element> t, std::size_t universe) {
  std::uint64_t code = 0;
  for (auto e : t) code = code * universe + e;
  return code;
}

}  // namespace

Relation::Relation(std::string name, std::size_t arity, std::vector<Tuple> tuples,
                   std::size_t universe)
    : name_(std::move(name)), arity_(arity), universe_(universe), tuples_(std::move(tuples)) {
  if (arity_ == 0) throw std::invalid_argument("relation '" + name_ + "': arity must be >= 1");
  long double span = 1;
  for (std::size_t i = 0; i < arity_; ++i) span *= static_cast<long double>(std::max<std::size_t>(universe_, 1));
  if (span > static_cast<long double>(std::numeric_limits<std::uint64_t>::max())) {
    throw std::invalid_argument("relation '" + name_ + "': universe^arity too large");
  }
  for (const auto& t : tuples_) {
    if (t.size() != arity_) {
      throw std::invalid_argument("relation '" + name_ + "': tuple of length " +
                                  std::to_string(t.size()) + ", arity is " + std::to_string(arity_));
    }
    for (auto e : t) {
      if (e >= universe_) {
        throw std::invalid_argument("relation '" + name_ + "': element " + std::to_string(e) +
                                    " outside universe of size " + std::to_string(universe_));
      }
    }
  }
  std::sort(tuples_.begin(), tuples_.end());
  tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
  build_index();
}

Relation Relation::preorder_from_ranks(std::string name, std::vector<std::uint32_t> ranks) {
  Relation r;
  r.name_ = std::move(name);
  r.arity_ = 2;
  r.universe_ = ranks.size();
  r.ranks_ = std::move(ranks);
  return r;
}

void Relation::build_index() {
  if (arity_ == 2 && universe_ <= kDenseBinaryLimit) {
    bits_.assign((universe_ * universe_ + 63) / 64, 0);
    for (const auto& t : tuples_) {
      const std::size_t idx = t[0] * universe_ + t[1];
      bits_[idx / 64] |= std::uint64_t{1} << (idx % 64);
    }
    return;
  }
  codes_.reserve(tuples_.size());
  for (const auto& t : tuples_) codes_.push_back(encode(t, universe_));
  // Lexicographic tuple order equals numeric code order.
}

bool Relation::contains(Element a, Element b) const {
  if (arity_ != 2 || a >= universe_ || b >= universe_) return false;
  if (ranks_) return (*ranks_)[a] <= (*ranks_)[b];
  if (!bits_.empty()) {
    const std::size_t idx = static_cast<std::size_t>(a) * universe_ + b;
    return (bits_[idx / 64] >> (idx % 64)) & 1u;
  }
  const Element t[2] = {a, b};
  return std::binary_search(codes_.begin(), codes_.end(), encode(t, universe_));
}

bool Relation::contains(std::span<const Element> tuple) const {
  if (tuple.size() != arity_) return false;
  if (arity_ == 2) return contains(tuple[0], tuple[1]);
  for (auto e : tuple) {
    if (e >= universe_) return false;
  }
  return std::binary_search(codes_.begin(), codes_.end(), encode(tuple, universe_));
}

std::size_t Relation::size() const {
  if (!ranks_) return tuples_.size();
  std::vector<std::size_t> per_rank;
  for (auto r : *ranks_) {
    if (r >= per_rank.size()) per_rank.resize(r + 1, 0);
    ++per_rank[r];
  }
  std::size_t total = 0, below = 0;
  // Pairs (a, b) with rank[a] <= rank[b]: for each b, count a at or below.
  for (auto c : per_rank) {
    below += c;
    total += c * below;
  }
  return total;
}

std::vector<Tuple> Relation::tuples() const {
  if (!ranks_) return tuples_;
  std::vector<Tuple> out;
  const auto& rk = *ranks_;
  for (Element a = 0; a < rk.size(); ++a) {
    for (Element b = 0; b < rk.size(); ++b) {
      if (rk[a] <= rk[b]) out.push_back({a, b});
    }
  }
  return out;
}

Relation Relation::materialized(std::size_t universe) const {
  return Relation(name_, arity_, tuples(), universe);
}

Structure::Structure(std::size_t universe, std::vector<Relation> relations)
    : universe_(universe), relations_(std::move(relations)) {
  // Name order, so structures compare equal however they were assembled.
  std::stable_sort(relations_.begin(), relations_.end(),
                   [](const Relation& a, const Relation& b) { return a.name() < b.name(); });
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (relations_[i].name() == relations_[j].name()) {
        throw std::invalid_argument("structure: duplicate relation '" + relations_[i].name() + "'");
      }
    }
    if (relations_[i].universe() != universe_) {
      throw std::invalid_argument("structure: relation '" + relations_[i].name() +
                                  "' built over a different universe");
    }
  }
}

const Relation* Structure::find(std::string_view name) const {
  for (const auto& r : relations_) {
    if (r.name() == name) return &r;
  }
  return nullptr;
}

const Relation& Structure::at(std::string_view name) const {
  if (const auto* r = find(name)) return *r;
  throw std::invalid_argument("structure has no relation '" + std::string(name) + "'");
}

std::vector<std::pair<std::string, std::size_t>> Structure::vocabulary() const {
  std::vector<std::pair<std::string, std::size_t>> v;
  for (const auto& r : relations_) v.emplace_back(r.name(), r.arity());
  return v;
}

bool operator==(const Structure& a, const Structure& b) {
  if (a.universe_ != b.universe_ || a.relations_.size() != b.relations_.size()) return false;
  for (std::size_t i = 0; i < a.relations_.size(); ++i) {
    const auto& ra = a.relations_[i];
    const auto& rb = b.relations_[i];
    if (ra.name() != rb.name() || ra.arity() != rb.arity()) return false;
    if (ra.is_implicit_preorder() && rb.is_implicit_preorder()) {
      if (ra.ranks() != rb.ranks()) return false;
    } else if (ra.tuples() != rb.tuples()) {
      return false;
    }
  }
  return true;
}

BaseGraph::BaseGraph(std::size_t vertices,
                     std::vector<std::pair<std::uint32_t, std::uint32_t>> edges)
    : n_(vertices), adj_(vertices) {
  for (auto [u, v] : edges) {
    if (u >= n_ || v >= n_) throw std::invalid_argument("graph: edge endpoint out of range");
    if (u == v) throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(u));
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw std::invalid_argument("graph: duplicate edge");
  }
  for (auto [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
  if (n_ == 0) throw std::invalid_argument("graph: no vertices");
  std::vector<bool> seen(n_, false);
  std::vector<std::uint32_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (auto w : adj_[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != n_) throw std::invalid_argument("graph: not connected");
}

bool BaseGraph::adjacent(std::uint32_t u, std::uint32_t v) const {
  if (u >= n_ || v >= n_) return false;
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> BaseGraph::directed_edges() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  out.reserve(2 * edges_.size());
  for (std::uint32_t v = 0; v < n_; ++v) {
    for (auto w : adj_[v]) out.emplace_back(v, w);
  }
  return out;
}

BaseGraph complete_graph(std::size_t n) {
  if (n < 2) throw std::invalid_argument("complete_graph: need n >= 2");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = u + 1; v < n; ++v) e.emplace_back(u, v);
  }
  return BaseGraph(n, std::move(e));
}

BaseGraph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle_graph: need n >= 3");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  for (std::uint32_t v = 0; v < n; ++v) e.emplace_back(v, static_cast<std::uint32_t>((v + 1) % n));
  return BaseGraph(n, std::move(e));
}

BaseGraph path_graph(std::size_t n) {
  if (n < 2) throw std::invalid_argument("path_graph: need n >= 2");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  for (std::uint32_t v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return BaseGraph(n, std::move(e));
}

namespace {

// Unit vertex capacities via splitting v into v_in = 2v, v_out = 2v + 1.
std::size_t vertex_disjoint_paths(const BaseGraph& g, std::uint32_t s, std::uint32_t t) {
  const std::size_t n = g.vertex_count();
  const std::size_t m = 2 * n;
  const int inf = static_cast<int>(n) + 1;
  std::vector<std::vector<int>> cap(m, std::vector<int>(m, 0));
  for (std::uint32_t v = 0; v < n; ++v) {
    cap[2 * v][2 * v + 1] = (v == s || v == t) ? inf : 1;
    for (auto w : g.neighbors(v)) cap[2 * v + 1][2 * w] = inf;
  }
  const std::size_t src = 2 * s + 1, sink = 2 * t;
  std::size_t flow = 0;
  while (true) {
    std::vector<int> parent(m, -1);
    parent[src] = static_cast<int>(src);
    std::queue<std::size_t> bfs;
    bfs.push(src);
    while (!bfs.empty() && parent[sink] < 0) {
      const auto u = bfs.front();
      bfs.pop();
      for (std::size_t v = 0; v < m; ++v) {
        if (parent[v] < 0 && cap[u][v] > 0) {
          parent[v] = static_cast<int>(u);
          bfs.push(v);
        }
      }
    }
    if (parent[sink] < 0) break;
    // Every augmenting path crosses an internal unit-capacity split arc.
    int push = inf;
    for (std::size_t v = sink; v != src; v = static_cast<std::size_t>(parent[v])) {
      push = std::min(push, cap[static_cast<std::size_t>(parent[v])][v]);
    }
    for (std::size_t v = sink; v != src; v = static_cast<std::size_t>(parent[v])) {
      const auto u = static_cast<std::size_t>(parent[v]);
      cap[u][v] -= push;
      cap[v][u] += push;
    }
    flow += static_cast<std::size_t>(push);
  }
  return flow;
}

}  // namespace

std::size_t connectivity(const BaseGraph& g) {
  const std::size_t n = g.vertex_count();
  std::size_t best = n - 1;
  for (std::uint32_t s = 0; s < n; ++s) {
    for (std::uint32_t t = s + 1; t < n; ++t) {
      if (g.adjacent(s, t)) continue;
      best = std::min(best, vertex_disjoint_paths(g, s, t));
    }
  }
  return best;
}

std::vector<std::uint32_t> atomic_type(const Structure& s, std::span<const Element> tuple) {
  const std::size_t k = tuple.size();
  for (auto e : tuple) {
    if (e >= s.universe()) throw std::invalid_argument("atomic_type: element outside universe");
  }
  std::vector<std::uint32_t> code;
  code.reserve(k + 1);
  for (std::size_t i = 0; i < k; ++i) {
    std::uint32_t first = static_cast<std::uint32_t>(i);
    for (std::size_t j = 0; j < i; ++j) {
      if (tuple[j] == tuple[i]) {
        first = static_cast<std::uint32_t>(j);
        break;
      }
    }
    code.push_back(first);
  }
  std::uint32_t word = 0;
  unsigned used = 0;
  auto push_bit = [&](bool b) {
    word |= static_cast<std::uint32_t>(b) << used;
    if (++used == 32) {
      code.push_back(word);
      word = 0;
      used = 0;
    }
  };
  Tuple probe;
  for (const auto& r : s.relations()) {
    const std::size_t a = r.arity();
    std::vector<std::size_t> pos(a, 0);
    probe.assign(a, 0);
    if (k == 0) continue;
    while (true) {
      for (std::size_t i = 0; i < a; ++i) probe[i] = tuple[pos[i]];
      push_bit(r.contains(probe));
      std::size_t i = a;
      while (i > 0 && ++pos[i - 1] == k) pos[--i] = 0;
      if (i == 0) break;
    }
  }
  code.push_back(word);
  return code;
}

bool is_isomorphism(const Structure& a, const Structure& b, std::span<const Element> map) {
  if (a.universe() != b.universe() || map.size() != a.universe()) return false;
  if (a.vocabulary() != b.vocabulary()) return false;
  std::vector<bool> hit(map.size(), false);
  for (auto v : map) {
    if (v >= map.size() || hit[v]) return false;
    hit[v] = true;
  }
  Tuple image;
  for (const auto& ra : a.relations()) {
    const auto& rb = b.at(ra.name());
    if (ra.size() != rb.size()) return false;
    for (const auto& t : ra.tuples()) {
      image.resize(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) image[i] = map[t[i]];
      if (!rb.contains(image)) return false;
    }
  }
  return true;
}

}  // namespace cfiforge::rel
