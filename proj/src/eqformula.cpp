#include "cfiforge/eqformula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace cfiforge::eq {
namespace {

NodePtr make_literal(Node::Kind kind, Var l, Var r) {
  return std::make_shared<const Node>(Node{kind, l, r, nullptr, nullptr});
}

NodePtr make_node(Node::Kind kind, NodePtr a, NodePtr b = nullptr) {
  return std::make_shared<const Node>(Node{kind, {}, {}, std::move(a), std::move(b)});
}

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  NodePtr parse_all() {
    auto f = formula();
    skip();
    if (pos_ != s_.size()) fail("'&', '|' or end of input");
    return f;
  }

  std::uint32_t max_x = 0, max_y = 0;

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& expected) {
    std::string found = pos_ < s_.size() ? std::string("'") + s_[pos_] + "'" : "end of input";
    throw ParseError(pos_, expected,
                     "parse error at offset " + std::to_string(pos_) + ": expected " + expected + ", found " + found);
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr formula() {
    auto left = disjunct();
    while (accept('|')) left = make_node(Node::Kind::Or, left, disjunct());
    return left;
  }

  NodePtr disjunct() {
    auto left = unary();
    while (accept('&')) left = make_node(Node::Kind::And, left, unary());
    return left;
  }

  NodePtr unary() {
    skip();
    // "!=" never starts a unary, so a lone '!' is negation.
    if (accept('!')) return make_node(Node::Kind::Not, unary());
    if (accept('(')) {
      auto f = formula();
      if (!accept(')')) fail("')'");
      return f;
    }
    const Var l = var("variable or '(' or '!'");
    skip();
    Node::Kind kind;
    if (pos_ + 1 < s_.size() && s_[pos_] == '!' && s_[pos_ + 1] == '=') {
      pos_ += 2;
      kind = Node::Kind::Neq;
    } else if (pos_ < s_.size() && s_[pos_] == '=') {
      ++pos_;
      kind = Node::Kind::Eq;
    } else {
      fail("'=' or '!='");
    }
    const Var r = var("variable");
    return make_literal(kind, l, r);
  }

  Var var(const std::string& expected) {
    skip();
    if (pos_ >= s_.size() || (s_[pos_] != 'x' && s_[pos_] != 'y')) fail(expected);
    const std::size_t start = pos_;
    const char block = s_[pos_++];
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("variable index");
    std::uint64_t index = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      index = index * 10 + static_cast<std::uint64_t>(s_[pos_++] - '0');
      if (index > 1'000'000) {
        pos_ = start;
        fail("variable index below 10^6");
      }
    }
    if (index == 0) {
      pos_ = start + 1;
      fail("variable index >= 1");
    }
    auto& mx = block == 'x' ? max_x : max_y;
    mx = std::max(mx, static_cast<std::uint32_t>(index));
    return Var{block, static_cast<std::uint32_t>(index)};
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

std::size_t slot(const Var& v, std::size_t k) { return (v.block == 'x' ? 0 : k) + v.index - 1; }

bool eval(const Node& n, std::span<const std::uint32_t> values, std::size_t k) {
  switch (n.kind) {
    case Node::Kind::Eq: return values[slot(n.lhs, k)] == values[slot(n.rhs, k)];
    case Node::Kind::Neq: return values[slot(n.lhs, k)] != values[slot(n.rhs, k)];
    case Node::Kind::Not: return !eval(*n.a, values, k);
    case Node::Kind::And: return eval(*n.a, values, k) && eval(*n.b, values, k);
    case Node::Kind::Or: return eval(*n.a, values, k) || eval(*n.b, values, k);
  }
  return false;
}

std::string var_name(const Var& v) { return v.block + std::to_string(v.index); }

void print(const Node& n, std::string& out);

void print_wrapped(const Node& n, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print(n, out);
  if (wrap) out += ')';
}

bool is_binary(const Node& n) { return n.kind == Node::Kind::And || n.kind == Node::Kind::Or; }

void print(const Node& n, std::string& out) {
  switch (n.kind) {
    case Node::Kind::Eq: out += var_name(n.lhs) + "=" + var_name(n.rhs); break;
    case Node::Kind::Neq: out += var_name(n.lhs) + "!=" + var_name(n.rhs); break;
    case Node::Kind::Not:
      out += '!';
      print_wrapped(*n.a, is_binary(*n.a), out);
      break;
    case Node::Kind::And:
      print_wrapped(*n.a, n.a->kind == Node::Kind::Or, out);
      out += " & ";
      print_wrapped(*n.b, is_binary(*n.b), out);
      break;
    case Node::Kind::Or:
      print(*n.a, out);
      out += " | ";
      print_wrapped(*n.b, n.b->kind == Node::Kind::Or, out);
      break;
  }
}

void check_vars(const Node& n, std::size_t k, std::size_t l) {
  if (n.kind == Node::Kind::Eq || n.kind == Node::Kind::Neq) {
    for (const Var& v : {n.lhs, n.rhs}) {
      if (v.block != 'x' && v.block != 'y') throw std::invalid_argument("formula: unknown variable block");
      if (v.index == 0 || v.index > (v.block == 'x' ? k : l)) {
        throw std::invalid_argument("formula: variable " + var_name(v) + " exceeds the declared arity");
      }
    }
    return;
  }
  if (!n.a || (n.kind != Node::Kind::Not && !n.b)) throw std::invalid_argument("formula: missing operand");
  check_vars(*n.a, k, l);
  if (n.kind != Node::Kind::Not) check_vars(*n.b, k, l);
}

}  // namespace

bool same_tree(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Node::Kind::Eq:
    case Node::Kind::Neq: return a.lhs == b.lhs && a.rhs == b.rhs;
    case Node::Kind::Not: return same_tree(*a.a, *b.a);
    default: return same_tree(*a.a, *b.a) && same_tree(*a.b, *b.b);
  }
}

Formula::Formula(NodePtr root, std::size_t k, std::size_t l) : root_(std::move(root)), k_(k), l_(l) {
  if (!root_) throw std::invalid_argument("formula: empty tree");
  check_vars(*root_, k_, l_);
}

bool Formula::evaluate(std::span<const std::uint32_t> values) const {
  if (values.size() != k_ + l_) throw std::invalid_argument("evaluate: expected k + l values");
  return eval(*root_, values, k_);
}

std::string Formula::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

Formula parse(const std::string& text) {
  Parser p(text);
  auto root = p.parse_all();
  return Formula(root, p.max_x, p.max_y);
}

Formula parse(const std::string& text, std::size_t k, std::size_t l) {
  Parser p(text);
  auto root = p.parse_all();
  return Formula(root, k, l);
}

bool EqualityType::matches(std::span<const std::uint32_t> values) const {
  return values.size() == block.size() && type_of(k, l, values).block == block;
}

std::size_t EqualityType::class_count() const {
  return block.empty() ? 0 : *std::max_element(block.begin(), block.end()) + 1;
}

std::string EqualityType::to_string() const {
  auto name = [&](std::size_t i) { return i < k ? "x" + std::to_string(i + 1) : "y" + std::to_string(i - k + 1); };
  std::string out;
  for (std::size_t i = 0; i < block.size(); ++i) {
    for (std::size_t j = i + 1; j < block.size(); ++j) {
      if (!out.empty()) out += " & ";
      out += name(i) + (block[i] == block[j] ? "=" : "!=") + name(j);
    }
  }
  return out.empty() ? "true" : out;
}

EqualityType type_of(std::size_t k, std::size_t l, std::span<const std::uint32_t> values) {
  if (values.size() != k + l) throw std::invalid_argument("type_of: expected k + l values");
  EqualityType t{k, l, std::vector<std::uint32_t>(values.size())};
  std::vector<std::uint32_t> seen;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto it = std::find(seen.begin(), seen.end(), values[i]);
    t.block[i] = static_cast<std::uint32_t>(it - seen.begin());
    if (it == seen.end()) seen.push_back(values[i]);
  }
  return t;
}

std::vector<EqualityType> all_types(std::size_t k, std::size_t l) {
  const std::size_t m = k + l;
  std::vector<EqualityType> out;
  std::vector<std::uint32_t> rgs(m, 0);
  if (m == 0) return {EqualityType{k, l, {}}};
  while (true) {
    out.push_back(EqualityType{k, l, rgs});
    // Next restricted growth string: rgs[i] <= 1 + max(rgs[0..i-1]).
    std::size_t i = m;
    while (i-- > 1) {
      const std::uint32_t prefix_max = *std::max_element(rgs.begin(), rgs.begin() + static_cast<std::ptrdiff_t>(i));
      if (rgs[i] <= prefix_max) {
        ++rgs[i];
        std::fill(rgs.begin() + static_cast<std::ptrdiff_t>(i) + 1, rgs.end(), 0u);
        break;
      }
    }
    if (i == 0) break;
  }
  return out;
}

std::vector<EqualityType> decompose(const Formula& alpha) {
  std::vector<EqualityType> out;
  for (auto& t : all_types(alpha.k(), alpha.l())) {
    // The restricted growth string is itself an assignment of this type.
    if (alpha.evaluate(t.block)) out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::uint32_t> decode_tuple(std::uint64_t idx, std::size_t n, std::size_t len) {
  std::vector<std::uint32_t> out(len);
  for (std::size_t j = len; j-- > 0;) {
    out[j] = static_cast<std::uint32_t>(idx % n);
    idx /= n;
  }
  return out;
}

std::uint64_t encode_tuple(std::span<const std::uint32_t> t, std::size_t n) {
  std::uint64_t idx = 0;
  for (auto v : t) idx = idx * n + v;
  return idx;
}

namespace {

template <class Pred>
gfp::Matrix matrix_of(std::size_t k, std::size_t l, std::size_t n, std::uint32_t p, const Caps& caps, Pred&& pred) {
  if (n == 0) throw std::invalid_argument("build_matrix: n must be positive");
  long double entries = 1;
  for (std::size_t i = 0; i < k + l; ++i) entries *= static_cast<long double>(n);
  if (entries > static_cast<long double>(caps.matrix_entries)) {
    throw ResourceCapError("matrix with n^(k+l) entries exceeds the cap of " + std::to_string(caps.matrix_entries));
  }
  std::uint64_t rows = 1, cols = 1;
  for (std::size_t i = 0; i < k; ++i) rows *= n;
  for (std::size_t i = 0; i < l; ++i) cols *= n;
  gfp::Matrix m(gfp::require_prime(p), rows, cols);
  std::vector<std::uint32_t> values(k + l);
  for (std::uint64_t r = 0; r < rows; ++r) {
    auto a = decode_tuple(r, n, k);
    std::copy(a.begin(), a.end(), values.begin());
    for (std::uint64_t c = 0; c < cols; ++c) {
      auto b = decode_tuple(c, n, l);
      std::copy(b.begin(), b.end(), values.begin() + static_cast<std::ptrdiff_t>(k));
      if (pred(values)) m.set(r, c, 1 % p);
    }
  }
  return m;
}

}  // namespace

gfp::Matrix build_matrix(const Formula& alpha, std::size_t n, std::uint32_t p, const Caps& caps) {
  return matrix_of(alpha.k(), alpha.l(), n, p, caps, [&](const auto& v) { return alpha.evaluate(v); });
}

gfp::Matrix type_matrix(const EqualityType& tau, std::size_t n, std::uint32_t p, const Caps& caps) {
  return matrix_of(tau.k, tau.l, n, p, caps, [&](const auto& v) { return tau.matches(v); });
}

Formula random_formula(std::size_t k, std::size_t l, std::size_t connectives, std::mt19937_64& rng) {
  if (k + l == 0) throw std::invalid_argument("random_formula: need at least one variable");
  std::uniform_int_distribution<std::size_t> pick_var(0, k + l - 1);
  std::uniform_int_distribution<int> coin(0, 3);
  auto var_at = [&](std::size_t i) {
    return i < k ? Var{'x', static_cast<std::uint32_t>(i + 1)} : Var{'y', static_cast<std::uint32_t>(i - k + 1)};
  };
  std::function<NodePtr(std::size_t)> grow = [&](std::size_t budget) -> NodePtr {
    NodePtr node;
    if (budget == 0) {
      const auto kind = coin(rng) == 0 ? Node::Kind::Neq : Node::Kind::Eq;
      node = make_literal(kind, var_at(pick_var(rng)), var_at(pick_var(rng)));
    } else {
      std::uniform_int_distribution<std::size_t> split(0, budget - 1);
      const std::size_t left = split(rng);
      const auto kind = coin(rng) < 2 ? Node::Kind::And : Node::Kind::Or;
      node = make_node(kind, grow(left), grow(budget - 1 - left));
    }
    if (coin(rng) == 0) node = make_node(Node::Kind::Not, node);
    return node;
  };
  return Formula(grow(connectives), k, l);
}

}  // namespace cfiforge::eq
