#pragma once

// Quantifier-free equality formulas alpha(x_1..x_k, y_1..y_l).
//
//   formula  := disjunct ("|" disjunct)*
//   disjunct := unary ("&" unary)*
//   unary    := "!" unary | "(" formula ")" | VAR "=" VAR | VAR "!=" VAR
//   VAR      := "x" digits | "y" digits        (indices start at 1)
//
// Binary operators associate to the left; whitespace is ignored.

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfiforge/caps.hpp"
#include "cfiforge/gfp.hpp"

namespace cfiforge::eq {

/// A variable: block 'x' or 'y' and a 1-based index.
struct Var {
  char block = 'x';
  std::uint32_t index = 1;
  friend bool operator==(const Var&, const Var&) = default;
};

struct Node {
  enum class Kind { Eq, Neq, Not, And, Or };
  Kind kind;
  Var lhs{}, rhs{};                  // literals
  std::shared_ptr<const Node> a, b;  // operands (b unused for Not)
};
using NodePtr = std::shared_ptr<const Node>;

bool same_tree(const Node& a, const Node& b);

class ParseError : public std::invalid_argument {
 public:
  ParseError(std::size_t offset, std::string expected, const std::string& message)
      : std::invalid_argument(message), offset_(offset), expected_(std::move(expected)) {}
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

class Formula {
 public:
  Formula(NodePtr root, std::size_t k, std::size_t l);

  const Node& root() const { return *root_; }
  NodePtr root_ptr() const { return root_; }
  std::size_t k() const { return k_; }
  std::size_t l() const { return l_; }
  std::size_t variable_count() const { return k_ + l_; }

  /// values holds x_1..x_k followed by y_1..y_l.
  bool evaluate(std::span<const std::uint32_t> values) const;
  /// Canonical text; parse(to_string()) rebuilds the same tree.
  std::string to_string() const;

 private:
  NodePtr root_;
  std::size_t k_, l_;
};

/// Arities are the largest indices mentioned.
Formula parse(const std::string& text);
/// Throws std::invalid_argument when a variable index exceeds k or l.
Formula parse(const std::string& text, std::size_t k, std::size_t l);

/// A complete equality type on the variables x_1..x_k, y_1..y_l, stored as
/// a restricted growth string: block[i] is the class of variable i, classes
/// numbered in order of first appearance.
struct EqualityType {
  std::size_t k = 0, l = 0;
  std::vector<std::uint32_t> block;

  /// Whether the assignment realises exactly this type.
  bool matches(std::span<const std::uint32_t> values) const;
  std::size_t class_count() const;
  /// "x1=y1 & x1!=x2 & ..." over all variable pairs in order.
  std::string to_string() const;
  friend auto operator<=>(const EqualityType&, const EqualityType&) = default;
};

/// Equality type realised by an assignment.
EqualityType type_of(std::size_t k, std::size_t l, std::span<const std::uint32_t> values);

/// All set partitions of the variables, in restricted-growth order.
std::vector<EqualityType> all_types(std::size_t k, std::size_t l);

/// Complete types whose assignments satisfy alpha, in restricted-growth order.
std::vector<EqualityType> decompose(const Formula& alpha);

/// Rows [n]^k, columns [n]^l, both lexicographic; entry 1 iff alpha holds.
/// Throws ResourceCapError when n^(k+l) exceeds caps.matrix_entries.
gfp::Matrix build_matrix(const Formula& alpha, std::size_t n, std::uint32_t p,
                         const Caps& caps = default_caps());
/// Same for the conjunction describing a single complete type.
gfp::Matrix type_matrix(const EqualityType& tau, std::size_t n, std::uint32_t p,
                        const Caps& caps = default_caps());

/// Random formula over x_1..x_k, y_1..y_l (k + l >= 1) with the given
/// number of binary connectives; negations are sprinkled in at random.
Formula random_formula(std::size_t k, std::size_t l, std::size_t connectives, std::mt19937_64& rng);

/// Decodes index idx of [n]^len (lexicographic) into digits.
std::vector<std::uint32_t> decode_tuple(std::uint64_t idx, std::size_t n, std::size_t len);
std::uint64_t encode_tuple(std::span<const std::uint32_t> t, std::size_t n);

}  // namespace cfiforge::eq
