#pragma once

// The linear equation system over F_q that decides the isomorphism class of
// a CFI structure. Variables are the edge nodes and one variable per base
// vertex; the equations are
//   (1)  x[b] - x[a] = 1          for every cycle pair (a, b) in C
//   (2)  x[a] + x[b] = 0          for every inverse pair (a, b) in I
//   (3)  x[v] - sum_b x[b] = 0    for every equation node rho of vertex v,
//                                 b ranging over the R-successors of rho
//   (4)  sum_v x[v] = z
// and the system is solvable iff the gadget values sum to z. It is built
// from the relations of the structure only.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cfiforge/cfi.hpp"
#include "cfiforge/gfp.hpp"
#include "cfiforge/relstruct.hpp"

namespace cfiforge::isoles {

struct IsoSystem {
  std::uint32_t q;
  /// Element id of each edge-node variable, in variable order.
  std::vector<rel::Element> edge_variables;
  std::size_t vertex_variables;
  /// Number of equations of types (1), (2), (3), (4).
  std::array<std::size_t, 4> equation_counts;
  gfp::LinearSystem system;

  std::size_t variable_count() const { return edge_variables.size() + vertex_variables; }
  /// "e<element>" for edge nodes, "v<k>" for the k-th equation class.
  std::vector<std::string> variable_names() const;
};

/// Throws std::invalid_argument for malformed structures or z outside [0, q).
IsoSystem build_system(const rel::Structure& s, std::uint32_t z);

/// The unique z for which build_system(s, z) is solvable. Throws
/// ConsistencyError if none or several are.
std::uint32_t decide_class_via_les(const rel::Structure& s);

struct Isomorphism {
  cfi::CfiInstance target;
  /// map[a] is the image in build(target) of element a of build(source).
  std::vector<rel::Element> map;
};

/// Turns a solution of build_system(build(inst), z) into the isomorphism
/// e_i -> e_{sol(e_i)}, rho -> rho + delta onto CFI_q(G, d+) with d+(v) the
/// solution's vertex value, and checks it relation by relation. Throws
/// std::invalid_argument if `solution` does not solve the system.
Isomorphism solution_to_isomorphism(const cfi::CfiInstance& inst, std::uint32_t z,
                                    std::span<const gfp::Residue> solution);

}  // namespace cfiforge::isoles
