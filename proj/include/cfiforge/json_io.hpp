#pragma once

// JSON encodings of the library's data types. Objects use sorted keys, so
// dumps are stable across runs. Decoders validate through the ordinary
// constructors and throw std::invalid_argument (or nlohmann::json
// exceptions for malformed documents).

#include <string>

#include <json.hpp>

#include "cfiforge/cfi.hpp"
#include "cfiforge/eqformula.hpp"
#include "cfiforge/gfp.hpp"
#include "cfiforge/isoles.hpp"
#include "cfiforge/relstruct.hpp"
#include "cfiforge/sylow.hpp"
#include "cfiforge/symred.hpp"
#include "cfiforge/wl.hpp"

namespace cfiforge::io {

using Json = nlohmann::json;

/// {"p", "rows", "cols", "entries": [[i, j, v], ...]}, nonzero entries only.
Json matrix_to_json(const gfp::Matrix& m);
gfp::Matrix matrix_from_json(const Json& j);

/// Matrix JSON plus "rhs"; a missing "rhs" means all ones.
Json system_to_json(const gfp::LinearSystem& sys);
gfp::LinearSystem system_from_json(const Json& j);

/// {"vertices", "edges": [[u, v], ...]}
Json graph_to_json(const rel::BaseGraph& g);
rel::BaseGraph graph_from_json(const Json& j);

/// {"universe", "relations": {name: {"arity", "tuples"}}}. A preorder
/// stored by ranks is written as {"arity": 2, "ranks": [...]}.
Json structure_to_json(const rel::Structure& s);
rel::Structure structure_from_json(const Json& j);

/// {"q", "graph", "d"}
Json instance_to_json(const cfi::CfiInstance& inst);
cfi::CfiInstance instance_from_json(const Json& j);

/// {"degree", "generators"}
Json group_to_json(const symred::PermutationGroup& g);
symred::PermutationGroup group_from_json(const Json& j);

/// {"blocks"}; the size is the number of points covered.
Json partition_to_json(const symred::OrbitPartition& p);
symred::OrbitPartition partition_from_json(const Json& j);

/// [[i, z], ...]
Json signature_to_json(const sylow::SignatureVector& s);
sylow::SignatureVector signature_from_json(const Json& j);

Json formula_to_json(const eq::Formula& f);

/// {"k", "rounds", "round", "verdict", "histogramA", "histogramB"} with
/// histograms as [[color, count], ...].
Json verdict_to_json(const wl::Verdict& v);

/// System JSON plus "variables" (names) and "equation_counts".
Json iso_system_to_json(const isoles::IsoSystem& s);

Json compact_to_json(const sylow::CompactMatrix& c);

Json read_file(const std::string& path);
void write_file(const std::string& path, const Json& j);

}  // namespace cfiforge::io
