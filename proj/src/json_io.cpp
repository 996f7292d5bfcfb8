#include "cfiforge/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cfiforge::io {
namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw std::invalid_argument(std::string("expected a JSON object with key '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(std::string("missing key '") + key + "'");
  return *it;
}

template <class T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const Json::type_error&) {
    throw std::invalid_argument(std::string("key '") + key + "' has the wrong type");
  }
}

}  // namespace

Json matrix_to_json(const gfp::Matrix& m) {
  Json entries = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m(r, c) != 0) entries.push_back({r, c, m(r, c)});
    }
  }
  return {{"p", m.modulus()}, {"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

gfp::Matrix matrix_from_json(const Json& j) {
  gfp::Matrix m(gfp::require_prime(get<std::uint64_t>(j, "p")), get<std::size_t>(j, "rows"),
                get<std::size_t>(j, "cols"));
  for (const auto& e : field(j, "entries")) {
    if (!e.is_array() || e.size() != 3) throw std::invalid_argument("matrix entry must be [i, j, v]");
    m.set(e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<gfp::Residue>());
  }
  return m;
}

Json system_to_json(const gfp::LinearSystem& sys) {
  Json j = matrix_to_json(sys.matrix());
  j["rhs"] = sys.rhs();
  return j;
}

gfp::LinearSystem system_from_json(const Json& j) {
  auto m = matrix_from_json(j);
  if (!j.contains("rhs")) return gfp::LinearSystem::all_ones(std::move(m));
  return {std::move(m), get<gfp::Vector>(j, "rhs")};
}

Json graph_to_json(const rel::BaseGraph& g) {
  Json edges = Json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  return {{"vertices", g.vertex_count()}, {"edges", edges}};
}

rel::BaseGraph graph_from_json(const Json& j) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const auto& e : field(j, "edges")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("graph edge must be [u, v]");
    edges.emplace_back(e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>());
  }
  return {get<std::size_t>(j, "vertices"), std::move(edges)};
}

Json structure_to_json(const rel::Structure& s) {
  Json rels = Json::object();
  for (const auto& r : s.relations()) {
    if (r.is_implicit_preorder()) {
      rels[r.name()] = {{"arity", 2}, {"ranks", r.ranks()}};
    } else {
      rels[r.name()] = {{"arity", r.arity()}, {"tuples", r.tuples()}};
    }
  }
  return {{"universe", s.universe()}, {"relations", rels}};
}

rel::Structure structure_from_json(const Json& j) {
  const auto universe = get<std::size_t>(j, "universe");
  std::vector<rel::Relation> rels;
  const Json& obj = field(j, "relations");
  if (!obj.is_object()) throw std::invalid_argument("'relations' must be an object");
  for (const auto& [name, body] : obj.items()) {
    if (body.contains("ranks")) {
      auto ranks = get<std::vector<std::uint32_t>>(body, "ranks");
      if (ranks.size() != universe) throw std::invalid_argument("relation '" + name + "': ranks length differs from the universe");
      rels.push_back(rel::Relation::preorder_from_ranks(name, std::move(ranks)));
    } else {
      rels.emplace_back(name, get<std::size_t>(body, "arity"), get<std::vector<rel::Tuple>>(body, "tuples"), universe);
    }
  }
  return {universe, std::move(rels)};
}

Json instance_to_json(const cfi::CfiInstance& inst) {
  return {{"q", inst.q}, {"graph", graph_to_json(inst.base)}, {"d", inst.d}};
}

cfi::CfiInstance instance_from_json(const Json& j) {
  return {graph_from_json(field(j, "graph")), get<std::uint32_t>(j, "q"), get<std::vector<std::uint32_t>>(j, "d")};
}

Json group_to_json(const symred::PermutationGroup& g) {
  return {{"degree", g.degree()}, {"generators", g.generators()}};
}

symred::PermutationGroup group_from_json(const Json& j) {
  return {get<std::size_t>(j, "degree"), get<std::vector<Permutation>>(j, "generators")};
}

Json partition_to_json(const symred::OrbitPartition& p) { return {{"blocks", p.blocks()}}; }

symred::OrbitPartition partition_from_json(const Json& j) {
  auto blocks = get<std::vector<std::vector<std::uint32_t>>>(j, "blocks");
  std::size_t size = 0;
  for (const auto& b : blocks) size += b.size();
  return {size, std::move(blocks)};
}

Json signature_to_json(const sylow::SignatureVector& s) {
  Json out = Json::array();
  for (const auto& e : s) out.push_back({e.level, e.offset});
  return out;
}

sylow::SignatureVector signature_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("signature must be an array of [i, z] pairs");
  sylow::SignatureVector out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("signature entry must be [i, z]");
    out.push_back({e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>()});
  }
  return out;
}

namespace {

Json node_to_json(const eq::Node& n) {
  auto var = [](const eq::Var& v) { return std::string(1, v.block) + std::to_string(v.index); };
  switch (n.kind) {
    case eq::Node::Kind::Eq: return {{"op", "eq"}, {"lhs", var(n.lhs)}, {"rhs", var(n.rhs)}};
    case eq::Node::Kind::Neq: return {{"op", "neq"}, {"lhs", var(n.lhs)}, {"rhs", var(n.rhs)}};
    case eq::Node::Kind::Not: return {{"op", "not"}, {"arg", node_to_json(*n.a)}};
    case eq::Node::Kind::And: return {{"op", "and"}, {"args", {node_to_json(*n.a), node_to_json(*n.b)}}};
    case eq::Node::Kind::Or: return {{"op", "or"}, {"args", {node_to_json(*n.a), node_to_json(*n.b)}}};
  }
  return {};
}

Json histogram_json(const wl::Histogram& h) {
  Json out = Json::array();
  for (const auto& [color, count] : h) out.push_back({color, count});
  return out;
}

}  // namespace

Json formula_to_json(const eq::Formula& f) {
  return {{"k", f.k()}, {"l", f.l()}, {"text", f.to_string()}, {"ast", node_to_json(f.root())}};
}

Json verdict_to_json(const wl::Verdict& v) {
  return {{"k", v.k},
          {"logic_variables", v.k + 1},
          {"rounds", v.rounds},
          {"round", v.round},
          {"verdict", v.verdict_name()},
          {"histogramA", histogram_json(v.histogram_a)},
          {"histogramB", histogram_json(v.histogram_b)}};
}

Json iso_system_to_json(const isoles::IsoSystem& s) {
  Json j = system_to_json(s.system);
  j["variables"] = s.variable_names();
  j["equation_counts"] = s.equation_counts;
  return j;
}

Json compact_to_json(const sylow::CompactMatrix& c) {
  Json rows = Json::array(), cols = Json::array();
  for (const auto& s : c.row_signatures) rows.push_back(signature_to_json(s));
  for (const auto& s : c.col_signatures) cols.push_back(signature_to_json(s));
  return {{"matrix", matrix_to_json(c.matrix)},
          {"row_signatures", rows},
          {"col_signatures", cols},
          {"row_witnesses", c.row_witnesses}};
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return Json::parse(buf.str());
}

void write_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace cfiforge::io
