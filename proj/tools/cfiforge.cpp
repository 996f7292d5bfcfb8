// Command-line front end: generation, decision procedures, verification
// suites and JSON reports.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfiforge/caps.hpp"
#include "cfiforge/cfi.hpp"
#include "cfiforge/eqformula.hpp"
#include "cfiforge/gfp.hpp"
#include "cfiforge/isoles.hpp"
#include "cfiforge/json_io.hpp"
#include "cfiforge/suite.hpp"
#include "cfiforge/sylow.hpp"
#include "cfiforge/sylow_check.hpp"
#include "cfiforge/symred.hpp"
#include "cfiforge/wl.hpp"

using namespace cfiforge;
using io::Json;

namespace {

constexpr int kOk = 0;
constexpr int kVerificationFailed = 1;
constexpr int kInputError = 2;
constexpr int kResourceCap = 3;
constexpr int kSchemaVersion = 1;

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string caps;
  std::string report;
  bool json = false;
  std::vector<std::string> argv;
};

// Collects verdicts and artifacts; printed or written at the end.
struct Report {
  Json verdicts = Json::object();
  Json artifacts = Json::array();
  std::vector<std::string> lines;

  void say(const std::string& line) { lines.push_back(line); }
};

std::vector<std::uint32_t> parse_csv(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a non-negative integer: '" + item + "'");
    }
    if (used != item.size()) throw std::invalid_argument("not a non-negative integer: '" + item + "'");
    out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

rel::BaseGraph graph_arg(const std::string& arg) {
  if (arg.size() >= 2 && (arg[0] == 'k' || arg[0] == 'c' || arg[0] == 'p') &&
      arg.find_first_not_of("0123456789", 1) == std::string::npos) {
    const std::size_t n = std::stoul(arg.substr(1));
    if (arg[0] == 'k') return rel::complete_graph(n);
    if (arg[0] == 'c') return rel::cycle_graph(n);
    return rel::path_graph(n);
  }
  return io::graph_from_json(io::read_file(arg));
}

std::vector<std::uint32_t> gadget_arg(const std::string& arg, std::size_t n, std::uint32_t q) {
  if (arg.rfind("random:", 0) == 0) {
    std::mt19937_64 rng(std::stoull(arg.substr(7)));
    std::vector<std::uint32_t> d(n);
    for (auto& v : d) v = static_cast<std::uint32_t>(rng() % q);
    return d;
  }
  return parse_csv(arg);
}

void write_artifact(Report& rep, const std::string& path, const Json& j) {
  io::write_file(path, j);
  rep.artifacts.push_back(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cfiforge: CFI structures, Weisfeiler-Leman, symmetric linear systems over prime fields"};
  app.require_subcommand(1);
  // Global flags may also follow the subcommand.
  app.fallthrough();
  Globals g;
  for (int i = 0; i < argc; ++i) g.argv.emplace_back(argv[i]);
  app.add_option("--seed", g.seed, "Seed of the random generator")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->capture_default_str()->check(CLI::Range(1u, 256u));
  app.add_option("--caps", g.caps, "Resource caps, e.g. gadget=729,wl_tuples=100000");
  app.add_option("--report", g.report, "Write the JSON run report to this file");
  app.add_flag("--json", g.json, "Print the JSON run report instead of the summary");

  Report rep;
  std::function<int()> action;

  // cfi-gen
  auto* gen = app.add_subcommand("cfi-gen", "Build CFI_q(G, d) and write structure and instance JSON");
  std::string gen_graph = "k4", gen_d, gen_out;
  std::uint32_t gen_q = 2;
  gen->add_option("--graph", gen_graph, "k<n>, c<n>, p<n> or a graph JSON file")->capture_default_str();
  gen->add_option("--q", gen_q, "Prime q")->capture_default_str();
  gen->add_option("--d", gen_d, "Gadget values as a CSV list or random:<seed>")->required();
  gen->add_option("--out", gen_out, "Output prefix for <prefix>.structure.json and <prefix>.instance.json");
  gen->callback([&] {
    action = [&] {
      const auto base = graph_arg(gen_graph);
      gfp::require_prime(gen_q, "q");
      const cfi::CfiInstance inst(base, gen_q, gadget_arg(gen_d, base.vertex_count(), gen_q));
      const auto s = cfi::build(inst);
      rep.verdicts["universe"] = s.universe();
      rep.verdicts["class"] = cfi::iso_class(inst);
      rep.say("universe " + std::to_string(s.universe()) + ", class " + std::to_string(cfi::iso_class(inst)));
      if (!gen_out.empty()) {
        write_artifact(rep, gen_out + ".structure.json", io::structure_to_json(s));
        write_artifact(rep, gen_out + ".instance.json", io::instance_to_json(inst));
      }
      return kOk;
    };
  });

  // cfi-decide
  auto* decide = app.add_subcommand("cfi-decide", "Decide the isomorphism class of a CFI structure by linear algebra");
  std::string decide_in, decide_system;
  decide->add_option("--in", decide_in, "Structure JSON")->required();
  decide->add_option("--system-out", decide_system, "Write the system for the decided class here");
  decide->callback([&] {
    action = [&] {
      const auto s = io::structure_from_json(io::read_file(decide_in));
      const auto z = isoles::decide_class_via_les(s);
      const auto sys = isoles::build_system(s, z);
      rep.verdicts["z"] = z;
      rep.verdicts["variables"] = sys.variable_count();
      rep.verdicts["equations"] = sys.system.matrix().rows();
      rep.say("z=" + std::to_string(z) + " (system with " + std::to_string(sys.variable_count()) + " variables, " +
              std::to_string(sys.system.matrix().rows()) + " equations over F_" + std::to_string(sys.q) + ")");
      if (!decide_system.empty()) write_artifact(rep, decide_system, io::iso_system_to_json(sys));
      return kOk;
    };
  });

  // cfi-canon
  auto* canon = app.add_subcommand("cfi-canon", "Canonical form of a CFI instance");
  std::string canon_in, canon_out;
  canon->add_option("--in", canon_in, "Instance JSON")->required();
  canon->add_option("--out", canon_out, "Write the canonical structure here");
  canon->callback([&] {
    action = [&] {
      const auto inst = io::instance_from_json(io::read_file(canon_in));
      const auto s = cfi::canonical_form(inst);
      const auto z = isoles::decide_class_via_les(cfi::build(inst));
      rep.verdicts["class"] = cfi::iso_class(inst);
      rep.verdicts["class_via_les"] = z;
      rep.say("class " + std::to_string(cfi::iso_class(inst)) + " (linear system: " + std::to_string(z) + ")");
      if (!canon_out.empty()) write_artifact(rep, canon_out, io::structure_to_json(s));
      return z == cfi::iso_class(inst) ? kOk : kVerificationFailed;
    };
  });

  // cfi-iso
  auto* iso = app.add_subcommand("cfi-iso", "Turn a solution of the class system into an explicit isomorphism");
  std::string iso_in, iso_other, iso_out;
  iso->add_option("--in", iso_in, "Instance JSON")->required();
  iso->add_option("--with", iso_other, "Second instance JSON: report whether the two are isomorphic");
  iso->add_option("--out", iso_out, "Write the isomorphism JSON here");
  iso->callback([&] {
    action = [&] {
      const auto inst = io::instance_from_json(io::read_file(iso_in));
      const auto s = cfi::build(inst);
      const auto z = isoles::decide_class_via_les(s);
      const auto sys = isoles::build_system(s, z);
      const auto sol = gfp::solve(sys.system);
      if (!sol) throw ConsistencyError("decided class has no solution");
      const auto result = isoles::solution_to_isomorphism(inst, z, *sol);
      rep.verdicts["z"] = z;
      rep.verdicts["target"] = io::instance_to_json(result.target);
      std::string d;
      for (auto v : result.target.d) d += (d.empty() ? "" : ",") + std::to_string(v);
      rep.say("isomorphism onto CFI with d = (" + d + "), verified relation by relation");
      int code = kOk;
      if (!iso_other.empty()) {
        const auto other = io::instance_from_json(io::read_file(iso_other));
        const bool by_les = isoles::decide_class_via_les(cfi::build(other)) == z;
        rep.verdicts["isomorphic"] = by_les;
        std::string line = std::string("second instance: ") + (by_les ? "isomorphic" : "not isomorphic");
        try {
          const bool by_brute = cfi::brute_iso_oracle(inst, other);
          rep.verdicts["isomorphic_by_enumeration"] = by_brute;
          line += by_brute == by_les ? " (confirmed by twist enumeration)" : " (CONTRADICTED by twist enumeration)";
          if (by_brute != by_les) code = kVerificationFailed;
        } catch (const ResourceCapError&) {
          line += " (twist enumeration skipped: above cap)";
        }
        rep.say(line);
      }
      if (!iso_out.empty()) {
        write_artifact(rep, iso_out, Json{{"target", io::instance_to_json(result.target)}, {"map", result.map}});
      }
      return code;
    };
  });

  // wl-run
  auto* wlr = app.add_subcommand("wl-run", "k-dimensional Weisfeiler-Leman on two structures");
  std::string wl_a, wl_b;
  std::size_t wl_k = 2;
  wlr->add_option("--a", wl_a, "Structure JSON")->required();
  wlr->add_option("--b", wl_b, "Structure JSON")->required();
  wlr->add_option("--k", wl_k, "Dimension")->capture_default_str();
  wlr->callback([&] {
    action = [&] {
      wl::Options o;
      o.k = wl_k;
      o.threads = g.threads;
      const auto v = wl::wl_distinguish(io::structure_from_json(io::read_file(wl_a)),
                                        io::structure_from_json(io::read_file(wl_b)), o);
      rep.verdicts["wl"] = io::verdict_to_json(v);
      rep.say(std::to_string(v.k) + "-WL (counting logic with " + std::to_string(v.k + 1) + " variables): " +
              v.verdict_name() + " at round " + std::to_string(v.round) + ", " + std::to_string(v.rounds) +
              " refinement rounds");
      return kOk;
    };
  });

  // sym-fold
  auto* fold = app.add_subcommand("sym-fold", "Symmetric solution of a system via column folding");
  std::string fold_sys, fold_group;
  fold->add_option("--system", fold_sys, "System JSON (matrix JSON with optional rhs)")->required();
  fold->add_option("--group", fold_group, "Group JSON acting on rows then columns")->required();
  fold->callback([&] {
    action = [&] {
      const auto sys = io::system_from_json(io::read_file(fold_sys));
      const auto gamma = io::group_from_json(io::read_file(fold_group));
      const auto& m = sys.matrix();
      const auto part = symred::orbits(gamma, m.rows(), m.cols());
      const bool plain = gfp::is_solvable(sys);
      const bool folded = gfp::is_solvable(symred::fold_columns(sys, part));
      rep.verdicts["solvable"] = plain;
      rep.verdicts["folded_solvable"] = folded;
      rep.verdicts["column_orbits"] = io::partition_to_json(part);
      rep.say("plain system " + std::string(plain ? "solvable" : "unsolvable") + ", folded system (" +
              std::to_string(part.block_count()) + " column orbits) " + (folded ? "solvable" : "unsolvable"));
      const auto sym = symred::symmetric_solution(sys, gamma);
      rep.verdicts["symmetric_solution"] = sym ? Json(*sym) : Json(nullptr);
      if (sym) rep.say("symmetric solution found and verified");
      return plain == folded && plain == sym.has_value() ? kOk : kVerificationFailed;
    };
  });

  // sym-rank
  auto* srank = app.add_subcommand("sym-rank", "Rank computed through solvability queries");
  std::string rank_matrix, rank_part;
  srank->add_option("--matrix", rank_matrix, "Matrix JSON")->required();
  srank->add_option("--partition", rank_part, "Ordered column partition JSON (default: singletons)");
  srank->callback([&] {
    action = [&] {
      const auto m = io::matrix_from_json(io::read_file(rank_matrix));
      const auto part = rank_part.empty() ? symred::OrbitPartition::singletons(m.cols())
                                          : io::partition_from_json(io::read_file(rank_part));
      const auto got = symred::rank_via_solvability(m, part);
      const auto want = gfp::rank(m);
      rep.verdicts["rank_via_solvability"] = got.rank;
      rep.verdicts["queries"] = got.queries;
      rep.verdicts["gaussian_rank"] = want;
      rep.say("rank " + std::to_string(got.rank) + " from " + std::to_string(got.queries) +
              " solvability queries; Gaussian elimination gives " + std::to_string(want));
      return got.rank == want ? kOk : kVerificationFailed;
    };
  });

  // sylow-verify
  auto* sv = app.add_subcommand("sylow-verify", "Check the Sylow group, signature invariance/completeness and counting");
  std::uint32_t sv_q = 2, sv_r = 2, sv_p = 3;
  std::size_t sv_lmax = 2, sv_samples = 2000;
  sv->add_option("--q", sv_q, "Prime q")->capture_default_str();
  sv->add_option("--r", sv_r, "Depth r")->capture_default_str();
  sv->add_option("--p", sv_p, "Prime p != q")->capture_default_str();
  sv->add_option("--lmax", sv_lmax, "Largest tuple length")->capture_default_str();
  sv->add_option("--samples", sv_samples, "Random checks per suite for tuple lengths above 2")->capture_default_str();
  sv->callback([&] {
    action = [&] {
      gfp::require_prime(sv_q, "q");
      gfp::require_prime(sv_p, "p");
      if (sv_p == sv_q) throw std::invalid_argument("p must differ from q");
      const sylow::SylowGroup grp(sv_q, sv_r);
      std::mt19937_64 rng(g.seed);
      bool ok = true;
      const auto gc = sylow::check::check_group(grp);
      ok = ok && gc.ok;
      rep.verdicts["order"] = grp.order();
      rep.verdicts["group"] = gc.ok;
      rep.say("group of order " + std::to_string(grp.order()) + (gc.ok ? ": closed, matches generators" : ": " + gc.detail));
      Json per = Json::array();
      for (std::size_t l = 1; l <= sv_lmax; ++l) {
        const std::optional<std::size_t> samples = l <= 2 ? std::nullopt : std::optional<std::size_t>(sv_samples);
        const auto inv = sylow::check::check_invariance(grp, l, samples, rng);
        const auto com = sylow::check::check_completeness(grp, l, l <= 2 ? std::nullopt : std::optional<std::size_t>(40), rng);
        const auto cnt = sylow::check::check_counting(sv_q, sv_r, sv_p, l);
        ok = ok && inv.ok && com.ok && cnt.ok;
        per.push_back({{"l", l}, {"invariance", inv.ok}, {"completeness", com.ok}, {"counting", cnt.ok},
                       {"counts_checked", cnt.checked}});
        rep.say("l=" + std::to_string(l) + ": invariance " + (inv.ok ? "ok" : "FAILED " + inv.detail) + ", completeness " +
                (com.ok ? "ok" : "FAILED " + com.detail) + ", counting " +
                (cnt.ok ? "ok (" + std::to_string(cnt.checked) + " counts)" : "FAILED " + cnt.detail));
      }
      rep.verdicts["suites"] = per;
      return ok ? kOk : kVerificationFailed;
    };
  });

  // compact
  auto* cm = app.add_subcommand("compact", "Signature-indexed compact matrix of an equality formula");
  std::string cm_alpha, cm_out;
  std::uint32_t cm_q = 2, cm_r = 2, cm_p = 3;
  std::optional<std::size_t> cm_k, cm_l;
  bool cm_validate = false;
  cm->add_option("--alpha", cm_alpha, "Formula text, or @file")->required();
  cm->add_option("--q", cm_q, "Prime q")->capture_default_str();
  cm->add_option("--r", cm_r, "Depth r")->capture_default_str();
  cm->add_option("--p", cm_p, "Prime p != q")->capture_default_str();
  cm->add_option("--k", cm_k, "Arity of the x-block (default: largest index used)");
  cm->add_option("--l", cm_l, "Arity of the y-block (default: largest index used)");
  cm->add_flag("--validate", cm_validate, "Check the solvability chain by brute force");
  cm->add_option("--out", cm_out, "Write the compact matrix report here");
  cm->callback([&] {
    action = [&] {
      std::string text = cm_alpha;
      if (!text.empty() && text[0] == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw std::invalid_argument("cannot open '" + text.substr(1) + "'");
        std::getline(in, text, '\0');
      }
      const auto probe = eq::parse(text);
      const auto alpha = eq::parse(text, cm_k.value_or(probe.k()), cm_l.value_or(probe.l()));
      gfp::require_prime(cm_q, "q");
      gfp::require_prime(cm_p, "p");
      const auto c = sylow::compact_matrix(alpha, cm_q, cm_r, cm_p);
      rep.verdicts["formula"] = io::formula_to_json(alpha);
      rep.verdicts["compact"] = io::compact_to_json(c);
      const bool solvable = gfp::is_solvable(gfp::LinearSystem::all_ones(c.matrix));
      rep.verdicts["compact_solvable"] = solvable;
      rep.say("compact matrix " + std::to_string(c.matrix.rows()) + "x" + std::to_string(c.matrix.cols()) +
              " over F_" + std::to_string(cm_p) + ", M x = 1 " + (solvable ? "solvable" : "unsolvable"));
      if (!cm_out.empty()) write_artifact(rep, cm_out, io::compact_to_json(c));
      if (!cm_validate) return kOk;
      const auto chain = sylow::check::check_chain(alpha, cm_q, cm_r, cm_p);
      rep.verdicts["chain"] = {{"full", chain.solvable_full},
                               {"averaged", chain.solvable_averaged},
                               {"dedup", chain.solvable_dedup},
                               {"compact", chain.solvable_compact},
                               {"orbits_match_signatures", chain.orbits_match_signatures},
                               {"entries_match", chain.entries_match},
                               {"stabilizer_scaling", chain.stabilizer_scaling},
                               {"consistent", chain.consistent()}};
      rep.say(std::string("equivalence chain ") + (chain.consistent() ? "holds" : "BROKEN") + " (M_n " +
              std::to_string(chain.full_rows) + "x" + std::to_string(chain.full_cols) + " " +
              (chain.solvable_full ? "solvable" : "unsolvable") + ")");
      return chain.consistent() ? kOk : kVerificationFailed;
    };
  });

  // suite
  auto* su = app.add_subcommand("suite", "Run the acceptance battery");
  std::vector<int> su_only;
  su->add_option("--only", su_only, "Criterion ids to run")->delimiter(',');
  su->callback([&] {
    action = [&] {
      suite::Options o;
      o.seed = g.seed;
      o.threads = g.threads;
      bool ok = true;
      Json results = Json::array();
      for (const auto& r : suite::run(o, su_only)) {
        ok = ok && r.passed;
        rep.say(suite::format(r));
        results.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail},
                           {"seconds", r.seconds}, {"limit", r.limit}});
      }
      rep.verdicts["criteria"] = results;
      return ok ? kOk : kVerificationFailed;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int code = kOk;
  std::string error;
  try {
    if (!g.caps.empty()) default_caps().apply(g.caps);
    code = action();
  } catch (const ResourceCapError& e) {
    code = kResourceCap;
    error = std::string("resource cap: ") + e.what();
  } catch (const ConsistencyError& e) {
    code = kVerificationFailed;
    error = std::string("verification failed: ") + e.what();
  } catch (const Json::exception& e) {
    code = kInputError;
    error = std::string("input error: ") + e.what();
  } catch (const std::invalid_argument& e) {
    code = kInputError;
    error = std::string("input error: ") + e.what();
  } catch (const std::out_of_range& e) {
    code = kInputError;
    error = std::string("input error: ") + e.what();
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const Caps& caps = default_caps();
  Json report{{"schema_version", kSchemaVersion},
              {"command", g.argv},
              {"config",
               {{"seed", g.seed},
                {"threads", g.threads},
                {"caps",
                 {{"gadget", caps.gadget_size},
                  {"preorder", caps.explicit_preorder},
                  {"wl_tuples", caps.wl_tuples},
                  {"group", caps.group_elements},
                  {"twists", caps.twist_enumeration},
                  {"matrix", caps.matrix_entries}}}}},
              {"verdicts", rep.verdicts},
              {"timings", {{"seconds", seconds}}},
              {"artifacts", rep.artifacts},
              {"exit_code", code}};
  if (!error.empty()) report["error"] = error;
  if (!g.report.empty()) io::write_file(g.report, report);
  if (g.json) {
    std::cout << report.dump(2) << '\n';
  } else {
    for (const auto& line : rep.lines) std::cout << line << '\n';
  }
  if (!error.empty()) std::cerr << error << '\n';
  return code;
}
