#pragma once

// The acceptance battery: ten exhaustive or randomised verification runs,
// each with a wall-clock limit.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cfiforge::suite {

struct Options {
  std::uint64_t seed = 20240601;
  unsigned threads = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
  double limit = 0;
};

using Criterion = CriterionResult (*)(const Options&);

CriterionResult iso_class_law(const Options& opts);
CriterionResult les_correctness(const Options& opts);
CriterionResult canonisation(const Options& opts);
CriterionResult wl_indistinguishability(const Options& opts);
CriterionResult orbit_correspondence(const Options& opts);
CriterionResult symmetric_folding(const Options& opts);
CriterionResult rank_via_solvability(const Options& opts);
CriterionResult sylow_structure(const Options& opts);
CriterionResult counting(const Options& opts);
CriterionResult compact_equivalence(const Options& opts);

/// Criteria in order, ids 1 to 10.
const std::vector<Criterion>& criteria();

/// Runs the selected criteria (all when `only` is empty), timing each; a
/// criterion fails if it exceeds its limit or throws.
std::vector<CriterionResult> run(const Options& opts, const std::vector<int>& only = {});

/// "[PASS] 3 canonisation (0.12 s / 10 s): detail"
std::string format(const CriterionResult& r);

}  // namespace cfiforge::suite
