#include <cstdio>
#include <cstdlib>

#include "cfiforge/suite.hpp"

int main(int argc, char** argv) {
  cfiforge::suite::Options opts;
  if (argc > 1) opts.seed = std::strtoull(argv[1], nullptr, 10);
  const auto results = cfiforge::suite::run(opts, {});
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s\n", cfiforge::suite::format(r).c_str());
    failed += !r.passed;
  }
  std::printf("%zu/%zu criteria passed\n", results.size() - failed, results.size());
  return failed == 0 ? 0 : 1;
}
