// One line per acceptance criterion; exit status is nonzero if any fails.

#include <cstdio>

#include "criteria.hpp"

int main() {
  bct::criteria::Options opt;
  int failed = 0;
  for (int id = 1; id <= 10; ++id) {
    const bct::criteria::Result r = bct::criteria::run(id, opt);
    std::printf("%s\n", bct::criteria::line(r).c_str());
    std::fflush(stdout);
    failed += r.pass ? 0 : 1;
  }
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
