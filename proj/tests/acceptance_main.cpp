// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. The d=4 sweep (criterion 5) is part of
// the default run; --skip-d4 exists for quick local iteration only.
#include <cstring>
#include <iostream>
#include <string>

#include "midlayer/verify.hpp"

int main(int argc, char** argv) {
  midlayer::VerifyOptions opt;
  opt.full = true;
  opt.progress = &std::cout;
  for (int i = 1; i < argc; i++) {
    if (std::strcmp(argv[i], "--skip-d4") == 0) opt.full = false;
    else if (std::strcmp(argv[i], "--shards") == 0 && i + 1 < argc)
      opt.shards = std::atoi(argv[++i]);
    else {
      std::cerr << "usage: acceptance [--skip-d4] [--shards N]\n";
      return 2;
    }
  }
  std::cout << "acceptance criteria (" << (opt.full ? "full, d=4 sweep included" : "d=4 skipped")
            << ")\n";
  auto results = midlayer::run_acceptance(opt);
  int failed = 0;
  for (const auto& r : results)
    if (!r.pass) failed++;
  std::cout << (failed ? "RESULT: FAIL " : "RESULT: PASS ") << results.size() - failed << "/"
            << results.size() << " criteria\n";
  return failed ? 1 : 0;
}
