// Acceptance suite: one pass/fail line per criterion. Without arguments every
// criterion runs; otherwise only the listed ids. Exit status is nonzero when
// any selected criterion fails.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "spie/harness/checks.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    char* end = nullptr;
    const long id = std::strtol(argv[i], &end, 10);
    if (*end != '\0' || id < 1 || id > spie::harness::kCheckCount) {
      std::cerr << "usage: " << argv[0] << " [criterion ids 1.." << spie::harness::kCheckCount << "]\n";
      return 2;
    }
    ids.push_back(static_cast<int>(id));
  }
  if (ids.empty()) {
    for (int i = 1; i <= spie::harness::kCheckCount; ++i) ids.push_back(i);
  }
  int failed = 0;
  for (int id : ids) {
    const auto result = spie::harness::run_check(id);
    std::cout << spie::harness::format_check(result) << std::endl;
    if (!result.passed) ++failed;
  }
  std::cout << ids.size() - static_cast<std::size_t>(failed) << '/' << ids.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
