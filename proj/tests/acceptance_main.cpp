#include <algorithm>
#include <iostream>
#include <string>

#include "xydm/acceptance.hpp"
#include "xydm/sweep.hpp"

// Prints one PASS/FAIL line per criterion; the exit status is non-zero if any fail.
int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  const auto selected = xydm::acceptance::select(filter);
  const auto results = xydm::acceptance::run(selected, xydm::default_workers());
  std::cout << xydm::acceptance::to_table(results);
  const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
  std::cout << results.size() - static_cast<std::size_t>(failed) << " passed, " << failed << " failed\n";
  return failed == 0 ? 0 : 1;
}
