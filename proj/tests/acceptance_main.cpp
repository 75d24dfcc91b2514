#include <cstdlib>
#include <iostream>
#include <string>

#include "linext/acceptance.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = linext::acceptance::kDefaultSeed;
  if (argc > 1) seed = std::stoull(argv[1]);
  std::cout << "acceptance seed " << seed << std::endl;
  bool all = true;
  linext::acceptance::run_all(seed, [&](const linext::acceptance::CriterionResult& r) {
    all = all && r.pass;
    std::cout << linext::acceptance::format_line(r) << std::endl;
  });
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
