#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace defexp::cli {

struct CheckGroup {
  std::string name;
  bool pass = false;
  double max_residual = 0.0;
  int count = 0;
};

// Built-in property self-checks over deterministic fixtures. Groups are
// independent of each other and reported sorted by name.
std::vector<CheckGroup> run_check_suite(std::uint64_t seed);

}  // namespace defexp::cli
