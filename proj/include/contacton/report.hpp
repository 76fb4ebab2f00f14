#pragma once

#include <string>
#include <utility>
#include <vector>

namespace contacton {

// One named defect compared against its tolerance.  pass = value <= tolerance
// unless the check was built with an explicit verdict.
struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  static Check below(std::string name, double value, double tolerance) {
    return Check{std::move(name), value, tolerance, value <= tolerance};
  }
};

inline bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace contacton
