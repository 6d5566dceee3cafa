#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace loopexp {

/// Reproduction-harness record: one line per check, deterministic under a
/// fixed seed, byte-identical on reruns with the same inputs.
struct RunReport {
  std::string command;
  uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> inputs;  // name -> digest
  struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
  };
  std::vector<Check> checks;
  long wall_ms = 0;

  void add(const std::string& name, bool pass, const std::string& detail = "");
  bool all_pass() const;
  std::string text() const;  // one PASS/FAIL line per check
  std::string json() const;
};

uint64_t fnv1a(const std::string& data);

}  // namespace loopexp
