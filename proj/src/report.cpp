#include "loopexp/report.hpp"

#include <sstream>

#include "json.hpp"

namespace loopexp {

void RunReport::add(const std::string& name, bool pass, const std::string& detail) {
  checks.push_back({name, pass, detail});
}

bool RunReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string RunReport::text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
    if (!c.detail.empty()) os << "  [" << c.detail << "]";
    os << "\n";
  }
  os << (all_pass() ? "ALL PASS" : "FAILURES PRESENT") << " (" << checks.size()
     << " checks)\n";
  return os.str();
}

std::string RunReport::json() const {
  nlohmann::json j;
  j["command"] = command;
  j["seed"] = seed;
  auto in = nlohmann::json::array();
  for (const auto& [name, digest] : inputs) in.push_back({{"name", name}, {"digest", digest}});
  j["inputs"] = in;
  auto arr = nlohmann::json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  j["checks"] = arr;
  j["all_pass"] = all_pass();
  // wall time is intentionally not serialized: reports must be
  // byte-identical under a fixed seed
  return j.dump(2);
}

uint64_t fnv1a(const std::string& data) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace loopexp
