#include "procpolar/report.hpp"

#include <cstdio>

#include "procpolar/instance.hpp"

namespace procpolar {

void Report::add(std::string id, bool pass, std::string certificate) {
  checks.push_back({std::move(id), pass, std::move(certificate)});
}

bool Report::passed() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string Report::body() const {
  std::string out = "command: " + command + "\ninstance: " + digest + "\n";
  if (seed) out += "seed: " + std::to_string(*seed) + "\n";
  std::size_t passed_count = 0;
  for (const auto& c : checks) {
    out += c.id + "  " + (c.pass ? "pass" : "FAIL") + "  " + c.certificate + "\n";
    passed_count += c.pass ? 1 : 0;
  }
  out += "result: " + std::to_string(passed_count) + "/" + std::to_string(checks.size()) + " passed\n";
  return out;
}

std::string Report::text() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "time: %.1f ms\n", elapsed_ms);
  return body() + buf;
}

std::string Report::machine() const {
  std::string out;
  for (const auto& c : checks) {
    out += c.id + "\t" + (c.pass ? "pass" : "fail") + "\t" + fnv1a_hex(c.certificate) + "\n";
  }
  return out;
}

}  // namespace procpolar
