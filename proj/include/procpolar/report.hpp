#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace procpolar {

struct CheckLine {
  std::string id;
  bool pass = true;
  std::string certificate;
};

struct Report {
  std::string command;
  std::string digest = "-";
  std::optional<std::uint64_t> seed;
  std::vector<CheckLine> checks;
  double elapsed_ms = 0;

  void add(std::string id, bool pass, std::string certificate);
  bool passed() const;
  /// Everything except timing; identical across reruns.
  std::string body() const;
  std::string text() const;
  /// check-id, verdict, certificate digest; tab-separated, one per line.
  std::string machine() const;
};

}  // namespace procpolar
