#pragma once

#include <optional>
#include <string>
#include <vector>

#include "procpolar/filtered_space.hpp"

namespace procpolar {

struct ProbeSpec {
  Values values;
  std::optional<bool> expect;  // "in" / "out" in the file

  bool operator==(const ProbeSpec&) const = default;
};

struct ProcessSection {
  std::vector<Values> generators;  // node-indexed
  std::vector<ProbeSpec> probes;

  bool operator==(const ProcessSection&) const = default;
};

struct RvSection {
  /// Point masses; the tree's terminal space when absent.
  std::optional<Values> probabilities;
  std::vector<std::vector<std::size_t>> partition;
  std::vector<Values> generators;
  std::vector<ProbeSpec> probes;

  bool operator==(const RvSection&) const = default;
};

struct MarketSection {
  std::vector<Values> prices;  // one node-indexed process per asset

  bool operator==(const MarketSection&) const = default;
};

struct ConsumptionSection {
  Values density;  // node-indexed
  Values mu;       // one weight per time 0..T

  bool operator==(const ConsumptionSection&) const = default;
};

/// One instance document. Sections other than the tree are optional.
struct Instance {
  int version = 1;
  TreeDescription tree;
  std::optional<ProcessSection> processes;
  std::optional<RvSection> rv;
  std::optional<MarketSection> market;
  std::optional<Values> claim;  // terminal payoff, in terminal order
  std::optional<ConsumptionSection> consumption;
  std::optional<Rational> budget;

  bool operator==(const Instance&) const = default;
};

/// JSON text to Instance. Numbers must be integers or "n/d" strings; anything
/// else raises InputError. Structural checks beyond shape are left to the
/// module constructors.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);
std::string serialize_instance(const Instance& instance);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);
/// Digest of the canonical serialization.
std::string instance_digest(const Instance& instance);

}  // namespace procpolar
