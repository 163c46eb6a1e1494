#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "procpolar/market.hpp"
#include "procpolar/polar_engine.hpp"
#include "procpolar/rv_bipolar.hpp"

namespace procpolar {

/// Seed of case `index` in a run started from `seed` (splitmix64).
std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index);

/// Outcome of one randomized case. `checks` counts individual comparisons.
struct CaseResult {
  std::uint64_t seed = 0;
  bool pass = true;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string detail;

  void record(bool ok, const std::string& what);
};

struct RvProbe {
  RandomVariable h;
  std::string kind;  // generator, interior, boundary, exterior, random
};

struct RvCase {
  RvSet set;
  std::vector<RvProbe> probes;
};

/// |Omega| <= 6, at most 3 blocks, at most 4 generators, at least 10 probes.
RvCase random_rv_case(std::uint64_t seed);

EventTree random_tree(std::uint64_t seed, std::size_t max_depth, std::size_t max_branching);

struct FbtCase {
  EventTree tree;
  ProcessSet set;
  std::vector<FbtProbe> probes;
};

/// Far-reaching set of at most 4 generators in S_1 on a tree of depth at most
/// 3 and branching at most 3. One probe is a hull element with `epsilon`
/// added at a single node.
FbtCase random_fbt_case(std::uint64_t seed, const Rational& epsilon = Rational(1, 1000));

/// At most 2 assets on a tree of depth at most 3 and branching at most 3,
/// priced as martingales under a random positive measure.
Market random_market(std::uint64_t seed);

struct MarketProbes {
  std::vector<AdaptedProcess> y_probes;  // candidates for the enlargement
  std::vector<AdaptedProcess> z_probes;  // candidates for the wealth bipolar
  std::vector<WealthSample> samples;     // LP vertices of the consumption wealth set
  ConsumptionDensity consumption;
};

MarketProbes market_probes(const Market& m, std::uint64_t seed);

struct MarketCase {
  Market market;
  MarketProbes probes;
};

MarketCase random_market_case(std::uint64_t seed);

/// Hull and conditional bipolar oracles on every probe.
CaseResult cbt_case(std::uint64_t seed);
/// LP and incremental oracles on every probe; hull probes must be in.
CaseResult fbt_case(std::uint64_t seed);
/// Structure theorem parts, budget primal/dual agreement, superhedge duality.
CaseResult market_case(std::uint64_t seed);

/// `count` fork_splice/solid_multiply compositions of LP-sampled polar
/// elements, each checked against the polar.
CaseResult closure_case(std::uint64_t seed, std::size_t count);

/// Conditional polar closure, second polar decomposition round trip and the
/// H^f pairwise maximum, on one random instance.
CaseResult lemma_case(std::uint64_t seed);

}  // namespace procpolar
