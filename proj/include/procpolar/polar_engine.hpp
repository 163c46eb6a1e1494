#pragma once

#include <optional>
#include <string>
#include <vector>

#include "procpolar/exact_lp.hpp"
#include "procpolar/process_sets.hpp"
#include "procpolar/rv_bipolar.hpp"

namespace procpolar {

/// H-representation of the process polar over node variables Y(n) >= 0: for
/// each generator X, X(root) Y(root) <= 1 and, at every non-terminal node,
/// sum_ch p(ch) X(ch) Y(ch) <= X(n) Y(n).
ConstraintSystem polar_constraints(const ProcessSet& c, const EventTree& tree);

bool polar_membership(const AdaptedProcess& y, const ProcessSet& c, const EventTree& tree);

struct OracleOptions {
  /// Run without the far-reaching hypothesis. Verdicts are then reported but
  /// carry no theorem behind them.
  bool allow_non_far_reaching = false;
};

struct ProcessBipolarVerdict {
  bool member = false;
  /// Node whose check failed; the root check is reported as the root with
  /// `root_check` set.
  std::optional<NodeId> failing_node;
  bool root_check = false;
  /// Polar element (or ray when `unbounded`) against which z fails.
  Values certificate;
  bool unbounded = false;
  std::string describe() const;
};

/// z in C^xx, decided by one LP over the polar per check: the root check
/// max z(root) Y(root) <= 1 and, per non-terminal node, max of
/// sum_ch p z(ch) Y(ch) - z(n) Y(n) <= 0. Requires c far-reaching.
ProcessBipolarVerdict bipolar_membership_lp(const AdaptedProcess& z, const ProcessSet& c, const EventTree& tree,
                                            OracleOptions options = {});

/// One-step multiplicative increments of the generators out of one node.
struct AtomIncrements {
  NodeId atom;
  std::vector<NodeId> children;
  /// Conditional space over the children with the one-step probabilities,
  /// trivial partition, generator increments as random variables.
  RvSet set;
};

/// Generator increments from time t1 to t1 + 1, one entry per time-t1 node.
struct IncrementSet {
  std::size_t t1 = 0;
  std::vector<AtomIncrements> atoms;
};

IncrementSet increment_set(const ProcessSet& c, const EventTree& tree, std::size_t t1);

struct AtomPolar {
  NodeId atom;
  std::vector<NodeId> children;
  ConstraintSystem system;  // over the atom's children
};

/// Conditional polar, w.r.t. F_{t1}, of the step's increment set: one
/// constraint system per time-t1 atom.
std::vector<AtomPolar> increment_conditional_polar(const ProcessSet& c, const EventTree& tree, std::size_t t1);

struct IncrementalVerdict {
  bool member = false;
  bool initial_value_failed = false;
  std::optional<NodeId> failing_atom;
  std::string describe() const;
};

/// Second bipolar oracle: z(root) within the generators' initial values and,
/// at every node where z is positive, z's one-step increment inside the
/// conditional bipolar of that step's generator increments.
IncrementalVerdict bipolar_membership_incremental(const AdaptedProcess& z, const ProcessSet& c,
                                                  const EventTree& tree, OracleOptions options = {});

/// The supermartingale envelope of g: 1 before t1, the maximum over the
/// fork-convex hull of E[g * Delta_{t2,t} Y | F_t] on [t1, t2), g from t2 on
/// (constant along each path after t2). `g` is node-indexed; entries at time
/// t2 are read. PreconditionError when the envelope exceeds 1 at t1.
AdaptedProcess cadlag_envelope(const ProcessSet& c, const EventTree& tree, const Values& g, std::size_t t1,
                               std::size_t t2);

struct FbtProbe {
  AdaptedProcess z;
  /// Known status (hull-constructed probes are known to be in).
  std::optional<bool> known_in;
  std::string origin;
};

struct FbtEntry {
  std::size_t probe = 0;
  bool lp_in = false;
  bool incremental_in = false;
  std::optional<bool> known_in;
  std::string certificate;
  bool agree() const { return lp_in == incremental_in && (!known_in || *known_in == lp_in); }
};

struct FbtReport {
  std::vector<FbtEntry> entries;
  bool all_agree() const;
};

FbtReport verify_fbt(const ProcessSet& c, const EventTree& tree, const std::vector<FbtProbe>& probes,
                     OracleOptions options = {});

}  // namespace procpolar
