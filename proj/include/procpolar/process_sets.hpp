#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "procpolar/filtered_space.hpp"

namespace procpolar {

/// Nonnegative adapted process on an event tree: one value per node.
class AdaptedProcess {
 public:
  AdaptedProcess() = default;
  /// Throws InputError on a negative value.
  explicit AdaptedProcess(Values values);
  static AdaptedProcess constant(const EventTree& tree, const Rational& c);

  std::size_t size() const { return values_.size(); }
  const Rational& operator[](NodeId n) const { return values_[n]; }
  const Values& values() const { return values_; }

  bool operator==(const AdaptedProcess&) const = default;

 private:
  Values values_;
};

/// B in V: nonincreasing along every edge with B at the root at most 1.
class NonIncreasingProcess {
 public:
  /// Throws InputError when the process increases somewhere or starts above 1.
  NonIncreasingProcess(const EventTree& tree, AdaptedProcess process);
  const AdaptedProcess& process() const { return process_; }

 private:
  AdaptedProcess process_;
};

/// Finite generator list; the denoted set is the closed, fork-convex and
/// solid hull of the generators.
class ProcessSet {
 public:
  ProcessSet(const EventTree& tree, std::vector<AdaptedProcess> generators);

  const std::vector<AdaptedProcess>& generators() const { return generators_; }
  /// Some generator is strictly positive at every terminal node.
  bool far_reaching() const { return far_reaching_; }
  /// Every generator is a supermartingale starting at most 1.
  bool within_s1() const { return within_s1_; }

 private:
  std::vector<AdaptedProcess> generators_;
  bool far_reaching_ = false;
  bool within_s1_ = false;
};

bool is_supermartingale(const AdaptedProcess& y, const EventTree& tree);
bool is_martingale(const AdaptedProcess& y, const EventTree& tree);
/// Supermartingale with value at most 1 at the root.
bool in_s1(const AdaptedProcess& y, const EventTree& tree);

/// Once zero, zero on every descendant.
bool zero_absorption_check(const AdaptedProcess& y, const EventTree& tree);

/// y(node_t) / y(ancestor at s), 0/0 = 0; equals 1 when s == time(node_t).
Rational increment(const AdaptedProcess& y, const EventTree& tree, std::size_t s, NodeId node_t);

AdaptedProcess solid_multiply(const AdaptedProcess& y, const NonIncreasingProcess& b, const EventTree& tree);

/// Keeps y1 before time s; from s on, y1 at the time-s ancestor times the
/// h-mixture of the multiplicative increments of y2 and y3. `h` is
/// node-indexed; only its time-s entries are read and must lie in [0, 1].
AdaptedProcess fork_splice(const AdaptedProcess& y1, const AdaptedProcess& y2, const AdaptedProcess& y3,
                           std::size_t s, const Values& h, const EventTree& tree);

/// One step of a hull construction.
struct HullStep {
  enum class Kind { Generator, Splice, Solid } kind = Kind::Generator;
  std::size_t generator = 0;          // Generator
  std::size_t operands[3] = {0, 0, 0};  // Splice: earlier step indices; Solid: operands[0]
  std::size_t time = 0;               // Splice
  Values weights;                     // Splice: h per node; Solid: B per node
};

struct HullTrace {
  std::vector<HullStep> steps;  // the last step is the element
  std::string describe() const;
};

struct HullSample {
  AdaptedProcess element;
  HullTrace trace;
};

/// Random element of the hull, built by composing fork_splice and
/// solid_multiply on generators `depth` levels deep. Deterministic in `seed`.
HullSample random_hull_element(const ProcessSet& c, const EventTree& tree, std::size_t depth, std::uint64_t seed);

/// Rebuilds the element a trace describes.
AdaptedProcess replay_trace(const HullTrace& trace, const ProcessSet& c, const EventTree& tree);

}  // namespace procpolar
