#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "procpolar/rational.hpp"

namespace procpolar {

/// Raw event-tree description as read from an instance file. May violate any
/// tree invariant; validate_tree reports which.
struct TreeDescription {
  std::vector<std::optional<NodeId>> parent;
  /// One-step transition probability into each node; ignored for the root.
  std::vector<Rational> one_step_prob;

  bool operator==(const TreeDescription&) const = default;
};

struct TreeViolation {
  std::optional<NodeId> node;
  std::string message;
};

struct TreeValidationReport {
  std::vector<TreeViolation> violations;
  bool ok() const { return violations.empty(); }
};

TreeValidationReport validate_tree(const TreeDescription& description);

/// Finite filtered probability space as a rooted event tree. Nodes at depth t
/// are the atoms of F_t; P charges every path. Immutable once built.
class EventTree {
 public:
  /// Throws InputError listing every violation when the description is invalid.
  static EventTree build(const TreeDescription& description);

  /// Complete tree with the given per-level branching and uniform one-step
  /// probabilities.
  static EventTree uniform(const std::vector<std::size_t>& branching);

  std::size_t size() const { return parent_.size(); }
  NodeId root() const { return root_; }
  std::size_t horizon() const { return horizon_; }

  std::optional<NodeId> parent(NodeId n) const { return parent_.at(n); }
  const std::vector<NodeId>& children(NodeId n) const { return children_.at(n); }
  std::size_t time(NodeId n) const { return time_.at(n); }
  bool is_terminal(NodeId n) const { return children_.at(n).empty(); }
  const Rational& one_step_prob(NodeId n) const { return one_step_prob_.at(n); }
  /// Product of one-step probabilities along the path from the root.
  const Rational& path_prob(NodeId n) const { return path_prob_.at(n); }
  const Values& path_probs() const { return path_prob_; }

  const std::vector<NodeId>& nodes_at(std::size_t t) const { return nodes_at_time_.at(t); }
  const std::vector<NodeId>& terminals() const { return nodes_at_time_.at(horizon_); }
  /// Position of a terminal node within terminals().
  std::size_t terminal_index(NodeId terminal) const;
  /// Ancestor of n at time t (n itself when t == time(n)).
  NodeId ancestor_at(NodeId n, std::size_t t) const;
  /// Terminal indices (positions in terminals()) below n.
  std::vector<std::size_t> terminals_below(NodeId n) const;
  bool is_ancestor_or_self(NodeId ancestor, NodeId n) const;

  const TreeDescription& description() const { return description_; }

 private:
  EventTree() = default;

  TreeDescription description_;
  NodeId root_ = 0;
  std::size_t horizon_ = 0;
  std::vector<std::optional<NodeId>> parent_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::size_t> time_;
  Values one_step_prob_;
  Values path_prob_;
  std::vector<std::vector<NodeId>> nodes_at_time_;
  std::vector<std::size_t> terminal_index_;
};

/// Atoms of F_t, each given as the terminal indices below one time-t node, in
/// the order of nodes_at(t). Throws InputError when t > horizon.
std::vector<std::vector<std::size_t>> atoms_at_time(const EventTree& tree, std::size_t t);

/// E[values | F_t] at a non-terminal node: sum of one-step probability times
/// child value. `values` is node-indexed.
Rational cond_exp_one_step(const EventTree& tree, const Values& values, NodeId node);

/// Same, with values given only on (at least) the node's children. Throws
/// InputError on a missing child value.
Rational cond_exp_one_step(const EventTree& tree, const std::map<NodeId, Rational>& values, NodeId node);

/// Finite probability space with strictly positive point masses summing to one.
class FiniteSpace {
 public:
  explicit FiniteSpace(Values probabilities);
  /// The terminal nodes of a tree, in terminals() order.
  static FiniteSpace terminal_space(const EventTree& tree);
  static FiniteSpace uniform(std::size_t points);

  std::size_t size() const { return prob_.size(); }
  const Rational& prob(std::size_t i) const { return prob_.at(i); }
  const Values& probabilities() const { return prob_; }

  bool operator==(const FiniteSpace&) const = default;

 private:
  Values prob_;
};

/// Sub-sigma-algebra G of a finite space, as a partition into blocks.
class Partition {
 public:
  Partition(std::size_t ground_size, std::vector<std::vector<std::size_t>> blocks);
  static Partition trivial(std::size_t ground_size);
  static Partition discrete(std::size_t ground_size);

  std::size_t ground_size() const { return block_of_.size(); }
  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<std::size_t>& block(std::size_t b) const { return blocks_.at(b); }
  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
  std::size_t block_of(std::size_t point) const { return block_of_.at(point); }

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> block_of_;
};

/// Nonnegative random variable on a FiniteSpace (an element of L0_+).
class RandomVariable {
 public:
  RandomVariable() = default;
  /// Throws InputError on a negative value.
  explicit RandomVariable(Values values);
  static RandomVariable constant(std::size_t points, const Rational& c);

  std::size_t size() const { return values_.size(); }
  const Rational& operator[](std::size_t i) const { return values_[i]; }
  const Values& values() const { return values_; }

  bool operator==(const RandomVariable&) const = default;

 private:
  Values values_;
};

Rational expectation(const FiniteSpace& space, const Values& values);
Rational block_probability(const FiniteSpace& space, const Partition& g, std::size_t block);

/// E[rv | G]: constant on blocks, value sum_{w in B} P(w) rv(w) / P(B).
Values cond_exp_partition(const FiniteSpace& space, const Values& rv, const Partition& g);
RandomVariable cond_exp_partition(const FiniteSpace& space, const RandomVariable& rv, const Partition& g);

bool is_block_constant(const Values& values, const Partition& g);

}  // namespace procpolar
