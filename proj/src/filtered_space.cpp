#include "procpolar/filtered_space.hpp"

#include <algorithm>
#include <deque>

#include "procpolar/errors.hpp"

namespace procpolar {

TreeValidationReport validate_tree(const TreeDescription& d) {
  TreeValidationReport report;
  auto violate = [&](std::optional<NodeId> node, std::string message) {
    report.violations.push_back({node, std::move(message)});
  };
  const std::size_t n = d.parent.size();
  if (n == 0) {
    violate(std::nullopt, "tree has no nodes");
    return report;
  }
  if (d.one_step_prob.size() != n) {
    violate(std::nullopt, "probability list has " + std::to_string(d.one_step_prob.size()) +
                              " entries for " + std::to_string(n) + " nodes");
    return report;
  }

  std::vector<NodeId> roots;
  std::vector<std::vector<NodeId>> children(n);
  for (NodeId v = 0; v < n; ++v) {
    const auto& p = d.parent[v];
    if (!p) {
      roots.push_back(v);
      continue;
    }
    if (*p >= n) {
      violate(v, "parent index " + std::to_string(*p) + " out of range");
      continue;
    }
    if (*p == v) {
      violate(v, "node is its own parent");
      continue;
    }
    children[*p].push_back(v);
    const Rational& q = d.one_step_prob[v];
    if (q <= 0) {
      violate(v, "non-equivalent measure: one-step probability " + to_string(q) + " is not strictly positive");
    } else if (q > 1) {
      violate(v, "one-step probability " + to_string(q) + " exceeds 1");
    }
  }
  if (roots.size() != 1) {
    violate(std::nullopt, "expected exactly one root, found " + std::to_string(roots.size()));
    return report;
  }

  std::vector<std::optional<std::size_t>> depth(n);
  std::deque<NodeId> queue{roots.front()};
  depth[roots.front()] = 0;
  std::size_t horizon = 0;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    horizon = std::max(horizon, *depth[v]);
    for (NodeId c : children[v]) {
      depth[c] = *depth[v] + 1;
      queue.push_back(c);
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!depth[v]) violate(v, "node not reachable from the root (cycle)");
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!depth[v]) continue;
    if (children[v].empty()) {
      if (*depth[v] != horizon) {
        violate(v, "terminal node at time " + std::to_string(*depth[v]) + " before horizon " +
                       std::to_string(horizon));
      }
      continue;
    }
    Rational sum = 0;
    for (NodeId c : children[v]) sum += d.one_step_prob[c];
    if (sum != 1) violate(v, "children probabilities sum to " + to_string(sum) + ", not 1");
  }
  return report;
}

EventTree EventTree::build(const TreeDescription& d) {
  const auto report = validate_tree(d);
  if (!report.ok()) {
    std::string msg = "invalid event tree:";
    for (const auto& v : report.violations) {
      msg += " [";
      if (v.node) msg += "node " + std::to_string(*v.node) + ": ";
      msg += v.message + "]";
    }
    throw InputError(msg);
  }
  EventTree tree;
  tree.description_ = d;
  const std::size_t n = d.parent.size();
  tree.parent_ = d.parent;
  tree.children_.assign(n, {});
  tree.time_.assign(n, 0);
  tree.one_step_prob_ = d.one_step_prob;
  tree.path_prob_.assign(n, Rational(0));
  for (NodeId v = 0; v < n; ++v) {
    if (d.parent[v]) {
      tree.children_[*d.parent[v]].push_back(v);
    } else {
      tree.root_ = v;
    }
  }
  tree.one_step_prob_[tree.root_] = 1;
  std::deque<NodeId> queue{tree.root_};
  tree.path_prob_[tree.root_] = 1;
  std::vector<NodeId> order;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    order.push_back(v);
    for (NodeId c : tree.children_[v]) {
      tree.time_[c] = tree.time_[v] + 1;
      tree.path_prob_[c] = tree.path_prob_[v] * tree.one_step_prob_[c];
      queue.push_back(c);
    }
  }
  tree.horizon_ = tree.time_[order.back()];
  tree.nodes_at_time_.assign(tree.horizon_ + 1, {});
  // Breadth-first order keeps siblings contiguous and atoms in tree order.
  for (NodeId v : order) tree.nodes_at_time_[tree.time_[v]].push_back(v);
  tree.terminal_index_.assign(n, static_cast<std::size_t>(-1));
  const auto& leaves = tree.nodes_at_time_[tree.horizon_];
  for (std::size_t i = 0; i < leaves.size(); ++i) tree.terminal_index_[leaves[i]] = i;
  return tree;
}

EventTree EventTree::uniform(const std::vector<std::size_t>& branching) {
  TreeDescription d;
  d.parent.push_back(std::nullopt);
  d.one_step_prob.push_back(Rational(1));
  std::vector<NodeId> level{0};
  for (std::size_t b : branching) {
    std::vector<NodeId> next;
    for (NodeId v : level) {
      for (std::size_t k = 0; k < b; ++k) {
        next.push_back(d.parent.size());
        d.parent.push_back(v);
        d.one_step_prob.push_back(Rational(1, static_cast<long>(b)));
      }
    }
    level = std::move(next);
  }
  return build(d);
}

std::size_t EventTree::terminal_index(NodeId terminal) const {
  const std::size_t i = terminal_index_.at(terminal);
  if (i == static_cast<std::size_t>(-1)) {
    throw InputError("node " + std::to_string(terminal) + " is not terminal");
  }
  return i;
}

NodeId EventTree::ancestor_at(NodeId n, std::size_t t) const {
  if (t > time(n)) {
    throw InputError("time " + std::to_string(t) + " is after node " + std::to_string(n));
  }
  while (time_[n] > t) n = *parent_[n];
  return n;
}

std::vector<std::size_t> EventTree::terminals_below(NodeId n) const {
  std::vector<std::size_t> out;
  for (NodeId leaf : terminals()) {
    if (ancestor_at(leaf, time(n)) == n) out.push_back(terminal_index_[leaf]);
  }
  return out;
}

bool EventTree::is_ancestor_or_self(NodeId ancestor, NodeId n) const {
  return time(ancestor) <= time(n) && ancestor_at(n, time(ancestor)) == ancestor;
}

std::vector<std::vector<std::size_t>> atoms_at_time(const EventTree& tree, std::size_t t) {
  if (t > tree.horizon()) {
    throw InputError("time " + std::to_string(t) + " outside 0.." + std::to_string(tree.horizon()));
  }
  std::vector<std::vector<std::size_t>> atoms;
  for (NodeId n : tree.nodes_at(t)) atoms.push_back(tree.terminals_below(n));
  return atoms;
}

Rational cond_exp_one_step(const EventTree& tree, const Values& values, NodeId node) {
  if (tree.is_terminal(node)) throw InputError("conditional expectation at terminal node " + std::to_string(node));
  if (values.size() != tree.size()) throw InputError("value vector does not match the tree");
  Rational sum = 0;
  for (NodeId c : tree.children(node)) sum += tree.one_step_prob(c) * values[c];
  return sum;
}

Rational cond_exp_one_step(const EventTree& tree, const std::map<NodeId, Rational>& values, NodeId node) {
  if (tree.is_terminal(node)) throw InputError("conditional expectation at terminal node " + std::to_string(node));
  Rational sum = 0;
  for (NodeId c : tree.children(node)) {
    const auto it = values.find(c);
    if (it == values.end()) throw InputError("missing value for child " + std::to_string(c));
    sum += tree.one_step_prob(c) * it->second;
  }
  return sum;
}

FiniteSpace::FiniteSpace(Values probabilities) : prob_(std::move(probabilities)) {
  if (prob_.empty()) throw InputError("probability space has no points");
  Rational total = 0;
  for (const auto& p : prob_) {
    if (p <= 0) throw InputError("point probability " + to_string(p) + " is not strictly positive");
    total += p;
  }
  if (total != 1) throw InputError("point probabilities sum to " + to_string(total));
}

FiniteSpace FiniteSpace::terminal_space(const EventTree& tree) {
  Values p;
  for (NodeId leaf : tree.terminals()) p.push_back(tree.path_prob(leaf));
  return FiniteSpace(std::move(p));
}

FiniteSpace FiniteSpace::uniform(std::size_t points) {
  return FiniteSpace(Values(points, Rational(1, static_cast<long>(points))));
}

Partition::Partition(std::size_t ground_size, std::vector<std::vector<std::size_t>> blocks)
    : blocks_(std::move(blocks)), block_of_(ground_size, static_cast<std::size_t>(-1)) {
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].empty()) throw InputError("partition block " + std::to_string(b) + " is empty");
    for (std::size_t w : blocks_[b]) {
      if (w >= ground_size) throw InputError("partition point " + std::to_string(w) + " out of range");
      if (block_of_[w] != static_cast<std::size_t>(-1)) {
        throw InputError("partition point " + std::to_string(w) + " appears in two blocks");
      }
      block_of_[w] = b;
    }
  }
  for (std::size_t w = 0; w < ground_size; ++w) {
    if (block_of_[w] == static_cast<std::size_t>(-1)) {
      throw InputError("partition does not cover point " + std::to_string(w));
    }
  }
}

Partition Partition::trivial(std::size_t ground_size) {
  std::vector<std::size_t> all(ground_size);
  for (std::size_t i = 0; i < ground_size; ++i) all[i] = i;
  return Partition(ground_size, {all});
}

Partition Partition::discrete(std::size_t ground_size) {
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < ground_size; ++i) blocks.push_back({i});
  return Partition(ground_size, std::move(blocks));
}

RandomVariable::RandomVariable(Values values) : values_(std::move(values)) {
  for (const auto& v : values_) {
    if (v < 0) throw InputError("random variable value " + to_string(v) + " is negative");
  }
}

RandomVariable RandomVariable::constant(std::size_t points, const Rational& c) {
  return RandomVariable(Values(points, c));
}

Rational expectation(const FiniteSpace& space, const Values& values) {
  if (values.size() != space.size()) throw InputError("random variable does not match the space");
  Rational sum = 0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += space.prob(i) * values[i];
  return sum;
}

Rational block_probability(const FiniteSpace& space, const Partition& g, std::size_t block) {
  Rational p = 0;
  for (std::size_t w : g.block(block)) p += space.prob(w);
  return p;
}

Values cond_exp_partition(const FiniteSpace& space, const Values& rv, const Partition& g) {
  if (rv.size() != space.size() || g.ground_size() != space.size()) {
    throw InputError("random variable, space and partition sizes disagree");
  }
  Values out(rv.size());
  for (std::size_t b = 0; b < g.block_count(); ++b) {
    Rational mass = 0;
    Rational weighted = 0;
    for (std::size_t w : g.block(b)) {
      mass += space.prob(w);
      weighted += space.prob(w) * rv[w];
    }
    const Rational value = weighted / mass;
    for (std::size_t w : g.block(b)) out[w] = value;
  }
  return out;
}

RandomVariable cond_exp_partition(const FiniteSpace& space, const RandomVariable& rv, const Partition& g) {
  return RandomVariable(cond_exp_partition(space, rv.values(), g));
}

bool is_block_constant(const Values& values, const Partition& g) {
  if (values.size() != g.ground_size()) return false;
  for (const auto& block : g.blocks()) {
    for (std::size_t w : block) {
      if (values[w] != values[block.front()]) return false;
    }
  }
  return true;
}

}  // namespace procpolar
