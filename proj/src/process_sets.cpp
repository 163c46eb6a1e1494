#include "procpolar/process_sets.hpp"

#include "procpolar/errors.hpp"
#include "procpolar/random.hpp"

namespace procpolar {

namespace {

void require_tree_size(const AdaptedProcess& y, const EventTree& tree) {
  if (y.size() != tree.size()) throw InputError("process does not match the tree");
}

}  // namespace

AdaptedProcess::AdaptedProcess(Values values) : values_(std::move(values)) {
  for (const auto& v : values_) {
    if (v < 0) throw InputError("positive process has negative value " + to_string(v));
  }
}

AdaptedProcess AdaptedProcess::constant(const EventTree& tree, const Rational& c) {
  return AdaptedProcess(Values(tree.size(), c));
}

NonIncreasingProcess::NonIncreasingProcess(const EventTree& tree, AdaptedProcess process)
    : process_(std::move(process)) {
  require_tree_size(process_, tree);
  if (process_[tree.root()] > 1) throw InputError("nonincreasing process starts above 1");
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (const auto p = tree.parent(n); p && process_[n] > process_[*p]) {
      throw InputError("process increases along the edge into node " + std::to_string(n));
    }
  }
}

ProcessSet::ProcessSet(const EventTree& tree, std::vector<AdaptedProcess> generators)
    : generators_(std::move(generators)) {
  if (generators_.empty()) throw InputError("process set needs at least one generator");
  within_s1_ = true;
  for (const auto& y : generators_) {
    require_tree_size(y, tree);
    within_s1_ = within_s1_ && in_s1(y, tree);
  }
  for (const auto& y : generators_) {
    bool positive = true;
    for (NodeId leaf : tree.terminals()) positive = positive && y[leaf] > 0;
    far_reaching_ = far_reaching_ || positive;
  }
}

bool is_supermartingale(const AdaptedProcess& y, const EventTree& tree) {
  require_tree_size(y, tree);
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (!tree.is_terminal(n) && cond_exp_one_step(tree, y.values(), n) > y[n]) return false;
  }
  return true;
}

bool is_martingale(const AdaptedProcess& y, const EventTree& tree) {
  require_tree_size(y, tree);
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (!tree.is_terminal(n) && cond_exp_one_step(tree, y.values(), n) != y[n]) return false;
  }
  return true;
}

bool in_s1(const AdaptedProcess& y, const EventTree& tree) {
  return is_supermartingale(y, tree) && y[tree.root()] <= 1;
}

bool zero_absorption_check(const AdaptedProcess& y, const EventTree& tree) {
  require_tree_size(y, tree);
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (const auto p = tree.parent(n); p && y[*p] == 0 && y[n] != 0) return false;
  }
  return true;
}

Rational increment(const AdaptedProcess& y, const EventTree& tree, std::size_t s, NodeId node_t) {
  require_tree_size(y, tree);
  if (s > tree.time(node_t)) throw PreconditionError("increment needs s <= t");
  if (s == tree.time(node_t)) return Rational(1);
  const NodeId node_s = tree.ancestor_at(node_t, s);
  if (y[node_s] == 0 && y[node_t] != 0) {
    throw PreconditionError("process is not absorbed at zero below node " + std::to_string(node_s));
  }
  return ratio_or_zero(y[node_t], y[node_s]);
}

AdaptedProcess solid_multiply(const AdaptedProcess& y, const NonIncreasingProcess& b, const EventTree& tree) {
  require_tree_size(y, tree);
  require_tree_size(b.process(), tree);
  Values out(y.size());
  for (NodeId n = 0; n < y.size(); ++n) out[n] = y[n] * b.process()[n];
  AdaptedProcess result(std::move(out));
  if (in_s1(y, tree) && !in_s1(result, tree)) throw InternalError("solid_multiply left S_1");
  return result;
}

AdaptedProcess fork_splice(const AdaptedProcess& y1, const AdaptedProcess& y2, const AdaptedProcess& y3,
                           std::size_t s, const Values& h, const EventTree& tree) {
  require_tree_size(y1, tree);
  require_tree_size(y2, tree);
  require_tree_size(y3, tree);
  if (h.size() != tree.size()) throw InputError("splice weight does not match the tree");
  if (s > tree.horizon()) throw InputError("splice time after the horizon");
  for (NodeId n : tree.nodes_at(s)) {
    if (h[n] < 0 || h[n] > 1) throw InputError("splice weight " + to_string(h[n]) + " outside [0,1]");
  }
  if (!zero_absorption_check(y2, tree) || !zero_absorption_check(y3, tree)) {
    throw PreconditionError("spliced processes must be absorbed at zero");
  }
  Values out(tree.size());
  for (NodeId m = 0; m < tree.size(); ++m) {
    if (tree.time(m) < s) {
      out[m] = y1[m];
      continue;
    }
    const NodeId n = tree.ancestor_at(m, s);
    out[m] = y1[n] * (h[n] * increment(y2, tree, s, m) + (1 - h[n]) * increment(y3, tree, s, m));
  }
  AdaptedProcess result(std::move(out));
  if (in_s1(y1, tree) && in_s1(y2, tree) && in_s1(y3, tree) && !in_s1(result, tree)) {
    throw InternalError("fork_splice left S_1");
  }
  return result;
}

std::string HullTrace::describe() const {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& st = steps[i];
    if (i) out += "; ";
    out += "#" + std::to_string(i) + "=";
    switch (st.kind) {
      case HullStep::Kind::Generator:
        out += "gen" + std::to_string(st.generator);
        break;
      case HullStep::Kind::Splice:
        out += "splice(s=" + std::to_string(st.time) + ",#" + std::to_string(st.operands[0]) + ",#" +
               std::to_string(st.operands[1]) + ",#" + std::to_string(st.operands[2]) + ",h=" +
               to_string(st.weights) + ")";
        break;
      case HullStep::Kind::Solid:
        out += "solid(#" + std::to_string(st.operands[0]) + ",B=" + to_string(st.weights) + ")";
        break;
    }
  }
  return out;
}

namespace {

Values random_nonincreasing(const EventTree& tree, Rng& rng) {
  Values b(tree.size());
  for (std::size_t t = 0; t <= tree.horizon(); ++t) {
    for (NodeId n : tree.nodes_at(t)) {
      const Rational factor = rng.chance(1, 2) ? Rational(1) : rng.unit_fraction(4);
      b[n] = tree.parent(n) ? b[*tree.parent(n)] * factor : factor;
    }
  }
  return b;
}

std::size_t build_random(const ProcessSet& c, const EventTree& tree, std::size_t depth, Rng& rng,
                         HullTrace& trace) {
  HullStep step;
  if (depth == 0) {
    step.kind = HullStep::Kind::Generator;
    step.generator = rng.index(c.generators().size());
  } else if (rng.chance(2, 3)) {
    step.kind = HullStep::Kind::Splice;
    for (auto& op : step.operands) op = build_random(c, tree, depth - 1, rng, trace);
    step.time = rng.index(tree.horizon() + 1);
    step.weights.assign(tree.size(), Rational(0));
    for (NodeId n : tree.nodes_at(step.time)) step.weights[n] = rng.unit_fraction(4);
  } else {
    step.kind = HullStep::Kind::Solid;
    step.operands[0] = build_random(c, tree, depth - 1, rng, trace);
    step.weights = random_nonincreasing(tree, rng);
  }
  trace.steps.push_back(std::move(step));
  return trace.steps.size() - 1;
}

}  // namespace

HullSample random_hull_element(const ProcessSet& c, const EventTree& tree, std::size_t depth, std::uint64_t seed) {
  Rng rng(seed);
  HullTrace trace;
  build_random(c, tree, depth, rng, trace);
  AdaptedProcess element = replay_trace(trace, c, tree);
  return {std::move(element), std::move(trace)};
}

AdaptedProcess replay_trace(const HullTrace& trace, const ProcessSet& c, const EventTree& tree) {
  if (trace.steps.empty()) throw InputError("empty hull trace");
  std::vector<AdaptedProcess> built;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& st = trace.steps[i];
    auto operand = [&](std::size_t k) -> const AdaptedProcess& {
      if (st.operands[k] >= i) throw InputError("hull trace refers forward");
      return built[st.operands[k]];
    };
    switch (st.kind) {
      case HullStep::Kind::Generator:
        built.push_back(c.generators().at(st.generator));
        break;
      case HullStep::Kind::Splice:
        built.push_back(fork_splice(operand(0), operand(1), operand(2), st.time, st.weights, tree));
        break;
      case HullStep::Kind::Solid:
        built.push_back(solid_multiply(operand(0), NonIncreasingProcess(tree, AdaptedProcess(st.weights)), tree));
        break;
    }
  }
  return built.back();
}

}  // namespace procpolar
