#include "procpolar/polar_engine.hpp"

#include <algorithm>

#include "procpolar/errors.hpp"

namespace procpolar {

namespace {

void require_far_reaching(const ProcessSet& c, OracleOptions options) {
  if (!c.far_reaching() && !options.allow_non_far_reaching) {
    throw PreconditionError("generator set is not far-reaching: every generator vanishes at some terminal node");
  }
}

}  // namespace

ConstraintSystem polar_constraints(const ProcessSet& c, const EventTree& tree) {
  ConstraintSystem sys(tree.size());
  for (std::size_t g = 0; g < c.generators().size(); ++g) {
    const auto& x = c.generators()[g];
    const std::string tag = "generator " + std::to_string(g);
    if (x[tree.root()] != 0) {
      sys.add({{tree.root(), x[tree.root()]}}, Relation::LessEqual, Rational(1), tag + " root");
    }
    for (NodeId n = 0; n < tree.size(); ++n) {
      if (tree.is_terminal(n)) continue;
      LinearExpr terms;
      for (NodeId ch : tree.children(n)) {
        const Rational coef = tree.one_step_prob(ch) * x[ch];
        if (coef != 0) terms.push_back({ch, coef});
      }
      if (x[n] != 0) terms.push_back({n, -x[n]});
      if (terms.empty()) continue;
      sys.add(std::move(terms), Relation::LessEqual, Rational(0), tag + " node " + std::to_string(n));
    }
  }
  return sys;
}

bool polar_membership(const AdaptedProcess& y, const ProcessSet& c, const EventTree& tree) {
  if (y.size() != tree.size()) throw InputError("process does not match the tree");
  return polar_constraints(c, tree).satisfied_by(y.values());
}

std::string ProcessBipolarVerdict::describe() const {
  if (member) return "in";
  std::string out = root_check ? "root check" : "node " + std::to_string(*failing_node);
  out += unbounded ? " unbounded along polar ray " : " violated by polar element ";
  return out + to_string(certificate);
}

ProcessBipolarVerdict bipolar_membership_lp(const AdaptedProcess& z, const ProcessSet& c, const EventTree& tree,
                                            OracleOptions options) {
  require_far_reaching(c, options);
  if (z.size() != tree.size()) throw InputError("process does not match the tree");
  const ConstraintSystem polar = polar_constraints(c, tree);
  ProcessBipolarVerdict verdict;

  auto check = [&](LinearExpr objective, const Rational& bound, NodeId node, bool root) {
    LpProblem p{polar, Sense::Maximize, std::move(objective)};
    const auto out = solve(p);
    if (out.status == LpStatus::Optimal && out.value <= bound) return true;
    verdict.failing_node = node;
    verdict.root_check = root;
    if (out.status == LpStatus::Unbounded) {
      verdict.unbounded = true;
      verdict.certificate = out.ray;
    } else {
      verdict.certificate = out.point;
    }
    return false;
  };

  const NodeId r = tree.root();
  if (z[r] != 0 && !check({{r, z[r]}}, Rational(1), r, true)) return verdict;
  for (std::size_t t = 0; t < tree.horizon(); ++t) {
    for (NodeId n : tree.nodes_at(t)) {
      LinearExpr objective;
      for (NodeId ch : tree.children(n)) {
        const Rational coef = tree.one_step_prob(ch) * z[ch];
        if (coef != 0) objective.push_back({ch, coef});
      }
      if (objective.empty()) continue;  // max of -z(n) Y(n) over Y >= 0 is 0
      if (z[n] != 0) objective.push_back({n, -z[n]});
      if (!check(std::move(objective), Rational(0), n, false)) return verdict;
    }
  }
  verdict.member = true;
  return verdict;
}

IncrementSet increment_set(const ProcessSet& c, const EventTree& tree, std::size_t t1) {
  if (t1 >= tree.horizon()) throw PreconditionError("increment step needs t1 < horizon");
  for (const auto& y : c.generators()) {
    if (!zero_absorption_check(y, tree)) throw PreconditionError("generator is not absorbed at zero");
  }
  IncrementSet out;
  out.t1 = t1;
  for (NodeId n : tree.nodes_at(t1)) {
    const auto& children = tree.children(n);
    Values probs;
    for (NodeId ch : children) probs.push_back(tree.one_step_prob(ch));
    std::vector<RandomVariable> gens;
    for (const auto& y : c.generators()) {
      Values inc;
      for (NodeId ch : children) inc.push_back(increment(y, tree, t1, ch));
      gens.emplace_back(std::move(inc));
    }
    out.atoms.push_back(
        {n, children, RvSet(FiniteSpace(std::move(probs)), Partition::trivial(children.size()), std::move(gens))});
  }
  return out;
}

std::vector<AtomPolar> increment_conditional_polar(const ProcessSet& c, const EventTree& tree, std::size_t t1) {
  std::vector<AtomPolar> out;
  for (const auto& atom : increment_set(c, tree, t1).atoms) {
    out.push_back({atom.atom, atom.children, conditional_polar_constraints(atom.set)});
  }
  return out;
}

std::string IncrementalVerdict::describe() const {
  if (member) return "in";
  if (initial_value_failed) return "initial value above every generator's";
  if (failing_atom) return "increment out of node " + std::to_string(*failing_atom) + " outside the conditional bipolar";
  return "not absorbed at zero";
}

IncrementalVerdict bipolar_membership_incremental(const AdaptedProcess& z, const ProcessSet& c,
                                                  const EventTree& tree, OracleOptions options) {
  require_far_reaching(c, options);
  if (z.size() != tree.size()) throw InputError("process does not match the tree");
  if (!zero_absorption_check(z, tree)) throw PreconditionError("probe is not absorbed at zero");
  IncrementalVerdict verdict;
  Rational best_start = 0;
  for (const auto& y : c.generators()) best_start = std::max(best_start, y[tree.root()]);
  if (z[tree.root()] > best_start) {
    verdict.initial_value_failed = true;
    return verdict;
  }
  for (std::size_t t = 0; t < tree.horizon(); ++t) {
    for (const auto& atom : increment_set(c, tree, t).atoms) {
      if (z[atom.atom] == 0) continue;
      Values inc;
      for (NodeId ch : atom.children) inc.push_back(z[ch] / z[atom.atom]);
      if (!conditional_bipolar_membership(RandomVariable(std::move(inc)), atom.set).member) {
        verdict.failing_atom = atom.atom;
        return verdict;
      }
    }
  }
  verdict.member = true;
  return verdict;
}

AdaptedProcess cadlag_envelope(const ProcessSet& c, const EventTree& tree, const Values& g, std::size_t t1,
                               std::size_t t2) {
  if (t1 > t2 || t2 > tree.horizon()) throw InputError("envelope needs t1 <= t2 <= horizon");
  if (g.size() != tree.size()) throw InputError("g does not match the tree");
  for (NodeId n : tree.nodes_at(t2)) {
    if (g[n] < 0) throw InputError("g must be nonnegative");
  }
  for (const auto& y : c.generators()) {
    if (!zero_absorption_check(y, tree)) throw PreconditionError("generator is not absorbed at zero");
  }
  Values x(tree.size(), Rational(1));
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (tree.time(n) >= t2) x[n] = g[tree.ancestor_at(n, t2)];
  }
  // Backward recursion; the hull maximum at a node is a one-step choice among
  // generator increments.
  for (std::size_t t = t2; t-- > t1;) {
    for (NodeId n : tree.nodes_at(t)) {
      Rational best = 0;
      for (const auto& y : c.generators()) {
        Rational value = 0;
        for (NodeId ch : tree.children(n)) value += tree.one_step_prob(ch) * increment(y, tree, t, ch) * x[ch];
        best = std::max(best, value);
      }
      x[n] = best;
    }
  }
  for (NodeId n : tree.nodes_at(t1)) {
    if (x[n] > 1) {
      throw PreconditionError("envelope hypothesis fails: value " + to_string(x[n]) + " > 1 at node " +
                              std::to_string(n));
    }
  }
  AdaptedProcess envelope(std::move(x));
  for (const auto& y : c.generators()) {
    Values product(tree.size());
    for (NodeId n = 0; n < tree.size(); ++n) product[n] = envelope[n] * y[n];
    if (!is_supermartingale(AdaptedProcess(std::move(product)), tree)) {
      throw InternalError("envelope times a generator is not a supermartingale");
    }
  }
  return envelope;
}

bool FbtReport::all_agree() const {
  return std::all_of(entries.begin(), entries.end(), [](const FbtEntry& e) { return e.agree(); });
}

FbtReport verify_fbt(const ProcessSet& c, const EventTree& tree, const std::vector<FbtProbe>& probes,
                     OracleOptions options) {
  require_far_reaching(c, options);
  FbtReport report;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto& probe = probes[i];
    FbtEntry entry;
    entry.probe = i;
    entry.known_in = probe.known_in;
    const auto lp = bipolar_membership_lp(probe.z, c, tree, options);
    entry.lp_in = lp.member;
    std::string incremental_note;
    if (zero_absorption_check(probe.z, tree)) {
      const auto inc = bipolar_membership_incremental(probe.z, c, tree, options);
      entry.incremental_in = inc.member;
      incremental_note = inc.describe();
    } else {
      // An increment out of a zero would be infinite: not a supermartingale.
      entry.incremental_in = false;
      incremental_note = "not absorbed at zero";
    }
    entry.certificate = "lp: " + lp.describe() + " | incremental: " + incremental_note;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace procpolar
