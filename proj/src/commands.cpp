#include "procpolar/commands.hpp"

#include <chrono>
#include <functional>

#include "procpolar/errors.hpp"
#include "procpolar/market.hpp"
#include "procpolar/polar_engine.hpp"
#include "procpolar/rv_bipolar.hpp"
#include "procpolar/suites.hpp"

namespace procpolar {

namespace {

const char* in_out(bool in) { return in ? "in" : "out"; }

bool expected(const std::optional<bool>& expect, bool actual) { return expect ? *expect == actual : actual; }

std::string expect_note(const std::optional<bool>& expect) {
  return expect ? std::string(" (expected ") + in_out(*expect) + ")" : std::string();
}

const ProcessSection& require_processes(const Instance& in) {
  if (!in.processes) throw InputError("instance has no processes section");
  return *in.processes;
}

ProcessSet build_process_set(const Instance& in, const EventTree& tree) {
  std::vector<AdaptedProcess> gens;
  for (const auto& g : require_processes(in).generators) gens.emplace_back(g);
  return ProcessSet(tree, std::move(gens));
}

AdaptedProcess build_probe(const ProbeSpec& p, const EventTree& tree) {
  if (p.values.size() != tree.size()) throw InputError("probe does not match the tree");
  return AdaptedProcess(p.values);
}

Market build_market(const Instance& in, const EventTree& tree) {
  if (!in.market) throw InputError("instance has no market section");
  return Market(tree, in.market->prices);
}

std::optional<NodeId> first_super_violation(const AdaptedProcess& y, const EventTree& tree) {
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (!tree.is_terminal(n) && cond_exp_one_step(tree, y.values(), n) > y[n]) return n;
  }
  return std::nullopt;
}

void check_tree(const Instance& in, Report& r) {
  const auto v = validate_tree(in.tree);
  for (std::size_t i = 0; i < v.violations.size(); ++i) {
    const auto& x = v.violations[i];
    r.add("tree.violation." + std::to_string(i), false,
          (x.node ? "node " + std::to_string(*x.node) + ": " : std::string()) + x.message);
  }
  if (v.ok()) {
    const auto tree = EventTree::build(in.tree);
    r.add("tree", true,
          "nodes " + std::to_string(tree.size()) + ", horizon " + std::to_string(tree.horizon()) + ", terminals " +
              std::to_string(tree.terminals().size()));
  }
}

void check_supermartingale(const Instance& in, const EventTree& tree, Report& r) {
  const auto& s = require_processes(in);
  auto one = [&](const std::string& id, const AdaptedProcess& y) {
    const auto bad = first_super_violation(y, tree);
    const std::string cert = bad ? "conditional mean " + to_string(cond_exp_one_step(tree, y.values(), *bad)) +
                                       " above value " + to_string(y[*bad]) + " at node " + std::to_string(*bad)
                                 : std::string("supermartingale");
    r.add(id, !bad, cert);
  };
  // Probe expectations describe bipolar membership, not this check.
  for (std::size_t i = 0; i < s.generators.size(); ++i) {
    one("supermartingale.generator." + std::to_string(i), AdaptedProcess(s.generators[i]));
  }
  for (std::size_t i = 0; i < s.probes.size(); ++i) {
    one("supermartingale.probe." + std::to_string(i), build_probe(s.probes[i], tree));
  }
}

void check_polar(const Instance& in, const EventTree& tree, Report& r) {
  const auto set = build_process_set(in, tree);
  const auto sys = polar_constraints(set, tree);
  const auto& probes = require_processes(in).probes;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto y = build_probe(probes[i], tree);
    const auto bad = sys.first_violation(y.values());
    r.add("polar.probe." + std::to_string(i), expected(probes[i].expect, !bad),
          std::string(in_out(!bad)) + (bad ? ", violates " + *bad : std::string()) + expect_note(probes[i].expect));
  }
}

void check_bipolar(const Instance& in, const EventTree& tree, Report& r) {
  const auto set = build_process_set(in, tree);
  const auto& probes = require_processes(in).probes;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto v = bipolar_membership_lp(build_probe(probes[i], tree), set, tree);
    r.add("bipolar.probe." + std::to_string(i), expected(probes[i].expect, v.member),
          v.describe() + expect_note(probes[i].expect));
  }
}

void check_cbt(const Instance& in, const EventTree& tree, Report& r) {
  if (!in.rv) throw InputError("instance has no rv section");
  const auto& s = *in.rv;
  FiniteSpace space = s.probabilities ? FiniteSpace(*s.probabilities) : FiniteSpace::terminal_space(tree);
  std::vector<RandomVariable> gens;
  for (const auto& g : s.generators) gens.emplace_back(g);
  const RvSet set(space, Partition(space.size(), s.partition), std::move(gens));
  for (std::size_t i = 0; i < s.probes.size(); ++i) {
    if (s.probes[i].values.size() != set.points()) throw InputError("rv probe does not match the space");
    const RandomVariable h(s.probes[i].values);
    const auto hull = hull_membership(h, set);
    const auto bip = conditional_bipolar_membership(h, set);
    std::string cert = std::string("hull ") + in_out(hull.member) + ", bipolar " + in_out(bip.member);
    if (hull.member) {
      cert += ", weights";
      for (const auto& w : hull.weights) cert += " " + to_string(w);
    } else if (bip.violating_block) {
      cert += ", block " + std::to_string(*bip.violating_block) + (bip.unbounded ? " ray " : " witness ") +
              to_string(bip.witness);
    }
    const bool agree = hull.member == bip.member;
    const bool as_expected = !s.probes[i].expect || *s.probes[i].expect == hull.member;
    r.add("cbt.probe." + std::to_string(i), agree && as_expected, cert + expect_note(s.probes[i].expect));
  }
}

void check_fbt(const Instance& in, const EventTree& tree, const CheckOptions& options, Report& r) {
  const auto set = build_process_set(in, tree);
  std::vector<FbtProbe> probes;
  for (const auto& p : require_processes(in).probes) probes.push_back({build_probe(p, tree), p.expect, "instance"});
  const std::size_t listed = probes.size();
  for (std::uint64_t k = 0; k < 4; ++k) {
    auto sample = random_hull_element(set, tree, 2, case_seed(options.seed, k));
    probes.push_back({std::move(sample.element), true, sample.trace.describe()});
  }
  const auto report = verify_fbt(set, tree, probes);
  for (const auto& e : report.entries) {
    const std::string id = e.probe < listed ? "fbt.probe." + std::to_string(e.probe)
                                            : "fbt.hull." + std::to_string(e.probe - listed);
    std::string cert = std::string("lp ") + in_out(e.lp_in) + ", incremental " + in_out(e.incremental_in);
    if (e.probe >= listed) cert += ", trace " + probes[e.probe].origin;
    r.add(id, e.agree(), cert + "; " + e.certificate + expect_note(e.known_in));
  }
}

void check_market(const Instance& in, const EventTree& tree, const CheckOptions& options, Report& r) {
  const auto m = build_market(in, tree);
  const auto& q = m.reference_measure();
  r.add("market.emm", true, "interior martingale measure " + to_string(q));
  r.add("market.density", true, "density " + to_string(density_process(q, m).values()));
  if (in.claim) {
    if (in.claim->size() != tree.terminals().size()) throw InputError("claim needs one value per terminal");
    Values claim(tree.size(), Rational(0));
    for (std::size_t i = 0; i < tree.terminals().size(); ++i) claim[tree.terminals()[i]] = (*in.claim)[i];
    const auto sh = superhedge_value(claim, m);
    std::string hedge;
    for (NodeId n = 0; n < tree.size(); ++n) {
      if (!tree.is_terminal(n)) hedge += " " + std::to_string(n) + ":" + to_string(sh.hedge.holdings[n]);
    }
    r.add("market.superhedge", true,
          "value " + to_string(sh.value) + ", extremal measure " + to_string(sh.extremal_measure) + ", hedge" +
              hedge + ", residual " + to_string(sh.residual));
  }
  const auto probes = market_probes(m, options.seed);
  const auto report = verify_structure_theorem(m, probes.y_probes, probes.z_probes, probes.samples);
  std::size_t counter[3] = {0, 0, 0};
  for (const auto& e : report.entries) {
    const std::size_t k = static_cast<std::size_t>(e.part - 'a');
    r.add(std::string("market.part_") + e.part + "." + std::to_string(counter[k]++), e.agree(),
          "probe " + std::to_string(e.probe) + ": " + in_out(e.first) + "/" + in_out(e.second) +
              (e.third ? std::string("/") + in_out(*e.third) : std::string()) + ", " + e.note);
  }
}

ConsumptionDensity build_consumption(const Instance& in, const EventTree& tree) {
  if (in.consumption) {
    return ConsumptionDensity(tree, AdaptedProcess(in.consumption->density), in.consumption->mu);
  }
  if (in.claim) {
    if (in.claim->size() != tree.terminals().size()) throw InputError("claim needs one value per terminal");
    Values c(tree.size(), Rational(0));
    for (std::size_t i = 0; i < tree.terminals().size(); ++i) c[tree.terminals()[i]] = (*in.claim)[i];
    Values mu(tree.horizon() + 1, Rational(0));
    mu.back() = 1;
    return ConsumptionDensity(tree, AdaptedProcess(std::move(c)), std::move(mu));
  }
  throw InputError("budget check needs a consumption or claim section");
}

void check_budget(const Instance& in, const EventTree& tree, const CheckOptions& options, Report& r) {
  const auto m = build_market(in, tree);
  const auto c = build_consumption(in, tree);
  const auto x = options.budget ? options.budget : in.budget;
  if (!x) throw InputError("budget check needs a budget (instance field or --budget)");
  if (*x < 0) throw InputError("budget must be nonnegative");
  const auto v = budget_check(c, *x, m);
  std::string cert = "budget " + to_string(*x) + ", required " + to_string(v.required);
  if (v.admissible) {
    cert += ", wealth " + to_string(v.wealth) + ", hedge";
    for (NodeId n = 0; n < tree.size(); ++n) {
      if (!tree.is_terminal(n)) cert += " " + std::to_string(n) + ":" + to_string(v.strategy.holdings[n]);
    }
  } else {
    cert += ", violating measure " + to_string(v.violating_measure);
  }
  r.add("budget", v.admissible, cert);
  const Rational least = minimal_budget(c, m);
  r.add("budget.duality", least == v.required,
        "primal minimum " + to_string(least) + ", dual supremum " + to_string(v.required));
}

}  // namespace

Report run_check(const Instance& in, const std::string& what, const CheckOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  Report r;
  r.command = "check " + what;
  r.digest = instance_digest(in);
  if (what == "tree") {
    check_tree(in, r);
  } else {
    const auto tree = EventTree::build(in.tree);
    if (what == "supermartingale") {
      check_supermartingale(in, tree, r);
    } else if (what == "polar") {
      check_polar(in, tree, r);
    } else if (what == "bipolar") {
      check_bipolar(in, tree, r);
    } else if (what == "cbt") {
      check_cbt(in, tree, r);
    } else if (what == "fbt") {
      r.seed = options.seed;
      check_fbt(in, tree, options, r);
    } else if (what == "market") {
      r.seed = options.seed;
      check_market(in, tree, options, r);
    } else if (what == "budget") {
      check_budget(in, tree, options, r);
    } else {
      throw InputError("unknown check '" + what + "'");
    }
  }
  if (r.checks.empty()) throw InputError("instance has nothing to check for '" + what + "'");
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Report run_fuzz(const std::string& suite, std::uint64_t count, std::uint64_t seed) {
  if (count == 0) throw InputError("count must be at least 1");
  std::function<CaseResult(std::uint64_t)> run;
  if (suite == "cbt") {
    run = cbt_case;
  } else if (suite == "fbt") {
    run = fbt_case;
  } else if (suite == "market") {
    run = market_case;
  } else {
    throw InputError("unknown suite '" + suite + "'");
  }
  const auto start = std::chrono::steady_clock::now();
  Report r;
  r.command = "fuzz " + suite;
  r.seed = seed;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto result = run(case_seed(seed, i));
    r.add(suite + "." + std::to_string(i), result.pass,
          "seed " + std::to_string(result.seed) + ", " + std::to_string(result.checks - result.failures) + "/" +
              std::to_string(result.checks) + " checks" + (result.pass ? std::string() : ": " + result.detail));
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace procpolar
