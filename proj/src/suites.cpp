#include "procpolar/suites.hpp"

#include <algorithm>

#include "procpolar/errors.hpp"
#include "procpolar/random.hpp"

namespace procpolar {

namespace {

Values random_probabilities(Rng& rng, std::size_t n) {
  Values w(n);
  Rational total = 0;
  for (auto& v : w) {
    v = rng.uniform(1, 4);
    total += v;
  }
  for (auto& v : w) v /= total;
  return w;
}

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

// Zero-absorbed by construction: each child is the parent times a factor.
AdaptedProcess random_multiplicative(const EventTree& tree, Rng& rng, bool positive) {
  Values v(tree.size());
  for (std::size_t t = 0; t <= tree.horizon(); ++t) {
    for (NodeId n : tree.nodes_at(t)) {
      const auto p = tree.parent(n);
      if (!p) {
        v[n] = Rational(rng.uniform(1, 4), 2);
        continue;
      }
      const bool zero = !positive && rng.chance(1, 5);
      v[n] = zero ? Rational(0) : v[*p] * Rational(rng.uniform(1, 5), 3);
    }
  }
  return AdaptedProcess(std::move(v));
}

// Element of S_1: root at most 1, each step a scaled-down martingale step.
AdaptedProcess random_supermartingale(const EventTree& tree, Rng& rng, bool positive) {
  Values v(tree.size());
  v[tree.root()] = Rational(rng.uniform(1, 4), 4);
  for (std::size_t t = 0; t < tree.horizon(); ++t) {
    for (NodeId n : tree.nodes_at(t)) {
      const auto& children = tree.children(n);
      Values r(children.size());
      Rational mean = 0;
      for (std::size_t k = 0; k < children.size(); ++k) {
        r[k] = rng.uniform(positive ? 1 : 0, 4);
        mean += tree.one_step_prob(children[k]) * r[k];
      }
      if (mean == 0) continue;
      const Rational shrink = rng.chance(1, 2) ? Rational(1) : Rational(rng.uniform(2, 3), 4);
      for (std::size_t k = 0; k < children.size(); ++k) v[children[k]] = v[n] * r[k] / mean * shrink;
    }
  }
  return AdaptedProcess(std::move(v));
}

AdaptedProcess random_process(std::size_t size, Rng& rng) {
  Values v(size);
  for (auto& x : v) x = Rational(rng.uniform(0, 4), 2);
  return AdaptedProcess(std::move(v));
}

AdaptedProcess scaled(const AdaptedProcess& y, const Rational& factor) {
  Values v = y.values();
  for (auto& x : v) x *= factor;
  return AdaptedProcess(std::move(v));
}

Values random_block_constant(const Partition& part, Rng& rng, std::int64_t den) {
  Values h(part.ground_size());
  for (std::size_t b = 0; b < part.block_count(); ++b) {
    const Rational v = rng.unit_fraction(den);
    for (std::size_t w : part.block(b)) h[w] = v;
  }
  return h;
}

RandomVariable random_mixture(const RvSet& set, Rng& rng) {
  const auto& gens = set.generators();
  RandomVariable out = gens[rng.index(gens.size())];
  for (int j = 0; j < 2; ++j) {
    out = g_convex_combine(out, gens[rng.index(gens.size())], random_block_constant(set.partition(), rng, 4),
                           set.partition());
  }
  return out;
}

LinearExpr random_objective(std::size_t vars, Rng& rng, std::int64_t lo, std::int64_t hi) {
  LinearExpr obj;
  for (std::size_t v = 0; v < vars; ++v) {
    const auto c = rng.uniform(lo, hi);
    if (c != 0) obj.push_back({v, Rational(c)});
  }
  return obj;
}

template <class Body>
CaseResult guarded(std::uint64_t seed, Body body) {
  CaseResult result;
  result.seed = seed;
  try {
    body(result);
  } catch (const std::exception& e) {
    result.record(false, std::string("exception: ") + e.what());
  }
  return result;
}

}  // namespace

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void CaseResult::record(bool ok, const std::string& what) {
  ++checks;
  if (ok) return;
  ++failures;
  pass = false;
  if (detail.empty()) detail = what;
}

RvCase random_rv_case(std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(rng.uniform(2, 6));
  const Values probs = random_probabilities(rng, n);
  const auto nb = static_cast<std::size_t>(rng.uniform(1, std::min<std::int64_t>(3, n)));
  std::vector<std::vector<std::size_t>> blocks(nb);
  for (std::size_t w = 0; w < n; ++w) blocks[w < nb ? w : rng.index(nb)].push_back(w);
  Partition part(n, std::move(blocks));
  std::vector<RandomVariable> gens;
  const auto k = rng.uniform(1, 4);
  for (std::int64_t g = 0; g < k; ++g) {
    Values v(n);
    for (auto& x : v) x = Rational(rng.uniform(0, 4), 2);
    gens.emplace_back(std::move(v));
  }
  RvCase out{RvSet(FiniteSpace(probs), std::move(part), std::move(gens)), {}};
  const auto& set = out.set;
  for (const auto& g : set.generators()) out.probes.push_back({g, "generator"});
  for (int i = 0; i < 3; ++i) out.probes.push_back({random_mixture(set, rng), "boundary"});
  for (int i = 0; i < 3; ++i) {
    Values v = random_mixture(set, rng).values();
    for (auto& x : v) x *= rng.fraction(0, 3, 4);
    out.probes.push_back({RandomVariable(std::move(v)), "interior"});
  }
  for (int i = 0; i < 3; ++i) {
    Values v = random_mixture(set, rng).values();
    v[rng.index(n)] += Rational(rng.uniform(1, 4), 2);
    out.probes.push_back({RandomVariable(std::move(v)), "exterior"});
  }
  for (int i = 0; i < 2; ++i) {
    Values v(n);
    for (auto& x : v) x = Rational(rng.uniform(0, 4), 2);
    out.probes.push_back({RandomVariable(std::move(v)), "random"});
  }
  return out;
}

EventTree random_tree(std::uint64_t seed, std::size_t max_depth, std::size_t max_branching) {
  Rng rng(seed);
  const auto depth = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(max_depth)));
  TreeDescription d;
  d.parent.push_back(std::nullopt);
  d.one_step_prob.push_back(Rational(1));
  std::vector<NodeId> level{0};
  for (std::size_t t = 0; t < depth; ++t) {
    std::vector<NodeId> next;
    for (NodeId v : level) {
      const auto b = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(max_branching)));
      for (const auto& p : random_probabilities(rng, b)) {
        next.push_back(d.parent.size());
        d.parent.push_back(v);
        d.one_step_prob.push_back(p);
      }
    }
    level = std::move(next);
  }
  return EventTree::build(d);
}

FbtCase random_fbt_case(std::uint64_t seed, const Rational& epsilon) {
  Rng rng(seed);
  EventTree tree = random_tree(rng.fork(), 3, 3);
  std::vector<AdaptedProcess> gens;
  const auto k = rng.uniform(1, 4);
  for (std::int64_t g = 0; g < k; ++g) gens.push_back(random_supermartingale(tree, rng, g == 0));
  if (rng.chance(1, 3)) gens.back() = AdaptedProcess::constant(tree, Rational(1));
  FbtCase out{tree, ProcessSet(tree, gens), {}};
  const auto& set = out.set;
  std::vector<AdaptedProcess> hull;
  for (int i = 0; i < 4; ++i) {
    auto sample = random_hull_element(set, tree, static_cast<std::size_t>(rng.uniform(1, 2)), rng.fork());
    hull.push_back(sample.element);
    out.probes.push_back({std::move(sample.element), true, "hull " + sample.trace.describe()});
  }
  out.probes.push_back({set.generators()[rng.index(set.generators().size())], true, "generator"});
  out.probes.push_back({AdaptedProcess::constant(tree, Rational(0)), true, "zero"});
  for (int i = 0; i < 2; ++i) {
    out.probes.push_back({scaled(hull[rng.index(hull.size())], Rational(rng.uniform(9, 12), 8)), std::nullopt,
                          "scaled hull"});
  }
  {
    Values v = hull[rng.index(hull.size())].values();
    v[rng.index(v.size())] += epsilon;
    out.probes.push_back({AdaptedProcess(std::move(v)), std::nullopt, "bumped hull"});
  }
  out.probes.push_back({random_multiplicative(tree, rng, false), std::nullopt, "random absorbed"});
  out.probes.push_back({random_supermartingale(tree, rng, false), std::nullopt, "random supermartingale"});
  out.probes.push_back({random_process(tree.size(), rng), std::nullopt, "random"});
  return out;
}

Market random_market(std::uint64_t seed) {
  Rng rng(seed);
  EventTree tree = random_tree(rng.fork(), 3, 3);
  const auto d = static_cast<std::size_t>(rng.uniform(1, 2));
  std::vector<Values> prices(d, Values(tree.size()));
  for (auto& s : prices) s[tree.root()] = rng.uniform(1, 8);
  for (std::size_t t = 0; t < tree.horizon(); ++t) {
    for (NodeId n : tree.nodes_at(t)) {
      const auto& children = tree.children(n);
      const Values q = random_probabilities(rng, children.size());
      for (auto& s : prices) {
        Values ratio(children.size());
        Rational mean = 0;
        for (std::size_t c = 0; c < children.size(); ++c) {
          ratio[c] = rng.uniform(1, 6);
          mean += q[c] * ratio[c];
        }
        for (std::size_t c = 0; c < children.size(); ++c) s[children[c]] = s[n] * ratio[c] / mean;
      }
    }
  }
  return Market(std::move(tree), std::move(prices));
}

MarketProbes market_probes(const Market& m, std::uint64_t seed) {
  Rng rng(seed);
  const auto& tree = m.tree();

  std::vector<WealthSample> samples;
  const auto cp = consumption_polytope(m, Rational(1));
  for (int i = 0; i < 3; ++i) {
    LinearExpr obj;
    for (NodeId n = 0; n < tree.size(); ++n) {
      obj.push_back({cp.wealth[n], Rational(rng.uniform(-2, 3))});
      obj.push_back({*cp.consumption[n], Rational(rng.uniform(-2, 3))});
    }
    const auto out = solve({cp.system, Sense::Maximize, std::move(obj)});
    if (out.status != LpStatus::Optimal) continue;
    samples.push_back({cp.wealth_values(out.point), cp.consumption_values(out.point)});
  }

  std::vector<AdaptedProcess> ys;
  const auto emm = emm_polytope(m);
  const auto reference = density_process(m.reference_measure(), m);
  ys.push_back(reference);
  for (int i = 0; i < 2; ++i) {
    const auto vertex = solve({emm.system, Sense::Maximize, random_objective(tree.size(), rng, -3, 3)});
    ys.push_back(density_process(vertex.point, m));
    Values mid(tree.size());
    for (NodeId n = 0; n < tree.size(); ++n) mid[n] = (vertex.point[n] + m.reference_measure()[n]) / 2;
    ys.push_back(density_process(mid, m));
  }
  ys.push_back(solid_multiply(reference, NonIncreasingProcess(tree, AdaptedProcess(random_nonincreasing(tree, rng))),
                              tree));
  ys.push_back(AdaptedProcess::constant(tree, Rational(1)));
  {
    Values v = reference.values();
    v[rng.index(v.size())] *= Rational(9, 8);
    ys.push_back(AdaptedProcess(std::move(v)));
  }
  {
    Values v = random_process(tree.size(), rng).values();
    v[tree.root()] = std::min(v[tree.root()], Rational(1));
    ys.push_back(AdaptedProcess(std::move(v)));
  }

  std::vector<AdaptedProcess> zs;
  for (const auto& s : samples) zs.emplace_back(s.wealth);
  if (!samples.empty()) {
    Values v = samples[rng.index(samples.size())].wealth;
    v[rng.index(v.size())] += Rational(1, 2);
    zs.emplace_back(std::move(v));
  }
  {
    Values claim(tree.size());
    for (NodeId leaf : tree.terminals()) claim[leaf] = rng.uniform(0, 4);
    const auto sh = superhedge_value(claim, m);
    if (sh.value > 0) {
      Values v = sh.envelope;
      for (auto& x : v) x /= sh.value;
      zs.emplace_back(v);
      if (tree.horizon() > 0) {
        v[tree.root()] = Rational(7, 8);
        zs.emplace_back(std::move(v));
      }
    }
  }
  zs.push_back(random_process(tree.size(), rng));

  Values c(tree.size());
  for (auto& x : c) x = rng.uniform(0, 3);
  Values mu(tree.horizon() + 1);
  Rational total = 0;
  for (auto& w : mu) total += (w = rng.uniform(0, 3));
  if (total == 0) {
    mu.back() = 1;
  } else {
    for (auto& w : mu) w /= total;
  }
  ConsumptionDensity consumption(tree, AdaptedProcess(std::move(c)), std::move(mu));
  return {std::move(ys), std::move(zs), std::move(samples), std::move(consumption)};
}


MarketCase random_market_case(std::uint64_t seed) {
  Rng rng(seed);
  Market m = random_market(rng.fork());
  auto probes = market_probes(m, rng.fork());
  return {std::move(m), std::move(probes)};
}

CaseResult cbt_case(std::uint64_t seed) {
  return guarded(seed, [&](CaseResult& r) {
    const auto c = random_rv_case(seed);
    for (std::size_t i = 0; i < c.probes.size(); ++i) {
      const auto& p = c.probes[i];
      const bool hull = hull_membership(p.h, c.set).member;
      const bool bipolar = conditional_bipolar_membership(p.h, c.set).member;
      const std::string where = "probe " + std::to_string(i) + " (" + p.kind + ") " + to_string(p.h.values());
      r.record(hull == bipolar, where + ": hull " + (hull ? "in" : "out") + ", bipolar " + (bipolar ? "in" : "out"));
      if (p.kind == "generator" || p.kind == "boundary" || p.kind == "interior") {
        r.record(hull, where + ": constructed in the hull but reported out");
      }
    }
  });
}

CaseResult fbt_case(std::uint64_t seed) {
  return guarded(seed, [&](CaseResult& r) {
    const auto c = random_fbt_case(seed);
    const auto report = verify_fbt(c.set, c.tree, c.probes);
    for (const auto& e : report.entries) {
      r.record(e.agree(), "probe " + std::to_string(e.probe) + " (" + c.probes[e.probe].origin +
                              "): lp " + (e.lp_in ? "in" : "out") + ", incremental " +
                              (e.incremental_in ? "in" : "out") + "; " + e.certificate);
    }
  });
}

CaseResult market_case(std::uint64_t seed) {
  return guarded(seed, [&](CaseResult& r) {
    const auto mc = random_market_case(seed);
    const auto& m = mc.market;
    const auto& c = mc.probes;
    const auto report = verify_structure_theorem(m, c.y_probes, c.z_probes, c.samples);
    for (const auto& e : report.entries) {
      r.record(e.agree(), std::string("part (") + e.part + ") probe " + std::to_string(e.probe) + ": " + e.note);
    }
    for (std::size_t i = 0; i < 3 && i < c.y_probes.size(); ++i) {
      r.record(y_enlargement_membership(c.y_probes[i], m).member, "density process outside the enlargement");
    }
    const Rational least = minimal_budget(c.consumption, m);
    const auto at = budget_check(c.consumption, least, m);
    r.record(at.admissible && at.required == least,
             "minimal budget " + to_string(least) + " against superhedge requirement " + to_string(at.required));
    const auto below = budget_check(c.consumption, least - Rational(1, 8), m);
    r.record(!below.admissible, "budget below the minimum accepted");
    if (at.admissible) {
      const auto cum = c.consumption.cumulative(m.tree());
      r.record(is_admissible(least - c.consumption.initial_cost(m.tree()), at.strategy, cum, m),
               "budget strategy is not admissible");
    }
  });
}

CaseResult closure_case(std::uint64_t seed, std::size_t count) {
  return guarded(seed, [&](CaseResult& r) {
    Rng rng(seed);
    const EventTree tree = random_tree(rng.fork(), 3, 3);
    std::vector<AdaptedProcess> gens{AdaptedProcess::constant(tree, Rational(1))};
    const auto extra = rng.uniform(0, 3);
    for (std::int64_t g = 0; g < extra; ++g) gens.push_back(random_supermartingale(tree, rng, false));
    const ProcessSet set(tree, gens);
    const auto polar = polar_constraints(set, tree);
    std::vector<AdaptedProcess> pool;
    for (int i = 0; i < 4; ++i) {
      const auto out = solve({polar, Sense::Maximize, random_objective(tree.size(), rng, 0, 4)});
      if (out.status != LpStatus::Optimal) throw InternalError("polar sampling LP is not optimal");
      pool.emplace_back(out.point);
    }
    pool.push_back(AdaptedProcess::constant(tree, Rational(0)));
    for (std::size_t i = 0; i < count; ++i) {
      AdaptedProcess next;
      std::string what;
      if (rng.chance(1, 2)) {
        const auto s = rng.index(tree.horizon() + 1);
        Values h(tree.size(), Rational(0));
        for (NodeId n : tree.nodes_at(s)) h[n] = rng.unit_fraction(4);
        next = fork_splice(pool[rng.index(pool.size())], pool[rng.index(pool.size())],
                           pool[rng.index(pool.size())], s, h, tree);
        what = "fork_splice";
      } else {
        next = solid_multiply(pool[rng.index(pool.size())],
                              NonIncreasingProcess(tree, AdaptedProcess(random_nonincreasing(tree, rng))), tree);
        what = "solid_multiply";
      }
      const bool ok = polar_membership(next, set, tree);
      r.record(ok, what + " left the polar: " + to_string(next.values()));
      if (ok && pool.size() < 24) pool.push_back(std::move(next));
    }
    // Triality: polar vertices stay in the polar of hull samples.
    std::vector<AdaptedProcess> hull;
    for (int i = 0; i < 4; ++i) hull.push_back(random_hull_element(set, tree, 2, rng.fork()).element);
    const ProcessSet hull_set(tree, hull);
    for (std::size_t i = 0; i < 4; ++i) {
      r.record(polar_membership(pool[i], hull_set, tree), "polar vertex fails against a hull sample");
    }
  });
}

CaseResult lemma_case(std::uint64_t seed) {
  return guarded(seed, [&](CaseResult& r) {
    Rng rng(seed);
    const auto c = random_rv_case(rng.fork());
    const auto& set = c.set;
    const auto& part = set.partition();
    const auto polar = conditional_polar_constraints(set);

    std::vector<RandomVariable> gs;
    for (int i = 0; i < 3; ++i) {
      const auto out = solve({polar, Sense::Maximize, random_objective(set.points(), rng, 0, 3)});
      gs.emplace_back(out.point);
    }
    for (int i = 0; i < 3; ++i) {
      const auto mix = g_convex_combine(gs[rng.index(gs.size())], gs[rng.index(gs.size())],
                                        random_block_constant(part, rng, 4), part);
      r.record(conditional_polar_membership(mix, set), "G-convex combination left the conditional polar");
      Values shrunk = gs[rng.index(gs.size())].values();
      for (auto& x : shrunk) x *= rng.unit_fraction(4);
      r.record(conditional_polar_membership(RandomVariable(std::move(shrunk)), set),
               "solid shrink left the conditional polar");
    }
    for (const auto& f : set.generators()) {
      r.record(conditional_bipolar_membership(f, set).member, "generator outside its bipolar");
    }

    for (const auto& p : c.probes) {
      if (!hull_membership(p.h, set).member) continue;
      Values w = random_block_constant(part, rng, 4);
      const Rational mean = expectation(set.space(), w);
      if (mean > 0) {
        const Rational target = Rational(rng.uniform(1, 4), 4);
        for (auto& x : w) x = x * target / mean;
      }
      const RandomVariable l(w);
      const auto dec = secondpolar_decompose(p.h, l, set);
      bool identity = true;
      for (std::size_t i = 0; i < set.points(); ++i) identity = identity && p.h[i] * l[i] == dec.h[i] * dec.k[i];
      r.record(identity, "f l differs from h k");
      r.record(expectation(set.space(), dec.k.values()) <= 1, "E[k] exceeds 1");
      r.record(in_g_unit_ball(dec.k.values(), set.space(), part), "k outside the G unit ball");
      r.record(hull_membership(dec.h, set).member, "h outside the hull");

      std::vector<RandomVariable> hs;
      Values top(set.points(), Rational(0));
      for (int j = 0; j < 3; ++j) {
        const Values a = random_block_constant(part, rng, 4);
        Values h(set.points());
        for (std::size_t i = 0; i < set.points(); ++i) {
          h[i] = p.h[i] * a[i];
          top[i] = std::max(top[i], a[i]);
        }
        hs.emplace_back(std::move(h));
        r.record(in_h_f(hs.back(), p.h, set), "block multiple of f outside H^f");
      }
      const auto joined = pairwise_max_closure(hs, p.h, set);
      bool expected = true;
      for (std::size_t i = 0; i < set.points(); ++i) expected = expected && joined[i] == p.h[i] * top[i];
      r.record(expected && in_h_f(joined, p.h, set), "pairwise maximum is not the expected member of H^f");
    }
  });
}

}  // namespace procpolar
