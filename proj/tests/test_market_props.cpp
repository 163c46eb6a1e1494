#include <doctest.h>

#include "fixtures.hpp"
#include "procpolar/errors.hpp"
#include "procpolar/market.hpp"
#include "procpolar/random.hpp"
#include "procpolar/suites.hpp"

using namespace procpolar;
using fixtures::r;

namespace {

Rational path_measure(const Values& q, const EventTree& tree, NodeId n) {
  Rational v = 1;
  for (std::optional<NodeId> k = n; k && tree.parent(*k); k = tree.parent(*k)) v *= q[*k];
  return v;
}

bool supermartingale_values(const Values& v, const EventTree& tree) {
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (!tree.is_terminal(n) && cond_exp_one_step(tree, v, n) > v[n]) return false;
  }
  return true;
}

/// One asset on a tree with at most two branches per node, prices strictly
/// separated at every split: the martingale measure is unique.
Market binomial_market(std::uint64_t seed) {
  Rng rng(seed);
  const auto tree = random_tree(rng.fork(), 3, 2);
  Values s(tree.size());
  s[tree.root()] = rng.uniform(2, 8);
  for (std::size_t t = 0; t < tree.horizon(); ++t) {
    for (NodeId n : tree.nodes_at(t)) {
      const auto& ch = tree.children(n);
      if (ch.size() == 1) {
        s[ch[0]] = s[n];
        continue;
      }
      const Rational up = rng.fraction(1, 8, 8);
      const Rational down = rng.fraction(1, 7, 8);
      s[ch[0]] = s[n] * (1 + up);
      s[ch[1]] = s[n] * (1 - down);
    }
  }
  return Market(tree, {s});
}

}  // namespace

TEST_CASE("wealth is linear and consumption enters additively") {
  for (std::uint64_t i = 0; i < 30; ++i) {
    const auto m = random_market(case_seed(61, i));
    const auto& tree = m.tree();
    Rng rng(case_seed(62, i));
    Strategy a = Strategy::zero(m), b = Strategy::zero(m);
    for (NodeId n = 0; n < tree.size(); ++n) {
      for (auto& v : a.holdings[n]) v = rng.fraction(-4, 4, 3);
      for (auto& v : b.holdings[n]) v = rng.fraction(-4, 4, 3);
    }
    Values cum(tree.size());
    for (std::size_t t = 1; t <= tree.horizon(); ++t) {
      for (NodeId n : tree.nodes_at(t)) cum[n] = cum[*tree.parent(n)] + rng.fraction(0, 3, 2);
    }
    const ConsumptionProcess cons(tree, AdaptedProcess(cum));
    const auto none = ConsumptionProcess::none(tree);
    const auto with = wealth(r(2), a, cons, m);
    const auto without = wealth(r(2), a, none, m);
    Strategy sum = Strategy::zero(m);
    for (NodeId n = 0; n < tree.size(); ++n) {
      for (std::size_t k = 0; k < sum.holdings[n].size(); ++k) sum.holdings[n][k] = a.holdings[n][k] + b.holdings[n][k];
    }
    const auto wb = wealth(r(3), b, none, m);
    const auto ws = wealth(r(5), sum, none, m);
    for (NodeId n = 0; n < tree.size(); ++n) {
      CHECK(with[n] + cum[n] == without[n]);
      CHECK(ws[n] == without[n] + wb[n]);
    }
    // Martingale under the reference measure.
    const auto y = density_process(m.reference_measure(), m);
    Values yx(tree.size());
    for (NodeId n = 0; n < tree.size(); ++n) yx[n] = y[n] * without[n];
    for (NodeId n = 0; n < tree.size(); ++n) {
      if (!tree.is_terminal(n)) CHECK(cond_exp_one_step(tree, yx, n) == yx[n]);
    }
  }
}

TEST_CASE("density processes: Bayes ratios and the martingale property") {
  for (std::uint64_t i = 0; i < 30; ++i) {
    const auto m = random_market(case_seed(63, i));
    const auto& tree = m.tree();
    const auto& q = m.reference_measure();
    CHECK(is_equivalent_measure(q, tree));
    const auto y = density_process(q, m);
    CHECK(is_martingale(y, tree));
    for (NodeId n = 0; n < tree.size(); ++n) {
      CHECK(y[n] * tree.path_prob(n) == path_measure(q, tree, n));
      if (const auto p = tree.parent(n)) CHECK(y[n] == y[*p] * q[n] / tree.one_step_prob(n));
    }
    CHECK(y[tree.root()] == 1);
  }
  const Market flat(EventTree::uniform({2}), {Values{r(4), r(4), r(4)}});
  CHECK(density_process(Values{r(1), r(1, 2), r(1, 2)}, flat) == AdaptedProcess::constant(flat.tree(), r(1)));
}

TEST_CASE("Bayes consistency: density times consumption wealth is a supermartingale") {
  for (std::uint64_t i = 0; i < 25; ++i) {
    const auto mc = random_market_case(case_seed(64, i));
    const auto& m = mc.market;
    const auto& tree = m.tree();
    std::vector<Values> measures{m.reference_measure()};
    measures.push_back(superhedge_value(mc.probes.consumption, m).extremal_measure);
    for (const auto& q : measures) {
      const auto y = density_process(q, m);
      for (const auto& s : mc.probes.samples) {
        Values prod(tree.size());
        for (NodeId n = 0; n < tree.size(); ++n) prod[n] = y[n] * s.wealth[n];
        CHECK(supermartingale_values(prod, tree));
      }
    }
  }
}

TEST_CASE("enlargement sandwich") {
  int members = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto mc = random_market_case(case_seed(65, i));
    const auto& m = mc.market;
    const auto y = density_process(m.reference_measure(), m);
    CHECK(y_enlargement_membership(y, m).member);
    Values twice = y.values();
    for (auto& v : twice) v *= 2;
    CHECK_FALSE(y_enlargement_membership(AdaptedProcess(twice), m).member);
    for (const auto& p : mc.probes.y_probes) {
      if (!y_enlargement_membership(p, m).member) continue;
      ++members;
      CHECK(p[m.tree().root()] <= 1);
      CHECK(is_supermartingale(p, m.tree()));
    }
  }
  CHECK(members > 0);
}

TEST_CASE("pure investment wealth has Q-mean at most its start") {
  const auto m1 = fixtures::m1();
  const auto pi = pure_investment_polytope(m1, r(1));
  const auto& q = m1.reference_measure();
  LinearExpr obj;
  for (NodeId leaf : m1.tree().terminals()) obj.push_back({pi.wealth[leaf], path_measure(q, m1.tree(), leaf)});
  const auto best = solve({pi.system, Sense::Maximize, obj});
  REQUIRE(best.status == LpStatus::Optimal);
  CHECK(best.value == 1);

  Values flat(pi.system.num_vars());
  for (NodeId n = 0; n < 3; ++n) flat[pi.wealth[n]] = 1;
  CHECK(pi.system.satisfied_by(flat));
}

TEST_CASE("consumption polytope with no consumption is the pure investment polytope") {
  for (std::uint64_t i = 0; i < 15; ++i) {
    const auto m = random_market(case_seed(66, i));
    const auto pi = pure_investment_polytope(m, r(1));
    const auto cp = consumption_polytope(m, r(1));
    Rng rng(case_seed(67, i));
    LinearExpr obj;
    std::vector<Rational> weights;
    for (NodeId n = 0; n < m.tree().size(); ++n) weights.push_back(rng.uniform(-2, 3));
    LinearExpr a, b;
    for (NodeId n = 0; n < m.tree().size(); ++n) {
      a.push_back({pi.wealth[n], weights[n]});
      b.push_back({cp.wealth[n], weights[n]});
    }
    auto sys = cp.system;
    for (NodeId n = 0; n < m.tree().size(); ++n) sys.add({{*cp.consumption[n], r(1)}}, Relation::Equal, r(0));
    const auto x = solve({pi.system, Sense::Maximize, a});
    const auto y = solve({sys, Sense::Maximize, b});
    REQUIRE(x.status == y.status);
    if (x.status == LpStatus::Optimal) CHECK(x.value == y.value);
  }
}

TEST_CASE("complete markets collapse: superhedge is the Q-price and D vanishes") {
  int tested = 0;
  for (std::uint64_t i = 0; i < 40; ++i) {
    const auto m = binomial_market(case_seed(68, i));
    const auto& tree = m.tree();
    // Unique measure: every q coordinate has equal min and max over the polytope.
    const auto emm = emm_polytope(m);
    bool unique = true;
    for (NodeId n = 0; n < tree.size() && unique; ++n) {
      LinearExpr e{{n, r(1)}};
      const auto hi = solve({emm.system, Sense::Maximize, e});
      const auto lo = solve({emm.system, Sense::Minimize, e});
      unique = hi.value == lo.value;
    }
    REQUIRE(unique);
    Rng rng(case_seed(69, i));
    Values claim(tree.size());
    for (NodeId leaf : tree.terminals()) claim[leaf] = rng.fraction(0, 12, 3);
    Rational price = 0;
    for (NodeId leaf : tree.terminals()) price += path_measure(m.reference_measure(), tree, leaf) * claim[leaf];
    const auto sh = superhedge_value(claim, m);
    CHECK(sh.value == price);
    CHECK(sh.residual == Values(tree.size(), r(0)));
    const auto w = wealth(sh.value, sh.hedge, ConsumptionProcess::none(tree), m);
    for (NodeId leaf : tree.terminals()) CHECK(w[leaf] == claim[leaf]);
    ++tested;
  }
  CHECK(tested == 40);
}

TEST_CASE("incomplete fixture: residual is nondecreasing and envelope dominates the claim") {
  const auto m2 = fixtures::m2();
  const auto sh = superhedge_value(Values{r(0), r(3), r(0), r(0)}, m2);
  const auto w = wealth(sh.value, sh.hedge, ConsumptionProcess::none(m2.tree()), m2);
  for (NodeId n = 0; n < 4; ++n) {
    CHECK(w[n] - sh.residual[n] == sh.envelope[n]);
    if (const auto p = m2.tree().parent(n)) CHECK(sh.residual[n] >= sh.residual[*p]);
  }
  CHECK(sh.envelope[1] == 3);
  CHECK(sh.envelope[2] == 0);
}
