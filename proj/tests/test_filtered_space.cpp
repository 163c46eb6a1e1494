#include <doctest.h>

#include "fixtures.hpp"
#include "procpolar/errors.hpp"
#include "procpolar/filtered_space.hpp"
#include "procpolar/random.hpp"
#include "procpolar/suites.hpp"

using namespace procpolar;
using fixtures::r;

namespace {

bool mentions(const TreeValidationReport& rep, const std::string& needle) {
  for (const auto& v : rep.violations) {
    if (v.message.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("validate_tree accepts a two-leaf tree and names bad nodes") {
  TreeDescription ok{{std::nullopt, 0, 0}, {r(1), r(1, 2), r(1, 2)}};
  CHECK(validate_tree(ok).ok());

  TreeDescription short_sum{{std::nullopt, 0, 0}, {r(1), r(1, 2), r(1, 4)}};
  auto rep = validate_tree(short_sum);
  REQUIRE_FALSE(rep.ok());
  REQUIRE(rep.violations.front().node.has_value());
  CHECK(*rep.violations.front().node == 0);

  TreeDescription zero_child{{std::nullopt, 0, 0}, {r(1), r(0), r(1)}};
  rep = validate_tree(zero_child);
  CHECK(mentions(rep, "non-equivalent measure"));
  CHECK_THROWS_AS(EventTree::build(zero_child), InputError);

  TreeDescription ragged{{std::nullopt, 0, 0, 1}, {r(1), r(1, 2), r(1, 2), r(1)}};
  CHECK_FALSE(validate_tree(ragged).ok());

  TreeDescription two_roots{{std::nullopt, std::nullopt}, {r(1), r(1)}};
  CHECK_FALSE(validate_tree(two_roots).ok());
}

TEST_CASE("atoms_at_time on the two-step binary tree") {
  const auto tree = EventTree::uniform({2, 2});
  const auto a0 = atoms_at_time(tree, 0);
  REQUIRE(a0.size() == 1);
  CHECK(a0[0].size() == 4);
  const auto a1 = atoms_at_time(tree, 1);
  REQUIRE(a1.size() == 2);
  CHECK(a1[0].size() == 2);
  CHECK(a1[1].size() == 2);
  const auto a2 = atoms_at_time(tree, 2);
  CHECK(a2.size() == 4);
  for (const auto& b : a2) CHECK(b.size() == 1);
  CHECK_THROWS_AS(atoms_at_time(tree, 3), InputError);
}

TEST_CASE("cond_exp_one_step examples") {
  const auto bin = EventTree::uniform({2});
  CHECK(cond_exp_one_step(bin, Values{r(0), r(2), r(0)}, 0) == 1);

  TreeDescription skew{{std::nullopt, 0, 0}, {r(1), r(1, 3), r(2, 3)}};
  const auto t = EventTree::build(skew);
  CHECK(cond_exp_one_step(t, Values{r(0), r(3), r(3)}, 0) == 3);

  const auto tri = EventTree::uniform({3});
  CHECK(cond_exp_one_step(tri, Values{r(0), r(3), r(0), r(0)}, 0) == 1);

  std::map<NodeId, Rational> partial{{1, r(3)}};
  CHECK_THROWS_AS(cond_exp_one_step(tri, partial, 0), InputError);
  partial[2] = 0;
  partial[3] = 0;
  CHECK(cond_exp_one_step(tri, partial, 0) == 1);
}

TEST_CASE("cond_exp_partition examples") {
  const auto space = FiniteSpace::uniform(4);
  const Partition g(4, {{0, 1}, {2, 3}});
  CHECK(cond_exp_partition(space, Values{r(1), r(1), r(2), r(2)}, g) == Values{r(1), r(1), r(2), r(2)});
  CHECK(cond_exp_partition(space, Values{r(2), r(0), r(0), r(0)}, g) == Values{r(1), r(1), r(0), r(0)});
  const Values f{r(3), r(1, 2), r(0), r(7)};
  const auto e = expectation(space, f);
  CHECK(cond_exp_partition(space, f, Partition::trivial(4)) == Values(4, e));
}

TEST_CASE("partitions reject overlaps, gaps and empty blocks") {
  CHECK_THROWS_AS(Partition(3, {{0, 1}, {1, 2}}), InputError);
  CHECK_THROWS_AS(Partition(3, {{0, 1}}), InputError);
  CHECK_THROWS_AS(Partition(2, {{0, 1}, {}}), InputError);
  CHECK_THROWS_AS(FiniteSpace(Values{r(1, 2), r(1, 4)}), InputError);
  CHECK_THROWS_AS(FiniteSpace(Values{r(1), r(0)}), InputError);
}

TEST_CASE("random trees: refinement, path_prob consistency, tower") {
  for (std::uint64_t i = 0; i < 60; ++i) {
    const auto tree = random_tree(case_seed(11, i), 3, 3);
    CHECK(validate_tree(tree.description()).ok());
    Rational total = 0;
    for (NodeId leaf : tree.terminals()) total += tree.path_prob(leaf);
    CHECK(total == 1);
    for (NodeId n = 0; n < tree.size(); ++n) {
      if (tree.is_terminal(n)) continue;
      Rational sum = 0;
      for (NodeId c : tree.children(n)) sum += tree.path_prob(c);
      CHECK(sum == tree.path_prob(n));
    }
    for (std::size_t t = 1; t <= tree.horizon(); ++t) {
      const auto fine = atoms_at_time(tree, t);
      const auto coarse = atoms_at_time(tree, t - 1);
      for (const auto& a : fine) {
        int containing = 0;
        for (const auto& b : coarse) {
          bool all = true;
          for (auto w : a) all = all && std::find(b.begin(), b.end(), w) != b.end();
          containing += all ? 1 : 0;
        }
        CHECK(containing == 1);
      }
    }

    const auto space = FiniteSpace::terminal_space(tree);
    Rng rng(case_seed(12, i));
    Values f(space.size());
    for (auto& v : f) v = rng.fraction(0, 9, 3);
    for (std::size_t s = 0; s <= tree.horizon(); ++s) {
      for (std::size_t t = s; t <= tree.horizon(); ++t) {
        const Partition gs(space.size(), atoms_at_time(tree, s));
        const Partition gt(space.size(), atoms_at_time(tree, t));
        CHECK(cond_exp_partition(space, cond_exp_partition(space, f, gt), gs) == cond_exp_partition(space, f, gs));
      }
    }
    CHECK(expectation(space, cond_exp_partition(space, f, Partition::discrete(space.size()))) ==
          expectation(space, f));
  }
}

TEST_CASE("random variables are nonnegative") {
  CHECK_THROWS_AS(RandomVariable(Values{r(1), r(-1)}), InputError);
  CHECK(RandomVariable::constant(3, r(2)).values() == Values(3, r(2)));
}
