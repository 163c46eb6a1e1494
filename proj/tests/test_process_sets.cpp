#include <doctest.h>

#include "fixtures.hpp"
#include "procpolar/errors.hpp"
#include "procpolar/process_sets.hpp"
#include "procpolar/suites.hpp"

using namespace procpolar;
using fixtures::r;

namespace {

AdaptedProcess proc(std::initializer_list<Rational> v) { return AdaptedProcess(Values(v)); }

}  // namespace

TEST_CASE("supermartingale examples") {
  const auto bin = EventTree::uniform({2});
  const auto two = EventTree::uniform({2, 1});
  CHECK(is_supermartingale(AdaptedProcess::constant(two, r(1)), two));
  CHECK(is_martingale(proc({1, 2, 0, 2, 0}), two));
  CHECK(is_supermartingale(proc({1, 2, 0, 2, 0}), two));
  CHECK_FALSE(is_supermartingale(proc({1, 2, 1}), bin));
  CHECK(in_s1(proc({1, 1, 0}), bin));
  CHECK_FALSE(in_s1(proc({2, 2, 2}), bin));
  CHECK_THROWS_AS(proc({1, -1, 0}), InputError);
}

TEST_CASE("zero absorption") {
  const auto two = EventTree::uniform({2, 1});
  CHECK(zero_absorption_check(proc({1, 2, 0, 2, 0}), two));
  CHECK(zero_absorption_check(proc({1, 1, 1, 1, 1}), two));
  CHECK_FALSE(zero_absorption_check(proc({1, 0, 2, 1, 2}), two));
}

TEST_CASE("increment examples") {
  const auto bin = EventTree::uniform({2});
  const auto y = proc({1, r(2, 3), r(4, 3)});
  CHECK(increment(y, bin, 1, 1) == 1);
  CHECK(increment(y, bin, 0, 1) == r(2, 3));
  const auto two = EventTree::uniform({2, 1});
  CHECK(increment(proc({1, 0, 2, 0, 2}), two, 1, 3) == 0);
  CHECK_THROWS_AS(increment(y, bin, 1, 0), PreconditionError);
  CHECK_THROWS_AS(increment(proc({1, 0, 2, 1, 2}), two, 1, 3), PreconditionError);
}

TEST_CASE("solid_multiply examples") {
  const auto bin = EventTree::uniform({2});
  const auto y = proc({1, 2, 0});
  const NonIncreasingProcess one(bin, AdaptedProcess::constant(bin, r(1)));
  CHECK(solid_multiply(y, one, bin) == y);
  const NonIncreasingProcess half(bin, AdaptedProcess::constant(bin, r(1, 2)));
  const auto scaled = solid_multiply(y, half, bin);
  CHECK(scaled == proc({r(1, 2), 1, 0}));
  CHECK(is_supermartingale(scaled, bin));
  const NonIncreasingProcess b(bin, proc({1, 1, r(1, 2)}));
  CHECK(solid_multiply(AdaptedProcess::constant(bin, r(1)), b, bin) == b.process());
  CHECK_THROWS_AS(NonIncreasingProcess(bin, proc({1, 2, 0})), InputError);
  CHECK_THROWS_AS(NonIncreasingProcess(bin, proc({2, 1, 1})), InputError);
}

TEST_CASE("fork_splice examples") {
  const auto bin = EventTree::uniform({2});
  const auto one = AdaptedProcess::constant(bin, r(1));
  const auto y2 = proc({1, 2, 0});
  const auto y3 = proc({1, r(2, 3), r(4, 3)});
  const Values half(bin.size(), r(1, 2));
  CHECK(fork_splice(y3, y3, y3, 0, half, bin) == y3);
  CHECK(fork_splice(one, y2, y3, 0, Values(bin.size(), r(1)), bin) == y2);
  CHECK(fork_splice(one, y2, y3, 0, half, bin) == proc({1, r(4, 3), r(2, 3)}));
  CHECK(fork_splice(y2, y3, y3, 1, half, bin) == y2);
  CHECK_THROWS_AS(fork_splice(one, y2, y3, 0, Values(bin.size(), r(3, 2)), bin), InputError);

  const auto two = EventTree::uniform({2, 1});
  const auto graft = fork_splice(proc({1, 2, 0, 2, 0}), proc({1, 1, 1, r(1, 2), 1}),
                                 AdaptedProcess::constant(two, r(1)), 1, Values(two.size(), r(1)), two);
  CHECK(graft == proc({1, 2, 0, 1, 0}));
}

TEST_CASE("random hull elements: S1 closure, traces replay") {
  for (std::uint64_t i = 0; i < 60; ++i) {
    const auto fc = random_fbt_case(case_seed(3, i));
    const auto g0 = random_hull_element(fc.set, fc.tree, 0, case_seed(4, i));
    bool is_generator = false;
    for (const auto& g : fc.set.generators()) is_generator = is_generator || g == g0.element;
    CHECK(is_generator);
    for (std::size_t depth = 1; depth <= 3; ++depth) {
      const auto s = random_hull_element(fc.set, fc.tree, depth, case_seed(5, i * 4 + depth));
      CHECK(in_s1(s.element, fc.tree));
      CHECK(zero_absorption_check(s.element, fc.tree));
      CHECK(replay_trace(s.trace, fc.set, fc.tree) == s.element);
      CHECK(random_hull_element(fc.set, fc.tree, depth, case_seed(5, i * 4 + depth)).element == s.element);
      CHECK_FALSE(s.trace.describe().empty());
    }
  }
}

TEST_CASE("increment cocycle") {
  for (std::uint64_t i = 0; i < 40; ++i) {
    const auto fc = random_fbt_case(case_seed(8, i));
    const auto& tree = fc.tree;
    const auto y = random_hull_element(fc.set, tree, 2, case_seed(9, i)).element;
    for (NodeId m = 0; m < tree.size(); ++m) {
      const auto t = tree.time(m);
      for (std::size_t s = 0; s <= t; ++s) {
        for (std::size_t u = s; u <= t; ++u) {
          const auto lhs = increment(y, tree, s, tree.ancestor_at(m, u)) * increment(y, tree, u, m);
          const auto rhs = increment(y, tree, s, m);
          if (y[tree.ancestor_at(m, u)] > 0 || u == s || u == t) {
            CHECK(lhs == rhs);
          } else {
            CHECK(lhs == 0);
            CHECK(rhs == 0);
          }
        }
      }
    }
  }
}

TEST_CASE("eventually constant sequences of supermartingales converge to supermartingales") {
  for (std::uint64_t i = 0; i < 30; ++i) {
    const auto fc = random_fbt_case(case_seed(13, i));
    const auto& tree = fc.tree;
    const auto limit = random_hull_element(fc.set, tree, 2, case_seed(14, i)).element;
    // Y^n = (1 - 1/n) Y from n = 1 on, frozen at Y after step 6.
    AdaptedProcess last;
    for (long n = 1; n <= 8; ++n) {
      const Rational factor = n >= 6 ? Rational(1) : Rational(n - 1, n);
      const NonIncreasingProcess b(tree, AdaptedProcess::constant(tree, factor));
      last = solid_multiply(limit, b, tree);
      CHECK(is_supermartingale(last, tree));
    }
    CHECK(last == limit);
    CHECK(is_supermartingale(last, tree));
  }
}

TEST_CASE("process sets record far-reaching and S1 status") {
  const auto bin = EventTree::uniform({2});
  const ProcessSet far(bin, {proc({1, 1, 1}), proc({1, 2, 0})});
  CHECK(far.far_reaching());
  CHECK(far.within_s1());
  const ProcessSet near(bin, {proc({1, 2, 0}), proc({1, 0, 2})});
  CHECK_FALSE(near.far_reaching());
  const ProcessSet loose(bin, {proc({2, 2, 2})});
  CHECK_FALSE(loose.within_s1());
  CHECK_THROWS_AS(ProcessSet(bin, {}), InputError);
  CHECK_THROWS_AS(ProcessSet(bin, {proc({1, 1})}), InputError);
}
