// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "fixtures.hpp"
#include "lp_oracle.hpp"
#include "procpolar/errors.hpp"
#include "procpolar/market.hpp"
#include "procpolar/suites.hpp"

using namespace procpolar;
using fixtures::r;

namespace {

struct Tally {
  std::size_t cases = 0;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void take(const CaseResult& c) {
    ++cases;
    checks += c.checks;
    if (!c.pass) {
      failures += c.failures ? c.failures : 1;
      if (first_failure.empty()) first_failure = "seed " + std::to_string(c.seed) + ": " + c.detail;
    }
  }
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      if (first_failure.empty()) first_failure = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failed = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failed;
}

std::string summary(const Tally& t, double secs) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "cases=%zu checks=%zu failures=%zu time=%.2fs", t.cases, t.checks, t.failures, secs);
  std::string s = buf;
  if (!t.first_failure.empty()) s += "  first: " + t.first_failure;
  return s;
}

void suite(int id, std::size_t count, std::uint64_t seed, double limit, std::size_t min_checks_per_case,
           const std::function<CaseResult(std::uint64_t)>& run) {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  for (std::size_t i = 0; i < count; ++i) {
    const auto c = run(case_seed(seed, i));
    t.take(c);
    if (c.checks < min_checks_per_case) t.expect(false, "seed " + std::to_string(c.seed) + " ran too few checks");
  }
  const double secs = seconds_since(t0);
  report(id, t.failures == 0 && t.cases == count && secs < limit, summary(t, secs));
}

void fixtures_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  try {
    const auto m1 = fixtures::m1();
    t.expect(m1.reference_measure() == Values{r(1), r(1, 3), r(2, 3)}, "M1 measure");
    const auto emm = emm_polytope(m1);
    for (NodeId n : {NodeId(1), NodeId(2)}) {
      const LinearExpr e{{n, r(1)}};
      const auto hi = solve({emm.system, Sense::Maximize, e});
      const auto lo = solve({emm.system, Sense::Minimize, e});
      t.expect(hi.value == lo.value, "M1 measure not unique");
    }
    t.expect(density_process(m1.reference_measure(), m1).values() == Values{r(1), r(2, 3), r(4, 3)}, "M1 density");
    const auto sh1 = superhedge_value(Values{r(0), r(3), r(0)}, m1);
    t.expect(sh1.value == 1, "M1 claim value");
    t.expect(sh1.residual == Values(3, r(0)), "M1 residual");
    for (const auto& claim : {Values{r(0), r(5), r(1)}, Values{r(0), r(0), r(7, 2)}}) {
      t.expect(superhedge_value(claim, m1).residual == Values(3, r(0)), "M1 residual on another claim");
    }

    const auto m2 = fixtures::m2();
    const auto sh2 = superhedge_value(Values{r(0), r(3), r(0), r(0)}, m2);
    t.expect(sh2.value == 1, "M2 superhedge value");
    t.expect(sh2.extremal_measure == Values{r(1), r(1, 3), r(0), r(2, 3)}, "M2 extremal measure");
    const ConsumptionDensity call(m2.tree(), AdaptedProcess(Values{r(0), r(3), r(0), r(0)}), Values{r(0), r(1)});
    for (const auto& [x, expected] : std::vector<std::pair<Rational, bool>>{
             {r(1), true}, {r(2), true}, {r(99, 100), false}, {r(0), false}, {r(1001, 1000), true}}) {
      const auto v = budget_check(call, x, m2);
      t.expect(v.admissible == expected, "M2 budget at " + to_string(x));
      t.expect(v.primal == v.dual, "M2 budget primal/dual at " + to_string(x));
    }
    t.expect(minimal_budget(call, m2) == 1, "M2 minimal budget");
  } catch (const std::exception& e) {
    t.expect(false, e.what());
  }
  const double secs = seconds_since(t0);
  report(5, t.failures == 0 && secs < 1.0, summary(t, secs));
}

void lp_criterion(std::uint64_t verified_before) {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  std::size_t equal = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto lp = lp_oracle::random_lp(case_seed(7007, i));
    try {
      const auto p = solve(lp.primal);
      const auto d = solve(lp.dual);
      t.expect(lp_oracle::primal_certificate_ok(lp.primal, p), "primal certificate, case " + std::to_string(i));
      t.expect(lp_oracle::primal_certificate_ok(lp.dual, d), "dual certificate, case " + std::to_string(i));
      t.expect(p.status != LpStatus::Infeasible, "primal built feasible, case " + std::to_string(i));
      if (p.status == LpStatus::Optimal) {
        t.expect(d.status == LpStatus::Optimal && d.value == p.value, "value equality, case " + std::to_string(i));
        ++equal;
      } else {
        t.expect(d.status == LpStatus::Infeasible, "unbounded primal with feasible dual, case " + std::to_string(i));
      }
    } catch (const std::exception& e) {
      t.expect(false, e.what());
    }
    ++t.cases;
  }
  const auto verified = certificates_verified();
  t.expect(equal >= 100, "fewer than 100 bounded problems");
  t.expect(verified > verified_before, "no certificates verified");
  const double secs = seconds_since(t0);
  report(7, t.failures == 0,
         summary(t, secs) + " equalities=" + std::to_string(equal) +
             " certificates_verified=" + std::to_string(verified));
}

}  // namespace

int main() {
  const auto start = certificates_verified();
  suite(1, 200, 42, 60.0, 10, cbt_case);
  suite(2, 100, 7, 120.0, 10, fbt_case);
  suite(3, 20, 3, 120.0, 60, [](std::uint64_t s) { return closure_case(s, 60); });
  suite(4, 200, 4, 600.0, 1, lemma_case);
  fixtures_criterion();
  suite(6, 100, 6, 600.0, 1, market_case);
  // Every LP above went through solve(), which re-checks its certificate and
  // raises on failure; any such failure already shows up as a suite failure.
  lp_criterion(start);
  std::printf("acceptance: %s\n", failed ? "FAILED" : "all criteria passed");
  return failed ? 1 : 0;
}
