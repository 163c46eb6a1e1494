#pragma once

// Test-side LP oracles: certificate re-checks written from scratch and a
// textbook dual for problems of the form max c.x, rows <=/>=/=, each variable
// either >= 0 or free.

#include <cstdint>
#include <vector>

#include "procpolar/exact_lp.hpp"
#include "procpolar/random.hpp"

namespace lp_oracle {

using procpolar::ConstraintSystem;
using procpolar::LinearExpr;
using procpolar::LpOutcome;
using procpolar::LpProblem;
using procpolar::LpStatus;
using procpolar::Rational;
using procpolar::Relation;
using procpolar::Sense;
using procpolar::Values;
using procpolar::VariableBounds;

inline Rational dot(const LinearExpr& e, const Values& x) {
  Rational s = 0;
  for (const auto& t : e) s += t.coef * x.at(t.var);
  return s;
}

inline bool row_holds(Relation rel, const Rational& lhs, const Rational& rhs) {
  switch (rel) {
    case Relation::LessEqual:
      return lhs <= rhs;
    case Relation::GreaterEqual:
      return lhs >= rhs;
    case Relation::Equal:
      return lhs == rhs;
  }
  return false;
}

inline bool feasible(const ConstraintSystem& s, const Values& x) {
  if (x.size() != s.num_vars()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto& b = s.bounds()[j];
    if (b.lower && x[j] < *b.lower) return false;
    if (b.upper && x[j] > *b.upper) return false;
  }
  for (const auto& row : s.constraints()) {
    if (!row_holds(row.relation, dot(row.terms, x), row.rhs)) return false;
  }
  return true;
}

/// Primal-side checks only: point feasibility and value for Optimal, a
/// recession direction that improves the objective for Unbounded.
inline bool primal_certificate_ok(const LpProblem& p, const LpOutcome& o) {
  const double sign = p.sense == Sense::Maximize ? 1 : -1;
  if (o.status == LpStatus::Optimal) return feasible(p.system, o.point) && dot(p.objective, o.point) == o.value;
  if (o.status == LpStatus::Unbounded) {
    if (!feasible(p.system, o.point) || o.ray.size() != p.system.num_vars()) return false;
    for (std::size_t j = 0; j < o.ray.size(); ++j) {
      const auto& b = p.system.bounds()[j];
      if ((b.lower && o.ray[j] < 0) || (b.upper && o.ray[j] > 0)) return false;
    }
    for (const auto& row : p.system.constraints()) {
      if (!row_holds(row.relation, dot(row.terms, o.ray), Rational(0))) return false;
    }
    return dot(p.objective, o.ray) * sign > 0;
  }
  return true;
}

struct RandomLp {
  LpProblem primal;
  LpProblem dual;
};

/// Random max problem with a known feasible point, small integer data, and
/// its dual written out by hand: y >= 0 on <= rows, y <= 0 on >= rows, free
/// on = rows; A^T y >= c on nonnegative variables, = c on free ones;
/// minimize b.y.
inline RandomLp random_lp(std::uint64_t seed) {
  procpolar::Rng rng(seed);
  const auto n = static_cast<std::size_t>(rng.uniform(1, 4));
  const auto m = static_cast<std::size_t>(rng.uniform(1, 4));
  std::vector<bool> free_var(n);
  Values x0(n);
  for (std::size_t j = 0; j < n; ++j) {
    free_var[j] = rng.chance(1, 4);
    x0[j] = free_var[j] ? rng.uniform(-3, 3) : rng.uniform(0, 3);
  }
  struct Row {
    Values a;
    Relation rel;
    Rational b;
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < m; ++i) {
    Row r{Values(n), Relation::LessEqual, 0};
    Rational ax = 0;
    for (std::size_t j = 0; j < n; ++j) {
      r.a[j] = rng.uniform(-3, 3);
      ax += r.a[j] * x0[j];
    }
    const auto kind = rng.uniform(0, 2);
    r.rel = kind == 0 ? Relation::LessEqual : kind == 1 ? Relation::GreaterEqual : Relation::Equal;
    const Rational slack = rng.uniform(0, 2);
    r.b = r.rel == Relation::LessEqual ? ax + slack : r.rel == Relation::GreaterEqual ? ax - slack : ax;
    rows.push_back(std::move(r));
  }
  // A box on most variables keeps most problems bounded.
  for (std::size_t j = 0; j < n; ++j) {
    if (rng.chance(1, 5)) continue;
    Values a(n);
    a[j] = 1;
    rows.push_back({a, Relation::LessEqual, Rational(5)});
    if (free_var[j]) rows.push_back({a, Relation::GreaterEqual, Rational(-5)});
  }
  Values c(n);
  for (auto& v : c) v = rng.uniform(-3, 3);

  RandomLp out;
  out.primal.system = ConstraintSystem(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (free_var[j]) out.primal.system.set_bounds(j, VariableBounds::free());
  }
  for (const auto& r : rows) {
    LinearExpr e;
    for (std::size_t j = 0; j < n; ++j) {
      if (r.a[j] != 0) e.push_back({j, r.a[j]});
    }
    out.primal.system.add(std::move(e), r.rel, r.b);
  }
  out.primal.sense = Sense::Maximize;
  for (std::size_t j = 0; j < n; ++j) {
    if (c[j] != 0) out.primal.objective.push_back({j, c[j]});
  }

  const std::size_t k = rows.size();
  out.dual.system = ConstraintSystem(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (rows[i].rel == Relation::GreaterEqual) out.dual.system.set_bounds(i, {std::nullopt, Rational(0)});
    if (rows[i].rel == Relation::Equal) out.dual.system.set_bounds(i, VariableBounds::free());
  }
  for (std::size_t j = 0; j < n; ++j) {
    LinearExpr e;
    for (std::size_t i = 0; i < k; ++i) {
      if (rows[i].a[j] != 0) e.push_back({i, rows[i].a[j]});
    }
    out.dual.system.add(std::move(e), free_var[j] ? Relation::Equal : Relation::GreaterEqual, c[j]);
  }
  out.dual.sense = Sense::Minimize;
  for (std::size_t i = 0; i < k; ++i) {
    if (rows[i].b != 0) out.dual.objective.push_back({i, rows[i].b});
  }
  return out;
}

}  // namespace lp_oracle
