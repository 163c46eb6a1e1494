#include "procpolar/rv_bipolar.hpp"

#include <algorithm>

#include "procpolar/errors.hpp"

namespace procpolar {

namespace {

void require_size(const RandomVariable& v, const RvSet& c, const char* what) {
  if (v.size() != c.points()) throw InputError(std::string(what) + " does not match the probability space");
}

}  // namespace

RvSet::RvSet(FiniteSpace space, Partition partition, std::vector<RandomVariable> generators)
    : space_(std::move(space)), partition_(std::move(partition)), generators_(std::move(generators)) {
  if (partition_.ground_size() != space_.size()) throw InputError("partition does not cover the probability space");
  if (generators_.empty()) throw InputError("random-variable set needs at least one generator");
  for (const auto& f : generators_) {
    if (f.size() != space_.size()) throw InputError("generator does not match the probability space");
  }
}

RandomVariable g_convex_combine(const RandomVariable& f, const RandomVariable& g, const Values& h,
                                const Partition& partition) {
  if (f.size() != g.size() || h.size() != f.size() || partition.ground_size() != f.size()) {
    throw InputError("g_convex_combine: size mismatch");
  }
  if (!is_block_constant(h, partition)) throw InputError("mixing weight is not measurable w.r.t. the partition");
  Values out(f.size());
  for (std::size_t w = 0; w < f.size(); ++w) {
    if (h[w] < 0 || h[w] > 1) throw InputError("mixing weight " + to_string(h[w]) + " outside [0,1]");
    out[w] = h[w] * f[w] + (1 - h[w]) * g[w];
  }
  return RandomVariable(std::move(out));
}

ConstraintSystem block_polar_constraints(const RvSet& c, std::size_t block) {
  const auto& points = c.partition().block(block);
  const Rational mass = block_probability(c.space(), c.partition(), block);
  ConstraintSystem sys(points.size());
  for (std::size_t i = 0; i < c.generators().size(); ++i) {
    const auto& f = c.generators()[i];
    LinearExpr terms;
    for (std::size_t k = 0; k < points.size(); ++k) {
      const Rational coef = c.space().prob(points[k]) * f[points[k]];
      if (coef != 0) terms.push_back({k, coef});
    }
    sys.add(std::move(terms), Relation::LessEqual, mass,
            "generator " + std::to_string(i) + " block " + std::to_string(block));
  }
  return sys;
}

ConstraintSystem conditional_polar_constraints(const RvSet& c) {
  ConstraintSystem sys(c.points());
  for (std::size_t b = 0; b < c.partition().block_count(); ++b) {
    const auto& points = c.partition().block(b);
    const auto local = block_polar_constraints(c, b);
    for (const auto& row : local.constraints()) {
      LinearExpr terms;
      for (const auto& t : row.terms) terms.push_back({points[t.var], t.coef});
      sys.add(std::move(terms), row.relation, row.rhs, row.label);
    }
  }
  return sys;
}

bool conditional_polar_membership(const RandomVariable& g, const RvSet& c) {
  require_size(g, c, "candidate");
  return conditional_polar_constraints(c).satisfied_by(g.values());
}

HullVerdict hull_membership(const RandomVariable& h, const RvSet& c) {
  require_size(h, c, "candidate");
  HullVerdict verdict;
  const std::size_t m = c.generators().size();
  for (std::size_t b = 0; b < c.partition().block_count(); ++b) {
    LpProblem p{ConstraintSystem(m), Sense::Maximize, {}};
    LinearExpr total;
    for (std::size_t i = 0; i < m; ++i) total.push_back({i, Rational(1)});
    p.system.add(std::move(total), Relation::Equal, Rational(1), "convex weights");
    for (std::size_t w : c.partition().block(b)) {
      LinearExpr terms;
      for (std::size_t i = 0; i < m; ++i) {
        if (c.generators()[i][w] != 0) terms.push_back({i, c.generators()[i][w]});
      }
      p.system.add(std::move(terms), Relation::GreaterEqual, h[w], "dominate point " + std::to_string(w));
    }
    const auto out = solve(p);
    if (out.status != LpStatus::Optimal) {
      verdict.member = false;
      verdict.failing_block = b;
      verdict.weights.clear();
      return verdict;
    }
    verdict.weights.push_back(out.point);
  }
  verdict.member = true;
  return verdict;
}

RvBipolarVerdict conditional_bipolar_membership(const RandomVariable& h, const RvSet& c) {
  require_size(h, c, "candidate");
  RvBipolarVerdict verdict;
  for (std::size_t b = 0; b < c.partition().block_count(); ++b) {
    const auto& points = c.partition().block(b);
    LpProblem p{block_polar_constraints(c, b), Sense::Maximize, {}};
    for (std::size_t k = 0; k < points.size(); ++k) {
      const Rational coef = c.space().prob(points[k]) * h[points[k]];
      if (coef != 0) p.objective.push_back({k, coef});
    }
    const auto out = solve(p);
    const Rational mass = block_probability(c.space(), c.partition(), b);
    if (out.status == LpStatus::Unbounded) {
      verdict.violating_block = b;
      verdict.witness = out.ray;
      verdict.unbounded = true;
      return verdict;
    }
    if (out.status != LpStatus::Optimal) throw InternalError("conditional polar is empty, but it always contains 0");
    if (out.value > mass) {
      verdict.violating_block = b;
      verdict.witness = out.point;
      return verdict;
    }
  }
  verdict.member = true;
  return verdict;
}

bool in_g_unit_ball(const Values& l, const FiniteSpace& space, const Partition& partition) {
  if (l.size() != space.size() || !is_block_constant(l, partition)) return false;
  for (const auto& v : l) {
    if (v < 0) return false;
  }
  return expectation(space, l) <= 1;
}

std::optional<Rational> block_gauge(const RandomVariable& f, const RvSet& c, std::size_t block) {
  const std::size_t m = c.generators().size();
  LpProblem p{ConstraintSystem(m), Sense::Minimize, {}};
  for (std::size_t i = 0; i < m; ++i) p.objective.push_back({i, Rational(1)});
  for (std::size_t w : c.partition().block(block)) {
    LinearExpr terms;
    for (std::size_t i = 0; i < m; ++i) {
      if (c.generators()[i][w] != 0) terms.push_back({i, c.generators()[i][w]});
    }
    p.system.add(std::move(terms), Relation::GreaterEqual, f[w]);
  }
  const auto out = solve(p);
  if (out.status != LpStatus::Optimal) return std::nullopt;
  return out.value;
}

SecondPolarDecomposition secondpolar_decompose(const RandomVariable& f, const RandomVariable& l, const RvSet& c) {
  require_size(f, c, "f");
  require_size(l, c, "l");
  if (!in_g_unit_ball(l.values(), c.space(), c.partition())) {
    throw PreconditionError("l is not in the unit ball of nonnegative G-measurable variables");
  }
  if (!conditional_bipolar_membership(f, c).member) {
    throw PreconditionError("f is not in the conditional bipolar");
  }
  const std::size_t n = c.points();
  Values k(n);
  for (std::size_t b = 0; b < c.partition().block_count(); ++b) {
    const auto r = block_gauge(f, c, b);
    if (!r) throw InternalError("no multiple of the generators dominates f on block " + std::to_string(b));
    const Rational scale = std::max(Rational(1), *r);
    for (std::size_t w : c.partition().block(b)) k[w] = l[w] * scale;
  }
  if (expectation(c.space(), k) > 1) {
    throw InternalError("decomposition f l = h k needs E[k] = " + to_string(expectation(c.space(), k)) + " > 1");
  }
  Values h(n);
  for (std::size_t w = 0; w < n; ++w) h[w] = ratio_or_zero(f[w] * l[w], k[w]);
  SecondPolarDecomposition out{RandomVariable(std::move(h)), RandomVariable(std::move(k))};
  for (std::size_t w = 0; w < n; ++w) {
    if (f[w] * l[w] != out.h[w] * out.k[w]) throw InternalError("decomposition identity f l = h k fails");
  }
  if (!hull_membership(out.h, c).member) throw InternalError("decomposition produced h outside the hull");
  return out;
}

bool in_h_f(const RandomVariable& h, const RandomVariable& f, const RvSet& c) {
  require_size(h, c, "h");
  require_size(f, c, "f");
  for (std::size_t w = 0; w < c.points(); ++w) {
    if (f[w] == 0 && h[w] != 0) return false;
  }
  const Values eh = cond_exp_partition(c.space(), h.values(), c.partition());
  const Values ef = cond_exp_partition(c.space(), f.values(), c.partition());
  for (std::size_t w = 0; w < c.points(); ++w) {
    if (f[w] * eh[w] != h[w] * ef[w]) return false;
  }
  return hull_membership(h, c).member;
}

RandomVariable pairwise_max_closure(const std::vector<RandomVariable>& hs, const RandomVariable& f, const RvSet& c) {
  if (hs.empty()) throw InputError("pairwise maximum of an empty family");
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!in_h_f(hs[i], f, c)) throw InputError("input " + std::to_string(i) + " is not in H^f");
  }
  Values out = hs.front().values();
  for (const auto& h : hs) {
    for (std::size_t w = 0; w < out.size(); ++w) out[w] = std::max(out[w], h[w]);
  }
  RandomVariable result(std::move(out));
  if (!in_h_f(result, f, c)) throw InternalError("pairwise maximum left H^f");
  return result;
}

}  // namespace procpolar
