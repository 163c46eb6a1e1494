#pragma once

#include <optional>
#include <vector>

#include "procpolar/exact_lp.hpp"
#include "procpolar/filtered_space.hpp"

namespace procpolar {

/// Finitely generated subset of L0_+ on a finite space, read as the
/// G-convex, solid and closed hull of its generators (G = `partition`).
class RvSet {
 public:
  RvSet(FiniteSpace space, Partition partition, std::vector<RandomVariable> generators);

  const FiniteSpace& space() const { return space_; }
  const Partition& partition() const { return partition_; }
  const std::vector<RandomVariable>& generators() const { return generators_; }
  std::size_t points() const { return space_.size(); }

 private:
  FiniteSpace space_;
  Partition partition_;
  std::vector<RandomVariable> generators_;
};

/// h f + (1 - h) g for a block-constant weight h with values in [0, 1].
RandomVariable g_convex_combine(const RandomVariable& f, const RandomVariable& g, const Values& h,
                                const Partition& partition);

/// Candidate g >= 0 with sum_{w in B} P(w) f(w) g(w) <= P(B) for every
/// generator f and block B. Variables are the points of the space.
ConstraintSystem conditional_polar_constraints(const RvSet& c);

/// Rows of conditional_polar_constraints that involve `block`, over the block's
/// points only (variable k = block(b)[k]).
ConstraintSystem block_polar_constraints(const RvSet& c, std::size_t block);

bool conditional_polar_membership(const RandomVariable& g, const RvSet& c);

struct HullVerdict {
  bool member = false;
  /// Per block, convex weights over the generators whose mixture dominates h
  /// on that block. Filled when member.
  std::vector<Values> weights;
  std::optional<std::size_t> failing_block;
};

/// Membership in the G-convex, solid, closed hull of the generators: one
/// feasibility LP per block.
HullVerdict hull_membership(const RandomVariable& h, const RvSet& c);

struct RvBipolarVerdict {
  bool member = false;
  std::optional<std::size_t> violating_block;
  /// Polar element (or improving ray, when `unbounded`) over the violating
  /// block's points that separates h.
  Values witness;
  bool unbounded = false;
};

/// Membership in the conditional bipolar [C|G]°°: for each block, the maximum
/// of E[h g 1_B] over the conditional polar must not exceed P(B).
RvBipolarVerdict conditional_bipolar_membership(const RandomVariable& h, const RvSet& c);

/// l in B_+(G): nonnegative, block-constant and E[l] <= 1.
bool in_g_unit_ball(const Values& l, const FiniteSpace& space, const Partition& partition);

/// Smallest r with f <= r * (mixture of generators) on the block; nullopt when
/// no multiple of the generators dominates f there.
std::optional<Rational> block_gauge(const RandomVariable& f, const RvSet& c, std::size_t block);

struct SecondPolarDecomposition {
  RandomVariable h;  // in the hull
  RandomVariable k;  // in B_+(G)
};

/// Writes f l = h k with h in the hull and k in B_+(G), for f in the bipolar
/// and l in B_+(G). PreconditionError on invalid inputs, InternalError when no
/// admissible k exists (which would contradict the conditional bipolar theorem).
SecondPolarDecomposition secondpolar_decompose(const RandomVariable& f, const RandomVariable& l, const RvSet& c);

/// h in H^f: h in the hull, {f = 0} within {h = 0}, and f E[h|G] = h E[f|G].
bool in_h_f(const RandomVariable& h, const RandomVariable& f, const RvSet& c);

/// Pointwise maximum of members of H^f; the result is checked to lie in H^f
/// again. InputError when an input is not in H^f.
RandomVariable pairwise_max_closure(const std::vector<RandomVariable>& hs, const RandomVariable& f, const RvSet& c);

}  // namespace procpolar
