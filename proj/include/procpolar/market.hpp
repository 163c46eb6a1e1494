#pragma once

#include <optional>
#include <string>
#include <vector>

#include "procpolar/exact_lp.hpp"
#include "procpolar/process_sets.hpp"

namespace procpolar {

/// EMM polytope over one-step transition probabilities q(node); the root's
/// variable is pinned to 1. Node-indexed points double as measures.
struct EmmPolytope {
  ConstraintSystem system;
  /// Point with every q > 0, when one exists.
  std::optional<Values> interior;
};

/// Works on a raw tree/price pair so markets can be screened before building.
EmmPolytope emm_polytope(const EventTree& tree, const std::vector<Values>& prices);

/// d discounted asset prices on an event tree admitting an equivalent
/// martingale measure.
class Market {
 public:
  /// Throws InputError on shape or sign problems and when no equivalent
  /// martingale measure exists.
  Market(EventTree tree, std::vector<Values> prices);

  const EventTree& tree() const { return tree_; }
  const std::vector<Values>& prices() const { return prices_; }
  std::size_t assets() const { return prices_.size(); }
  /// S_i(ch) - S_i(parent(ch)).
  Rational price_step(std::size_t asset, NodeId child) const;
  /// The interior point found when the market was checked.
  const Values& reference_measure() const { return reference_measure_; }

 private:
  EventTree tree_;
  std::vector<Values> prices_;
  Values reference_measure_;
};

EmmPolytope emm_polytope(const Market& m);

/// Holdings per node (d entries); terminal nodes hold nothing.
struct Strategy {
  std::vector<Values> holdings;
  static Strategy zero(const Market& m);
};

/// Cumulative consumption: 0 at the root, nondecreasing along edges.
class ConsumptionProcess {
 public:
  ConsumptionProcess(const EventTree& tree, AdaptedProcess cumulative);
  static ConsumptionProcess none(const EventTree& tree);
  const AdaptedProcess& cumulative() const { return cumulative_; }

 private:
  AdaptedProcess cumulative_;
};

/// Consumption rate c per node with grid weights mu per time (sum 1).
class ConsumptionDensity {
 public:
  ConsumptionDensity(const EventTree& tree, AdaptedProcess density, Values mu);

  const AdaptedProcess& density() const { return density_; }
  const Values& mu() const { return mu_; }
  /// c(root) mu_0: spent at time 0, before any trading.
  Rational initial_cost(const EventTree& tree) const;
  /// sum over 1 <= u <= t of c mu_u along the path.
  ConsumptionProcess cumulative(const EventTree& tree) const;

 private:
  AdaptedProcess density_;
  Values mu_;
};

/// x + (H . S) - C, node-indexed; may go negative.
Values wealth(const Rational& x, const Strategy& h, const ConsumptionProcess& cons, const Market& m);
bool is_admissible(const Rational& x, const Strategy& h, const ConsumptionProcess& cons, const Market& m);

/// Variable layout of the wealth polytopes.
struct WealthPolytope {
  ConstraintSystem system;
  std::vector<std::size_t> wealth;                  // X(n)
  std::vector<std::vector<std::size_t>> holdings;   // h(n)_i, empty at terminals
  std::vector<std::optional<std::size_t>> consumption;  // C(n), consumption form only

  Strategy strategy(const Values& point) const;
  Values wealth_values(const Values& point) const;
  Values consumption_values(const Values& point) const;
};

/// Wealth X >= 0 of pure investment with X(root) <= x (no bound when x is
/// unset).
WealthPolytope pure_investment_polytope(const Market& m, const std::optional<Rational>& x);
/// Same with cumulative consumption C: C(root) = 0, C nondecreasing, and X
/// net of consumption.
WealthPolytope consumption_polytope(const Market& m, const std::optional<Rational>& x);

bool is_equivalent_measure(const Values& q, const EventTree& tree);

/// Q(path) / P(path). InputError when q is not in the EMM polytope.
AdaptedProcess density_process(const Values& q, const Market& m);

struct EnlargementVerdict {
  bool member = false;
  bool root_failed = false;
  std::optional<NodeId> failing_node;
  /// Wealth process against which y fails.
  Values witness;
  std::string describe() const;
};

/// y in the enlargement: y(root) <= 1 and y X a supermartingale for every
/// pure-investment wealth X with X(root) <= 1; one LP per node.
EnlargementVerdict y_enlargement_membership(const AdaptedProcess& y, const Market& m);

/// y in the polar of the consumption wealth set; same shape of check.
EnlargementVerdict consumption_polar_membership(const AdaptedProcess& y, const Market& m);

/// Lifted H-representation of the enlargement: variables y(n) then one
/// multiplier per non-root node.
ConstraintSystem enlargement_constraints(const Market& m);
/// Membership through the lifted form (a feasibility LP).
bool enlargement_membership_lifted(const AdaptedProcess& y, const Market& m);

struct BipolarWealthVerdict {
  bool member = false;
  std::optional<NodeId> failing_node;
  bool root_check = false;
  Values certificate;  // element of the enlargement
  std::string describe() const;
};

/// z in the bipolar of pure-investment wealth, by LPs over the enlargement.
BipolarWealthVerdict wealth_bipolar_membership(const AdaptedProcess& z, const Market& m);

/// z is itself a consumption wealth process with initial capital 1.
bool consumption_feasible(const AdaptedProcess& z, const Market& m);

struct Superhedge {
  Rational value;
  /// Node-indexed envelope, with the claim at the terminals.
  Values envelope;
  Strategy hedge;
  /// Nondecreasing, zero at the root: envelope = wealth(value, hedge) - residual.
  Values residual;
  /// Maximizing one-step probabilities, node-indexed (root 1).
  Values extremal_measure;
};

/// `claim` is node-indexed; only terminal entries are read.
Superhedge superhedge_value(const Values& claim, const Market& m);
Superhedge superhedge_value(const ConsumptionDensity& c, const Market& m);

struct BudgetVerdict {
  bool admissible = false;
  bool primal = false;
  bool dual = false;
  Rational required;  // initial cost plus superhedge value
  Strategy strategy;  // when admissible
  Values wealth;      // when admissible
  Values violating_measure;  // when not
};

/// Primal feasibility and dual superhedge bound, computed separately;
/// InternalError if they disagree.
BudgetVerdict budget_check(const ConsumptionDensity& c, const Rational& x, const Market& m);

/// Least x for which the primal side of budget_check is feasible, by direct
/// minimization.
Rational minimal_budget(const ConsumptionDensity& c, const Market& m);

/// A wealth process X net of consumption C, both node-indexed.
struct WealthSample {
  Values wealth;
  Values consumption;
};

struct StructureEntry {
  char part = 'a';
  std::size_t probe = 0;
  bool first = false;
  bool second = false;
  std::optional<bool> third;
  std::string note;
  bool agree() const { return first == second && (!third || *third == first); }
};

struct StructureReport {
  std::vector<StructureEntry> entries;
  bool all_agree() const;
};

/// (a) for y probes in the enlargement, y (G - C) is a supermartingale where
/// G = X + C is the gross investment wealth of each sample; (b) the
/// enlargement, the consumption polar and the lifted form agree on the y
/// probes; (c) the wealth bipolar agrees with consumption feasibility on the
/// z probes.
StructureReport verify_structure_theorem(const Market& m, const std::vector<AdaptedProcess>& y_probes,
                                         const std::vector<AdaptedProcess>& z_probes,
                                         const std::vector<WealthSample>& samples);

}  // namespace procpolar
