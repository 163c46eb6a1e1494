#include "procpolar/market.hpp"

#include "procpolar/errors.hpp"

namespace procpolar {

namespace {

void require_size(const Values& v, const EventTree& tree, const char* what) {
  if (v.size() != tree.size()) throw InputError(std::string(what) + " does not match the tree");
}

std::vector<NodeId> internal_nodes(const EventTree& tree) {
  std::vector<NodeId> out;
  for (std::size_t t = 0; t < tree.horizon(); ++t) {
    for (NodeId n : tree.nodes_at(t)) out.push_back(n);
  }
  return out;
}

void pin(ConstraintSystem& sys, std::size_t var, const Rational& value) {
  sys.set_bounds(var, {value, value});
}

WealthPolytope wealth_polytope(const Market& m, const std::optional<Rational>& x, bool with_consumption) {
  const auto& tree = m.tree();
  WealthPolytope wp;
  auto& sys = wp.system;
  for (NodeId n = 0; n < tree.size(); ++n) wp.wealth.push_back(sys.add_variable());
  wp.holdings.resize(tree.size());
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (tree.is_terminal(n)) continue;
    for (std::size_t i = 0; i < m.assets(); ++i) wp.holdings[n].push_back(sys.add_variable(VariableBounds::free()));
  }
  wp.consumption.resize(tree.size());
  if (with_consumption) {
    for (NodeId n = 0; n < tree.size(); ++n) wp.consumption[n] = sys.add_variable();
    pin(sys, *wp.consumption[tree.root()], Rational(0));
  }
  if (x) sys.add({{wp.wealth[tree.root()], Rational(1)}}, Relation::LessEqual, *x, "initial capital");
  for (NodeId ch = 0; ch < tree.size(); ++ch) {
    const auto n = tree.parent(ch);
    if (!n) continue;
    LinearExpr row{{wp.wealth[ch], Rational(1)}, {wp.wealth[*n], Rational(-1)}};
    for (std::size_t i = 0; i < m.assets(); ++i) {
      const Rational step = m.price_step(i, ch);
      if (step != 0) row.push_back({wp.holdings[*n][i], -step});
    }
    const std::string edge = std::to_string(*n) + "->" + std::to_string(ch);
    if (with_consumption) {
      row.push_back({*wp.consumption[ch], Rational(1)});
      row.push_back({*wp.consumption[*n], Rational(-1)});
      sys.add({{*wp.consumption[ch], Rational(1)}, {*wp.consumption[*n], Rational(-1)}}, Relation::GreaterEqual,
              Rational(0), "consumption " + edge);
    }
    sys.add(std::move(row), Relation::Equal, Rational(0), "wealth " + edge);
  }
  return wp;
}

// max over `sys` of sum_ch p v(ch) X(ch) - v(n) X(n) <= 0, with X at `vars`.
std::optional<Values> node_violation(const ConstraintSystem& sys, const std::vector<std::size_t>& vars,
                                     const Values& v, NodeId n, const EventTree& tree) {
  LinearExpr objective;
  for (NodeId ch : tree.children(n)) {
    const Rational coef = tree.one_step_prob(ch) * v[ch];
    if (coef != 0) objective.push_back({vars[ch], coef});
  }
  if (objective.empty()) return std::nullopt;
  if (v[n] != 0) objective.push_back({vars[n], -v[n]});
  const auto out = solve({sys, Sense::Maximize, std::move(objective)});
  if (out.status == LpStatus::Optimal && out.value <= 0) return std::nullopt;
  return out.status == LpStatus::Unbounded ? out.ray : out.point;
}

EnlargementVerdict polar_of_wealth(const AdaptedProcess& y, const Market& m, const WealthPolytope& wp) {
  const auto& tree = m.tree();
  if (y.size() != tree.size()) throw InputError("process does not match the tree");
  EnlargementVerdict verdict;
  if (y[tree.root()] > 1) {
    verdict.root_failed = true;
    verdict.witness = Values(tree.size(), Rational(1));
    return verdict;
  }
  for (NodeId n : internal_nodes(tree)) {
    if (auto bad = node_violation(wp.system, wp.wealth, y.values(), n, tree)) {
      verdict.failing_node = n;
      verdict.witness = wp.wealth_values(*bad);
      return verdict;
    }
  }
  verdict.member = true;
  return verdict;
}

std::size_t lambda_var(const EventTree& tree, NodeId ch) { return tree.size() + ch; }

}  // namespace

EmmPolytope emm_polytope(const EventTree& tree, const std::vector<Values>& prices) {
  EmmPolytope out;
  auto& sys = out.system;
  for (NodeId n = 0; n < tree.size(); ++n) sys.add_variable();
  pin(sys, tree.root(), Rational(1));
  std::vector<std::size_t> strict;
  for (NodeId n : internal_nodes(tree)) {
    LinearExpr total;
    for (NodeId ch : tree.children(n)) {
      total.push_back({ch, Rational(1)});
      strict.push_back(ch);
    }
    sys.add(std::move(total), Relation::Equal, Rational(1), "q sums to one at node " + std::to_string(n));
    for (std::size_t i = 0; i < prices.size(); ++i) {
      LinearExpr mart;
      for (NodeId ch : tree.children(n)) {
        if (prices[i][ch] != 0) mart.push_back({ch, prices[i][ch]});
      }
      sys.add(std::move(mart), Relation::Equal, prices[i][n],
              "asset " + std::to_string(i) + " martingale at node " + std::to_string(n));
    }
  }
  out.interior = feasible_interior_point(sys, strict);
  return out;
}

Market::Market(EventTree tree, std::vector<Values> prices) : tree_(std::move(tree)), prices_(std::move(prices)) {
  if (prices_.empty()) throw InputError("market needs at least one asset");
  for (const auto& s : prices_) {
    require_size(s, tree_, "price process");
    for (const auto& v : s) {
      if (v < 0) throw InputError("negative price " + to_string(v));
    }
  }
  auto emm = emm_polytope(tree_, prices_);
  if (!emm.interior) throw InputError("no equivalent martingale measure: the market admits arbitrage");
  reference_measure_ = std::move(*emm.interior);
}

Rational Market::price_step(std::size_t asset, NodeId child) const {
  const auto n = tree_.parent(child);
  if (!n) throw InputError("the root has no incoming edge");
  return prices_.at(asset)[child] - prices_.at(asset)[*n];
}

EmmPolytope emm_polytope(const Market& m) { return emm_polytope(m.tree(), m.prices()); }

Strategy Strategy::zero(const Market& m) {
  Strategy s;
  s.holdings.resize(m.tree().size());
  for (NodeId n = 0; n < m.tree().size(); ++n) {
    if (!m.tree().is_terminal(n)) s.holdings[n] = Values(m.assets(), Rational(0));
  }
  return s;
}

ConsumptionProcess::ConsumptionProcess(const EventTree& tree, AdaptedProcess cumulative)
    : cumulative_(std::move(cumulative)) {
  require_size(cumulative_.values(), tree, "consumption");
  if (cumulative_[tree.root()] != 0) throw InputError("consumption must start at 0");
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (const auto p = tree.parent(n); p && cumulative_[n] < cumulative_[*p]) {
      throw InputError("consumption decreases into node " + std::to_string(n));
    }
  }
}

ConsumptionProcess ConsumptionProcess::none(const EventTree& tree) {
  return ConsumptionProcess(tree, AdaptedProcess::constant(tree, Rational(0)));
}

ConsumptionDensity::ConsumptionDensity(const EventTree& tree, AdaptedProcess density, Values mu)
    : density_(std::move(density)), mu_(std::move(mu)) {
  require_size(density_.values(), tree, "consumption density");
  if (mu_.size() != tree.horizon() + 1) throw InputError("mu needs one weight per time 0..T");
  Rational total = 0;
  for (const auto& w : mu_) {
    if (w < 0) throw InputError("negative mu weight");
    total += w;
  }
  if (total != 1) throw InputError("mu weights sum to " + to_string(total) + ", not 1");
}

Rational ConsumptionDensity::initial_cost(const EventTree& tree) const { return density_[tree.root()] * mu_[0]; }

ConsumptionProcess ConsumptionDensity::cumulative(const EventTree& tree) const {
  Values c(tree.size(), Rational(0));
  for (std::size_t t = 1; t <= tree.horizon(); ++t) {
    for (NodeId n : tree.nodes_at(t)) c[n] = c[*tree.parent(n)] + density_[n] * mu_[t];
  }
  return ConsumptionProcess(tree, AdaptedProcess(std::move(c)));
}

Values wealth(const Rational& x, const Strategy& h, const ConsumptionProcess& cons, const Market& m) {
  const auto& tree = m.tree();
  if (h.holdings.size() != tree.size()) throw InputError("strategy does not match the tree");
  const auto& c = cons.cumulative();
  Values out(tree.size());
  out[tree.root()] = x - c[tree.root()];
  for (std::size_t t = 1; t <= tree.horizon(); ++t) {
    for (NodeId ch : tree.nodes_at(t)) {
      const NodeId n = *tree.parent(ch);
      if (h.holdings[n].size() != m.assets()) throw InputError("holdings need one entry per asset");
      Rational v = out[n] - (c[ch] - c[n]);
      for (std::size_t i = 0; i < m.assets(); ++i) v += h.holdings[n][i] * m.price_step(i, ch);
      out[ch] = v;
    }
  }
  return out;
}

bool is_admissible(const Rational& x, const Strategy& h, const ConsumptionProcess& cons, const Market& m) {
  for (const auto& v : wealth(x, h, cons, m)) {
    if (v < 0) return false;
  }
  return true;
}

Strategy WealthPolytope::strategy(const Values& point) const {
  Strategy s;
  for (const auto& vars : holdings) {
    Values h;
    for (auto v : vars) h.push_back(point[v]);
    s.holdings.push_back(std::move(h));
  }
  return s;
}

Values WealthPolytope::wealth_values(const Values& point) const {
  Values out;
  for (auto v : wealth) out.push_back(point[v]);
  return out;
}

Values WealthPolytope::consumption_values(const Values& point) const {
  Values out;
  for (const auto& v : consumption) out.push_back(v ? point[*v] : Rational(0));
  return out;
}

WealthPolytope pure_investment_polytope(const Market& m, const std::optional<Rational>& x) {
  return wealth_polytope(m, x, false);
}

WealthPolytope consumption_polytope(const Market& m, const std::optional<Rational>& x) {
  return wealth_polytope(m, x, true);
}

bool is_equivalent_measure(const Values& q, const EventTree& tree) {
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (n != tree.root() && q.at(n) <= 0) return false;
  }
  return true;
}

AdaptedProcess density_process(const Values& q, const Market& m) {
  const auto& tree = m.tree();
  require_size(q, tree, "measure");
  if (!emm_polytope(m).system.satisfied_by(q)) throw InputError("q is not a martingale measure of the market");
  Values y(tree.size());
  y[tree.root()] = 1;
  for (std::size_t t = 1; t <= tree.horizon(); ++t) {
    for (NodeId ch : tree.nodes_at(t)) y[ch] = y[*tree.parent(ch)] * q[ch] / tree.one_step_prob(ch);
  }
  AdaptedProcess out(std::move(y));
  if (!is_martingale(out, tree)) throw InternalError("density process is not a martingale");
  return out;
}

std::string EnlargementVerdict::describe() const {
  if (member) return "in";
  if (root_failed) return "starts above 1";
  return "node " + std::to_string(*failing_node) + " against wealth " + to_string(witness);
}

EnlargementVerdict y_enlargement_membership(const AdaptedProcess& y, const Market& m) {
  return polar_of_wealth(y, m, pure_investment_polytope(m, Rational(1)));
}

EnlargementVerdict consumption_polar_membership(const AdaptedProcess& y, const Market& m) {
  return polar_of_wealth(y, m, consumption_polytope(m, Rational(1)));
}

// y in the enlargement iff y(root) <= 1 and, at each node, the one-step
// condition against every local position (a, h) with a + h dS >= 0 holds.
// Farkas on that cone gives multipliers lambda(ch) >= 0 with
// sum (p y(ch) + lambda(ch)) <= y(n) and sum (p y(ch) + lambda(ch)) dS_i = 0.
ConstraintSystem enlargement_constraints(const Market& m) {
  const auto& tree = m.tree();
  ConstraintSystem sys(2 * tree.size());
  pin(sys, lambda_var(tree, tree.root()), Rational(0));
  sys.add({{tree.root(), Rational(1)}}, Relation::LessEqual, Rational(1), "y starts at most 1");
  for (NodeId n : internal_nodes(tree)) {
    LinearExpr mass{{n, Rational(-1)}};
    for (NodeId ch : tree.children(n)) {
      mass.push_back({ch, tree.one_step_prob(ch)});
      mass.push_back({lambda_var(tree, ch), Rational(1)});
    }
    sys.add(std::move(mass), Relation::LessEqual, Rational(0), "mass at node " + std::to_string(n));
    for (std::size_t i = 0; i < m.assets(); ++i) {
      LinearExpr mart;
      for (NodeId ch : tree.children(n)) {
        const Rational step = m.price_step(i, ch);
        if (step == 0) continue;
        mart.push_back({ch, tree.one_step_prob(ch) * step});
        mart.push_back({lambda_var(tree, ch), step});
      }
      if (mart.empty()) continue;
      sys.add(std::move(mart), Relation::Equal, Rational(0),
              "asset " + std::to_string(i) + " balance at node " + std::to_string(n));
    }
  }
  return sys;
}

bool enlargement_membership_lifted(const AdaptedProcess& y, const Market& m) {
  const auto& tree = m.tree();
  require_size(y.values(), tree, "process");
  auto sys = enlargement_constraints(m);
  for (NodeId n = 0; n < tree.size(); ++n) pin(sys, n, y[n]);
  return solve({std::move(sys), Sense::Maximize, {}}).status == LpStatus::Optimal;
}

std::string BipolarWealthVerdict::describe() const {
  if (member) return "in";
  const std::string where = root_check ? "root check" : "node " + std::to_string(*failing_node);
  return where + " against enlargement element " + to_string(certificate);
}

BipolarWealthVerdict wealth_bipolar_membership(const AdaptedProcess& z, const Market& m) {
  const auto& tree = m.tree();
  require_size(z.values(), tree, "process");
  const auto sys = enlargement_constraints(m);
  std::vector<std::size_t> y_vars(tree.size());
  for (NodeId n = 0; n < tree.size(); ++n) y_vars[n] = n;
  BipolarWealthVerdict verdict;
  const NodeId r = tree.root();
  if (z[r] != 0) {
    const auto out = solve({sys, Sense::Maximize, {{r, z[r]}}});
    if (out.status != LpStatus::Optimal || out.value > 1) {
      verdict.root_check = true;
      verdict.failing_node = r;
      verdict.certificate = Values(out.point.begin(), out.point.begin() + tree.size());
      return verdict;
    }
  }
  for (NodeId n : internal_nodes(tree)) {
    if (auto bad = node_violation(sys, y_vars, z.values(), n, tree)) {
      verdict.failing_node = n;
      verdict.certificate = Values(bad->begin(), bad->begin() + tree.size());
      return verdict;
    }
  }
  verdict.member = true;
  return verdict;
}

bool consumption_feasible(const AdaptedProcess& z, const Market& m) {
  const auto& tree = m.tree();
  require_size(z.values(), tree, "process");
  auto wp = consumption_polytope(m, Rational(1));
  for (NodeId n = 0; n < tree.size(); ++n) pin(wp.system, wp.wealth[n], z[n]);
  return solve({std::move(wp.system), Sense::Maximize, {}}).status == LpStatus::Optimal;
}

Superhedge superhedge_value(const Values& claim, const Market& m) {
  const auto& tree = m.tree();
  require_size(claim, tree, "claim");
  Superhedge out;
  out.envelope = Values(tree.size(), Rational(0));
  out.extremal_measure = Values(tree.size(), Rational(0));
  out.extremal_measure[tree.root()] = 1;
  out.hedge = Strategy::zero(m);
  for (NodeId leaf : tree.terminals()) {
    if (claim[leaf] < 0) throw InputError("claim must be nonnegative");
    out.envelope[leaf] = claim[leaf];
  }
  for (std::size_t t = tree.horizon(); t-- > 0;) {
    for (NodeId n : tree.nodes_at(t)) {
      const auto& children = tree.children(n);
      // Local closed martingale polytope: q over the children.
      ConstraintSystem local(children.size());
      LinearExpr total, objective;
      for (std::size_t k = 0; k < children.size(); ++k) {
        total.push_back({k, Rational(1)});
        if (out.envelope[children[k]] != 0) objective.push_back({k, out.envelope[children[k]]});
      }
      local.add(std::move(total), Relation::Equal, Rational(1));
      for (std::size_t i = 0; i < m.assets(); ++i) {
        LinearExpr mart;
        for (std::size_t k = 0; k < children.size(); ++k) {
          const Rational step = m.price_step(i, children[k]);
          if (step != 0) mart.push_back({k, step});
        }
        if (!mart.empty()) local.add(std::move(mart), Relation::Equal, Rational(0));
      }
      const auto best = solve({std::move(local), Sense::Maximize, std::move(objective)});
      if (best.status != LpStatus::Optimal) throw InternalError("local martingale polytope is empty or unbounded");
      out.envelope[n] = best.value;
      for (std::size_t k = 0; k < children.size(); ++k) out.extremal_measure[children[k]] = best.point[k];

      // Hedge: envelope(n) + h dS(ch) >= envelope(ch) on every child.
      ConstraintSystem hedge(m.assets(), VariableBounds::free());
      for (NodeId ch : children) {
        LinearExpr row;
        for (std::size_t i = 0; i < m.assets(); ++i) {
          const Rational step = m.price_step(i, ch);
          if (step != 0) row.push_back({i, step});
        }
        hedge.add(std::move(row), Relation::GreaterEqual, out.envelope[ch] - out.envelope[n]);
      }
      const auto h = solve({std::move(hedge), Sense::Maximize, {}});
      if (h.status != LpStatus::Optimal) throw InternalError("no superhedge at node " + std::to_string(n));
      out.hedge.holdings[n] = h.point;
    }
  }
  out.value = out.envelope[tree.root()];

  out.residual = Values(tree.size(), Rational(0));
  for (std::size_t t = 1; t <= tree.horizon(); ++t) {
    for (NodeId ch : tree.nodes_at(t)) {
      const NodeId n = *tree.parent(ch);
      Rational gain = 0;
      for (std::size_t i = 0; i < m.assets(); ++i) gain += out.hedge.holdings[n][i] * m.price_step(i, ch);
      out.residual[ch] = out.residual[n] + out.envelope[n] + gain - out.envelope[ch];
      if (out.residual[ch] < out.residual[n]) throw InternalError("decomposition residual decreases");
    }
  }
  const Values x = wealth(out.value, out.hedge, ConsumptionProcess::none(tree), m);
  for (NodeId n = 0; n < tree.size(); ++n) {
    if (x[n] - out.residual[n] != out.envelope[n] || out.envelope[n] < 0) {
      throw InternalError("optional decomposition does not reproduce the envelope");
    }
  }
  return out;
}

Superhedge superhedge_value(const ConsumptionDensity& c, const Market& m) {
  const auto cum = c.cumulative(m.tree()).cumulative();
  auto out = superhedge_value(cum.values(), m);
  for (NodeId n = 0; n < m.tree().size(); ++n) {
    if (out.envelope[n] < cum[n]) throw InternalError("envelope falls below cumulative consumption");
  }
  return out;
}

BudgetVerdict budget_check(const ConsumptionDensity& c, const Rational& x, const Market& m) {
  const auto& tree = m.tree();
  const Rational initial = c.initial_cost(tree);
  const Rational capital = x - initial;
  const auto cum = c.cumulative(tree).cumulative();

  BudgetVerdict verdict;
  auto wp = consumption_polytope(m, capital);
  for (NodeId n = 0; n < tree.size(); ++n) pin(wp.system, *wp.consumption[n], cum[n]);
  const auto primal = solve({wp.system, Sense::Maximize, {}});
  verdict.primal = primal.status == LpStatus::Optimal;

  const auto sh = superhedge_value(c, m);
  verdict.required = initial + sh.value;
  verdict.dual = sh.value <= capital;

  if (verdict.primal != verdict.dual) {
    throw InternalError("budget oracles disagree: primal " + std::string(verdict.primal ? "feasible" : "infeasible") +
                        ", superhedge value " + to_string(sh.value) + " against capital " + to_string(capital));
  }
  verdict.admissible = verdict.primal;
  if (verdict.admissible) {
    verdict.strategy = wp.strategy(primal.point);
    verdict.wealth = wp.wealth_values(primal.point);
  } else {
    verdict.violating_measure = sh.extremal_measure;
  }
  return verdict;
}

Rational minimal_budget(const ConsumptionDensity& c, const Market& m) {
  const auto& tree = m.tree();
  const auto cum = c.cumulative(tree).cumulative();
  auto wp = consumption_polytope(m, std::nullopt);
  for (NodeId n = 0; n < tree.size(); ++n) pin(wp.system, *wp.consumption[n], cum[n]);
  const auto out = solve({wp.system, Sense::Minimize, {{wp.wealth[tree.root()], Rational(1)}}});
  if (out.status != LpStatus::Optimal) throw InternalError("minimal budget LP is not optimal");
  return c.initial_cost(tree) + out.value;
}

bool StructureReport::all_agree() const {
  for (const auto& e : entries) {
    if (!e.agree()) return false;
  }
  return true;
}

StructureReport verify_structure_theorem(const Market& m, const std::vector<AdaptedProcess>& y_probes,
                                         const std::vector<AdaptedProcess>& z_probes,
                                         const std::vector<WealthSample>& samples) {
  const auto& tree = m.tree();
  StructureReport report;
  for (std::size_t i = 0; i < y_probes.size(); ++i) {
    const auto& y = y_probes[i];
    const auto direct = y_enlargement_membership(y, m);
    StructureEntry b{'b', i, direct.member, consumption_polar_membership(y, m).member,
                     enlargement_membership_lifted(y, m), direct.describe()};
    report.entries.push_back(b);
    if (!direct.member) continue;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const auto& sample = samples[s];
      require_size(sample.wealth, tree, "wealth sample");
      Values product(tree.size());
      for (NodeId n = 0; n < tree.size(); ++n) {
        const Rational gross = sample.wealth[n] + sample.consumption[n];
        product[n] = y[n] * (gross - sample.consumption[n]);
      }
      const bool ok = is_supermartingale(AdaptedProcess(std::move(product)), tree);
      report.entries.push_back({'a', i, ok, true, std::nullopt, "sample " + std::to_string(s)});
    }
  }
  for (std::size_t i = 0; i < z_probes.size(); ++i) {
    const auto bip = wealth_bipolar_membership(z_probes[i], m);
    report.entries.push_back({'c', i, bip.member, consumption_feasible(z_probes[i], m), std::nullopt, bip.describe()});
  }
  return report;
}

}  // namespace procpolar
