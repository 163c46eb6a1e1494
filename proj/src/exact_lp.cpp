#include "procpolar/exact_lp.hpp"

#include <algorithm>
#include <atomic>

#include "procpolar/errors.hpp"

namespace procpolar {

namespace {

std::atomic<std::uint64_t> g_certificates{0};

// How one caller variable is expressed through nonnegative tableau columns.
struct VarMap {
  enum class Kind { Shifted, Reflected, Split } kind = Kind::Shifted;
  std::size_t col = 0;
  std::size_t neg_col = 0;
  Rational offset;
};

struct StdRow {
  Values coef;  // over structural columns
  Relation relation = Relation::LessEqual;
  Rational rhs;
  std::optional<std::size_t> source;  // caller row, if any
};

Values dense(const LinearExpr& expr, std::size_t n) {
  Values out(n, Rational(0));
  for (const auto& t : expr) out[t.var] += t.coef;
  return out;
}

class Simplex {
 public:
  explicit Simplex(const LpProblem& p) : p_(p) { standardize(); }

  LpOutcome run() {
    LpOutcome out;
    if (has_artificial_) {
      Values phase1(cols_, Rational(0));
      for (std::size_t j = first_art_; j < cols_; ++j) phase1[j] = -1;
      set_costs(phase1);
      iterate(cols_);
      Rational infeasibility = 0;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (basis_[i] >= first_art_) infeasibility += rhs(i);
      }
      if (infeasibility > 0) {
        out.status = LpStatus::Infeasible;
        out.multipliers = caller_multipliers(phase1);
        return out;
      }
      drive_out_artificials();
    }
    set_costs(cost_);
    const auto entering = iterate(first_art_);
    out.point = caller_point();
    if (entering) {
      out.status = LpStatus::Unbounded;
      out.ray = caller_ray(*entering);
      return out;
    }
    out.status = LpStatus::Optimal;
    out.value = evaluate(p_.objective, out.point);
    out.multipliers = caller_multipliers(cost_);
    return out;
  }

 private:
  const Rational& rhs(std::size_t i) const { return t_[i][cols_]; }

  void standardize() {
    const auto& sys = p_.system;
    const std::size_t n = sys.num_vars();
    vars_.resize(n);
    std::size_t next = 0;
    std::vector<StdRow> std_rows;
    std::vector<std::pair<std::size_t, Rational>> upper_rows;  // (col, width)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& b = sys.bounds()[j];
      auto& m = vars_[j];
      if (b.lower) {
        m.kind = VarMap::Kind::Shifted;
        m.col = next++;
        m.offset = *b.lower;
        if (b.upper) upper_rows.emplace_back(m.col, *b.upper - *b.lower);
      } else if (b.upper) {
        m.kind = VarMap::Kind::Reflected;
        m.col = next++;
        m.offset = *b.upper;
      } else {
        m.kind = VarMap::Kind::Split;
        m.col = next++;
        m.neg_col = next++;
      }
    }
    structural_ = next;

    // Exact duplicates carry no information; their multiplier stays zero.
    const auto& rows = sys.constraints();
    std::vector<Values> dense_rows;
    dense_rows.reserve(rows.size());
    for (const auto& r : rows) dense_rows.push_back(dense(r.terms, n));
    for (std::size_t k = 0; k < rows.size(); ++k) {
      bool duplicate = false;
      for (std::size_t e = 0; e < k && !duplicate; ++e) {
        duplicate = rows[e].relation == rows[k].relation && rows[e].rhs == rows[k].rhs &&
                    dense_rows[e] == dense_rows[k];
      }
      if (duplicate) continue;
      StdRow s;
      s.coef.assign(structural_, Rational(0));
      s.relation = rows[k].relation;
      s.rhs = rows[k].rhs;
      s.source = k;
      for (std::size_t j = 0; j < n; ++j) {
        const Rational& a = dense_rows[k][j];
        if (a == 0) continue;
        const auto& m = vars_[j];
        switch (m.kind) {
          case VarMap::Kind::Shifted:
            s.coef[m.col] += a;
            s.rhs -= a * m.offset;
            break;
          case VarMap::Kind::Reflected:
            s.coef[m.col] -= a;
            s.rhs -= a * m.offset;
            break;
          case VarMap::Kind::Split:
            s.coef[m.col] += a;
            s.coef[m.neg_col] -= a;
            break;
        }
      }
      std_rows.push_back(std::move(s));
    }
    for (const auto& [col, width] : upper_rows) {
      StdRow s;
      s.coef.assign(structural_, Rational(0));
      s.coef[col] = 1;
      s.relation = Relation::LessEqual;
      s.rhs = width;
      std_rows.push_back(std::move(s));
    }

    rows_ = std_rows.size();
    std::size_t slacks = 0;
    for (const auto& r : std_rows) slacks += r.relation != Relation::Equal;
    first_art_ = structural_ + slacks;
    // Decide each row's unit column (slack when it enters with +1, else artificial).
    std::vector<Rational> sign(rows_);
    std::vector<std::optional<std::size_t>> slack_col(rows_);
    std::size_t next_slack = structural_;
    std::size_t artificials = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
      sign[i] = std_rows[i].rhs < 0 ? -1 : 1;
      if (std_rows[i].relation != Relation::Equal) slack_col[i] = next_slack++;
    }
    unit_col_.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      const auto& r = std_rows[i];
      const int slack_sign = r.relation == Relation::LessEqual ? 1 : -1;
      if (slack_col[i] && sign[i] * slack_sign > 0) {
        unit_col_[i] = *slack_col[i];
      } else {
        unit_col_[i] = first_art_ + artificials++;
      }
    }
    has_artificial_ = artificials > 0;
    cols_ = first_art_ + artificials;

    t_.assign(rows_, Values(cols_ + 1, Rational(0)));
    row_sign_.resize(rows_);
    row_source_.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      const auto& r = std_rows[i];
      for (std::size_t j = 0; j < structural_; ++j) {
        if (r.coef[j] != 0) t_[i][j] = sign[i] * r.coef[j];
      }
      if (slack_col[i]) t_[i][*slack_col[i]] = sign[i] * (r.relation == Relation::LessEqual ? 1 : -1);
      if (unit_col_[i] >= first_art_) t_[i][unit_col_[i]] = 1;
      t_[i][cols_] = sign[i] * r.rhs;
      row_sign_[i] = sign[i];
      row_source_[i] = r.source;
    }
    basis_ = unit_col_;

    const Values c = dense(p_.objective, n);
    cost_.assign(cols_, Rational(0));
    const bool minimize = p_.sense == Sense::Minimize;
    for (std::size_t j = 0; j < n; ++j) {
      const Rational cj = minimize ? Rational(-c[j]) : c[j];
      if (cj == 0) continue;
      const auto& m = vars_[j];
      switch (m.kind) {
        case VarMap::Kind::Shifted:
          cost_[m.col] += cj;
          break;
        case VarMap::Kind::Reflected:
          cost_[m.col] -= cj;
          break;
        case VarMap::Kind::Split:
          cost_[m.col] += cj;
          cost_[m.neg_col] -= cj;
          break;
      }
    }
  }

  void set_costs(const Values& c) {
    reduced_ = c;
    for (std::size_t i = 0; i < rows_; ++i) {
      const Rational& cb = c[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (t_[i][j] != 0) reduced_[j] -= cb * t_[i][j];
      }
    }
  }

  void pivot(std::size_t p, std::size_t q) {
    auto& prow = t_[p];
    const Rational inv = 1 / prow[q];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (prow[j] != 0) {
        prow[j] *= inv;
        nz.push_back(j);
      }
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == p || t_[i][q] == 0) continue;
      const Rational f = t_[i][q];
      auto& row = t_[i];
      for (std::size_t j : nz) row[j] -= f * prow[j];
    }
    if (reduced_[q] != 0) {
      const Rational f = reduced_[q];
      for (std::size_t j : nz) {
        if (j < cols_) reduced_[j] -= f * prow[j];
      }
    }
    basis_[p] = q;
  }

  // Bland's rule. Columns >= limit never enter. Returns the entering column
  // when the objective is unbounded along it.
  std::optional<std::size_t> iterate(std::size_t limit) {
    for (;;) {
      std::optional<std::size_t> q;
      for (std::size_t j = 0; j < limit; ++j) {
        if (reduced_[j] > 0) {
          q = j;
          break;
        }
      }
      if (!q) return std::nullopt;
      std::optional<std::size_t> p;
      Rational best;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (t_[i][*q] <= 0) continue;
        Rational ratio = rhs(i) / t_[i][*q];
        if (!p || ratio < best || (ratio == best && basis_[i] < basis_[*p])) {
          p = i;
          best = std::move(ratio);
        }
      }
      if (!p) return q;
      pivot(*p, *q);
    }
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < first_art_) continue;
      for (std::size_t j = 0; j < first_art_; ++j) {
        if (t_[i][j] != 0) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  Values standard_point() const {
    Values x(cols_, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i) x[basis_[i]] = rhs(i);
    return x;
  }

  Values map_back(const Values& xs, bool direction) const {
    Values x(vars_.size());
    for (std::size_t j = 0; j < vars_.size(); ++j) {
      const auto& m = vars_[j];
      const Rational base = direction ? Rational(0) : m.offset;
      switch (m.kind) {
        case VarMap::Kind::Shifted:
          x[j] = base + xs[m.col];
          break;
        case VarMap::Kind::Reflected:
          x[j] = base - xs[m.col];
          break;
        case VarMap::Kind::Split:
          x[j] = xs[m.col] - xs[m.neg_col];
          break;
      }
    }
    return x;
  }

  Values caller_point() const { return map_back(standard_point(), false); }

  Values caller_ray(std::size_t q) const {
    Values d(cols_, Rational(0));
    d[q] = 1;
    for (std::size_t i = 0; i < rows_; ++i) d[basis_[i]] = -t_[i][q];
    return map_back(d, true);
  }

  // y_i = c_u - r_u for the row's initial unit column u, mapped through the
  // row's sign flip onto the caller's rows.
  Values caller_multipliers(const Values& c) const {
    Values y(p_.system.constraints().size(), Rational(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!row_source_[i]) continue;
      const std::size_t u = unit_col_[i];
      y[*row_source_[i]] = row_sign_[i] * (c[u] - reduced_[u]);
    }
    return y;
  }

  const LpProblem& p_;
  std::vector<VarMap> vars_;
  std::size_t structural_ = 0;
  std::size_t first_art_ = 0;
  std::size_t cols_ = 0;
  std::size_t rows_ = 0;
  bool has_artificial_ = false;
  std::vector<Values> t_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> unit_col_;
  std::vector<Rational> row_sign_;
  std::vector<std::optional<std::size_t>> row_source_;
  Values cost_;
  Values reduced_;
};

bool sign_ok(Relation r, const Rational& y) {
  switch (r) {
    case Relation::LessEqual:
      return y >= 0;
    case Relation::GreaterEqual:
      return y <= 0;
    case Relation::Equal:
      return true;
  }
  return false;
}

// A^T y over the caller's variables.
Values transpose_times(const ConstraintSystem& sys, const Values& y) {
  Values out(sys.num_vars(), Rational(0));
  const auto& rows = sys.constraints();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (y[k] == 0) continue;
    for (const auto& t : rows[k].terms) out[t.var] += y[k] * t.coef;
  }
  return out;
}

bool verify_impl(const LpProblem& p, const LpOutcome& o) {
  const auto& sys = p.system;
  const std::size_t n = sys.num_vars();
  const auto& rows = sys.constraints();
  Values c = dense(p.objective, n);
  if (p.sense == Sense::Minimize) {
    for (auto& v : c) v = -v;
  }
  switch (o.status) {
    case LpStatus::Optimal: {
      if (o.point.size() != n || !sys.satisfied_by(o.point)) return false;
      if (evaluate(p.objective, o.point) != o.value) return false;
      if (o.multipliers.size() != rows.size()) return false;
      Rational dual = 0;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (!sign_ok(rows[k].relation, o.multipliers[k])) return false;
        dual += o.multipliers[k] * rows[k].rhs;
      }
      const Values aty = transpose_times(sys, o.multipliers);
      for (std::size_t j = 0; j < n; ++j) {
        const Rational r = c[j] - aty[j];
        const auto& b = sys.bounds()[j];
        if (r > 0) {
          if (!b.upper) return false;
          dual += r * *b.upper;
        } else if (r < 0) {
          if (!b.lower) return false;
          dual += r * *b.lower;
        }
      }
      Rational primal = 0;
      for (std::size_t j = 0; j < n; ++j) primal += c[j] * o.point[j];
      return primal == dual;
    }
    case LpStatus::Unbounded: {
      if (o.point.size() != n || o.ray.size() != n || !sys.satisfied_by(o.point)) return false;
      for (const auto& row : rows) {
        const Rational a = evaluate(row.terms, o.ray);
        if (row.relation == Relation::LessEqual && a > 0) return false;
        if (row.relation == Relation::GreaterEqual && a < 0) return false;
        if (row.relation == Relation::Equal && a != 0) return false;
      }
      Rational gain = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const auto& b = sys.bounds()[j];
        if (b.lower && o.ray[j] < 0) return false;
        if (b.upper && o.ray[j] > 0) return false;
        gain += c[j] * o.ray[j];
      }
      return gain > 0;
    }
    case LpStatus::Infeasible: {
      for (const auto& b : sys.bounds()) {
        if (b.lower && b.upper && *b.lower > *b.upper) return true;
      }
      if (o.multipliers.size() != rows.size()) return false;
      Rational by = 0;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (!sign_ok(rows[k].relation, o.multipliers[k])) return false;
        by += o.multipliers[k] * rows[k].rhs;
      }
      // Every feasible x has y^T A x <= y^T b; show the box minimum exceeds it.
      const Values aty = transpose_times(sys, o.multipliers);
      Rational box_min = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const auto& b = sys.bounds()[j];
        if (aty[j] > 0) {
          if (!b.lower) return false;
          box_min += aty[j] * *b.lower;
        } else if (aty[j] < 0) {
          if (!b.upper) return false;
          box_min += aty[j] * *b.upper;
        }
      }
      return box_min > by;
    }
  }
  return false;
}

}  // namespace

const char* to_string(Relation r) {
  switch (r) {
    case Relation::LessEqual:
      return "<=";
    case Relation::Equal:
      return "=";
    case Relation::GreaterEqual:
      return ">=";
  }
  return "?";
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Unbounded:
      return "unbounded";
    case LpStatus::Infeasible:
      return "infeasible";
  }
  return "?";
}

ConstraintSystem::ConstraintSystem(std::size_t num_vars, VariableBounds bounds) : bounds_(num_vars, bounds) {}

std::size_t ConstraintSystem::add_variable(VariableBounds bounds) {
  bounds_.push_back(std::move(bounds));
  return bounds_.size() - 1;
}

void ConstraintSystem::set_bounds(std::size_t var, VariableBounds bounds) { bounds_.at(var) = std::move(bounds); }

void ConstraintSystem::add(LinearExpr terms, Relation relation, Rational rhs, std::string label) {
  for (const auto& t : terms) {
    if (t.var >= bounds_.size()) {
      throw InputError("constraint refers to variable " + std::to_string(t.var) + " of " +
                       std::to_string(bounds_.size()));
    }
  }
  rows_.push_back({std::move(terms), relation, std::move(rhs), std::move(label)});
}

void ConstraintSystem::append(const ConstraintSystem& other) {
  if (other.num_vars() != num_vars()) throw InputError("appending a system over different variables");
  for (const auto& r : other.rows_) rows_.push_back(r);
}

Rational evaluate(const LinearExpr& expr, const Values& point) {
  Rational sum = 0;
  for (const auto& t : expr) sum += t.coef * point.at(t.var);
  return sum;
}

bool ConstraintSystem::satisfied_by(const Values& point) const { return !first_violation(point); }

std::optional<std::string> ConstraintSystem::first_violation(const Values& point) const {
  if (point.size() != num_vars()) return std::string("dimension mismatch");
  for (std::size_t j = 0; j < bounds_.size(); ++j) {
    if (bounds_[j].lower && point[j] < *bounds_[j].lower) return "lower bound of variable " + std::to_string(j);
    if (bounds_[j].upper && point[j] > *bounds_[j].upper) return "upper bound of variable " + std::to_string(j);
  }
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const Rational lhs = evaluate(rows_[k].terms, point);
    bool ok = true;
    switch (rows_[k].relation) {
      case Relation::LessEqual:
        ok = lhs <= rows_[k].rhs;
        break;
      case Relation::Equal:
        ok = lhs == rows_[k].rhs;
        break;
      case Relation::GreaterEqual:
        ok = lhs >= rows_[k].rhs;
        break;
    }
    if (!ok) return rows_[k].label.empty() ? "#" + std::to_string(k) : rows_[k].label;
  }
  return std::nullopt;
}

LpOutcome solve(const LpProblem& problem) {
  if (problem.system.num_vars() == 0) throw InputError("linear program has no variables");
  for (const auto& t : problem.objective) {
    if (t.var >= problem.system.num_vars()) throw InputError("objective refers to a missing variable");
  }
  LpOutcome out;
  bool empty_box = false;
  for (const auto& b : problem.system.bounds()) {
    empty_box = empty_box || (b.lower && b.upper && *b.lower > *b.upper);
  }
  if (empty_box) {
    out.status = LpStatus::Infeasible;
    out.multipliers.assign(problem.system.constraints().size(), Rational(0));
  } else {
    out = Simplex(problem).run();
  }
  if (!verify_impl(problem, out)) {
    throw InternalError(std::string("simplex certificate failed verification (status ") + to_string(out.status) + ")");
  }
  g_certificates.fetch_add(1, std::memory_order_relaxed);
  return out;
}

bool verify_outcome(const LpProblem& problem, const LpOutcome& outcome) { return verify_impl(problem, outcome); }

std::optional<Values> feasible_interior_point(const ConstraintSystem& system,
                                              const std::vector<std::size_t>& strict_vars) {
  LpProblem p{system, Sense::Maximize, {}};
  const std::size_t eps = p.system.add_variable({std::nullopt, Rational(1)});
  for (std::size_t v : strict_vars) {
    if (v >= system.num_vars()) throw InputError("strict variable out of range");
    p.system.add({{v, Rational(1)}, {eps, Rational(-1)}}, Relation::GreaterEqual, Rational(0), "margin");
  }
  p.objective = {{eps, Rational(1)}};
  const auto out = solve(p);
  if (out.status != LpStatus::Optimal || out.value <= 0) return std::nullopt;
  Values point(out.point.begin(), out.point.begin() + static_cast<std::ptrdiff_t>(system.num_vars()));
  return point;
}

std::uint64_t certificates_verified() { return g_certificates.load(std::memory_order_relaxed); }

}  // namespace procpolar
