#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "procpolar/rational.hpp"

namespace procpolar {

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Maximize, Minimize };
enum class LpStatus { Optimal, Unbounded, Infeasible };

const char* to_string(Relation r);
const char* to_string(LpStatus s);

struct Term {
  std::size_t var;
  Rational coef;
};
using LinearExpr = std::vector<Term>;

struct LinearConstraint {
  LinearExpr terms;
  Relation relation = Relation::LessEqual;
  Rational rhs;
  std::string label;
};

/// Unset optional = unbounded on that side.
struct VariableBounds {
  std::optional<Rational> lower = Rational(0);
  std::optional<Rational> upper;

  static VariableBounds nonnegative() { return {}; }
  static VariableBounds free() { return {std::nullopt, std::nullopt}; }
};

/// H-representation: linear inequalities plus per-variable bounds.
class ConstraintSystem {
 public:
  explicit ConstraintSystem(std::size_t num_vars = 0, VariableBounds bounds = {});

  std::size_t add_variable(VariableBounds bounds = {});
  void set_bounds(std::size_t var, VariableBounds bounds);
  /// Throws InputError when a term refers to a variable that does not exist.
  void add(LinearExpr terms, Relation relation, Rational rhs, std::string label = {});
  void append(const ConstraintSystem& other);

  std::size_t num_vars() const { return bounds_.size(); }
  const std::vector<VariableBounds>& bounds() const { return bounds_; }
  const std::vector<LinearConstraint>& constraints() const { return rows_; }

  /// Exact substitution; bounds included.
  bool satisfied_by(const Values& point) const;
  /// Label (or "#index") of the first violated row or bound, if any.
  std::optional<std::string> first_violation(const Values& point) const;

 private:
  std::vector<VariableBounds> bounds_;
  std::vector<LinearConstraint> rows_;
};

Rational evaluate(const LinearExpr& expr, const Values& point);

struct LpProblem {
  ConstraintSystem system;
  Sense sense = Sense::Maximize;
  LinearExpr objective;
};

/// Certificates, all in terms of the caller's variables and rows:
/// Optimal: `point` attains `value`; `multipliers` is a dual solution
/// (one per row) proving no feasible point does better.
/// Unbounded: `point` is feasible and `point + s * ray` stays feasible for
/// every s >= 0 while the objective strictly improves.
/// Infeasible: `multipliers` is a Farkas combination of the rows that no
/// point inside the variable bounds can satisfy.
struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  Values point;
  Values ray;
  Values multipliers;
};

/// Two-phase primal simplex over exact rationals with Bland's rule. Every
/// outcome is re-verified (verify_outcome) before it is returned; a failed
/// check raises InternalError. Throws InputError on malformed problems.
LpOutcome solve(const LpProblem& problem);

/// Re-checks the certificate carried by `outcome` by exact substitution.
bool verify_outcome(const LpProblem& problem, const LpOutcome& outcome);

/// A point of the polyhedron strictly positive on `strict_vars`, found by
/// maximizing a common lower margin. Empty when no such point exists.
std::optional<Values> feasible_interior_point(const ConstraintSystem& system,
                                              const std::vector<std::size_t>& strict_vars);

/// Process-wide count of certificates checked by solve().
std::uint64_t certificates_verified();

}  // namespace procpolar
