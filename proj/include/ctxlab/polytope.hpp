#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxlab/errors.hpp"
#include "ctxlab/inequalities.hpp"

namespace ctxlab {

/// a . z >= rhs
struct LinearRow {
  VectorQ coefficients;
  Rational rhs;

  friend bool operator==(const LinearRow& a, const LinearRow& b) {
    return a.coefficients.size() == b.coefficients.size() && a.coefficients == b.coefficients &&
           a.rhs == b.rhs;
  }
};

/// A finite system of rows a . z >= b over named variables. An equality is stored as
/// the pair a . z >= b, -a . z >= -b.
class LinearSystem {
 public:
  LinearSystem() = default;
  explicit LinearSystem(std::vector<std::string> variables);

  const std::vector<std::string>& variables() const { return variables_; }
  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  const std::vector<LinearRow>& rows() const { return rows_; }
  const LinearRow& row(std::size_t i) const { return rows_.at(i); }

  /// Throws DomainError for unknown names.
  std::size_t variable_index(std::string_view name) const;

  void add_inequality(VectorQ coefficients, Rational rhs);
  void add_equality(const VectorQ& coefficients, const Rational& rhs);

  bool satisfied_by(const VectorQ& point) const;

  friend bool operator==(const LinearSystem&, const LinearSystem&) = default;

 private:
  std::vector<std::string> variables_;
  std::vector<LinearRow> rows_;
};

/// Scales a row to integer entries with gcd 1 (rhs included).
LinearRow canonical_row(const LinearRow& row);

/// Canonical rows, duplicates and trivially true rows (0 >= b with b <= 0) removed,
/// original order otherwise kept.
LinearSystem canonicalize(const LinearSystem& system);

/// Fourier-Motzkin: pairs every lower bound on `var` with every upper bound and drops
/// the variable.
LinearSystem fm_eliminate(const LinearSystem& system, std::size_t var);
LinearSystem fm_eliminate(const LinearSystem& system, std::string_view name);

/// Whether some point satisfies every row.
bool is_feasible(const LinearSystem& system);

/// Whether every solution of `system` satisfies `row` (Farkas certificate by exact LP).
bool implies(const LinearSystem& system, const LinearRow& row);

/// Drops rows implied by the remaining ones, testing each row once in order. An
/// infeasible system becomes the single row 0 >= 1.
LinearSystem remove_redundant(const LinearSystem& system);

struct ProjectionOptions {
  /// Redundancy removal after every elimination instead of only at the end.
  bool prune_each_step = true;
  /// Use an equality pair containing the variable as a substitution rule. This keeps
  /// only the Fourier-Motzkin pairs that involve the equality; the others are implied.
  bool substitute_equalities = true;
};

/// Eliminates `vars`, choosing at each step the variable with the fewest
/// lower-times-upper pairs (lowest index on ties).
LinearSystem project_out(const LinearSystem& system, std::span<const std::size_t> vars,
                         const ProjectionOptions& options = {});

/// The variables that were eliminated, in order, with the row count after each step.
struct ProjectionTrace {
  std::vector<std::string> order;
  std::vector<std::size_t> rows;
};

LinearSystem project_out(const LinearSystem& system, std::span<const std::size_t> vars,
                         const ProjectionOptions& options, ProjectionTrace* trace);

/// Integer-normalized inequalities r . v <= b over the cells (U, s) of a cover.
struct InequalitySet {
  std::vector<RationalInequality> inequalities;
};

/// The system y = M x, x >= 0, 1 . x = 1 over cell variables y and global assignment
/// variables x, in that column order.
LinearSystem symbolic_system(const MeasurementCover& cover, const Limits& limits = {});

/// A complete inequality description of the convex hull of the delta^t.
InequalitySet noncontextual_polytope(const MeasurementCover& cover, const Limits& limits = {},
                                     const ProjectionOptions& options = {});

/// Converts every nontrivial member of the polytope description with rational_to_logical.
std::vector<LogicalBellInequality> complete_logical_bell_set(const MeasurementCover& cover,
                                                             const Limits& limits = {},
                                                             const ProjectionOptions& options = {});

/// Distinct expectation vectors eta^t, in order of first appearance over t.
std::vector<std::vector<int>> correlation_vertices(const MeasurementCover& cover,
                                                   const Limits& limits = {});

/// A complete description of the convex hull of the eta^t over the cover's contexts.
std::vector<CorrelationInequality> correlation_polytope(const MeasurementCover& cover,
                                                        const Limits& limits = {},
                                                        const ProjectionOptions& options = {});

/// Whether v satisfies every member.
bool contains(const InequalitySet& set, const VectorQ& cells);

/// Equality pairs of the set (r . v <= b and -r . v <= -b), by index.
std::vector<std::pair<std::size_t, std::size_t>> equality_pairs(const InequalitySet& set);

/// "3/2 p[(a,b):01] - p[(a',b):11] <= 1"
std::string format_inequality(const MeasurementCover& cover, const RationalInequality& ineq);
std::string format_inequality(const MeasurementCover& cover, const CorrelationInequality& ineq);

}  // namespace ctxlab
