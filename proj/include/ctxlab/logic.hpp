#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ctxlab/errors.hpp"
#include "ctxlab/formula.hpp"

namespace ctxlab {

/// A formula attached to a context U; every variable of the formula lies in U.
class TaggedFormula {
 public:
  TaggedFormula(std::vector<VariableIndex> context, Formula formula);

  /// Sorted ascending.
  const std::vector<VariableIndex>& context() const { return context_; }
  const Formula& formula() const { return formula_; }

 private:
  std::vector<VariableIndex> context_;
  Formula formula_;
};

struct WeightedFormula {
  std::uint64_t multiplicity = 1;
  TaggedFormula formula;
};

/// sum_i k_i phi_i
using FormulaMultiset = std::vector<WeightedFormula>;

std::uint64_t cardinality(const FormulaMultiset& multiset);

enum class Parity { Even, Odd };

/// Local assignment bits of the context satisfying the formula, ascending.
std::vector<AssignmentBits> satisfying_assignments(const TaggedFormula& phi,
                                                   const Limits& limits = {});

/// phi_s: the conjunction of x for s(x)=0 and !x for s(x)=1.
Formula point_formula(const LocalAssignment& s);

/// Disjunction of the point formulas of `cells` (bits over `context`).
Formula support_formula(std::span<const AssignmentBits> cells,
                        std::span<const VariableIndex> context);

/// ONE(U): exactly one variable of U takes outcome 0.
Formula one_hot_formula(std::span<const VariableIndex> context);

/// Even: an even number of outcomes equal 1 (psi_U). Odd: the complement.
Formula parity_formula(std::span<const VariableIndex> context, Parity parity);

/// A readable formula with the given satisfying set: TRUE, FALSE, a point formula, a
/// parity formula on the smallest sub-domain that fits, or the support formula,
/// whichever applies first.
Formula formula_for_cells(std::span<const AssignmentBits> cells,
                          std::span<const VariableIndex> context);

struct MaxSatResult {
  /// Largest total multiplicity of formulas satisfied by a single global assignment.
  std::uint64_t value = 0;
  /// An assignment attaining it (over all `num_variables` variables).
  GlobalAssignment witness;
};

/// Exhaustive MAX-SAT over the variables occurring in the multiset.
MaxSatResult max_satisfiable(const FormulaMultiset& multiset, std::size_t num_variables,
                             const Limits& limits = {});

/// A global assignment satisfying every formula, if one exists.
std::optional<GlobalAssignment> is_jointly_satisfiable(std::span<const TaggedFormula> formulas,
                                                       std::size_t num_variables,
                                                       const Limits& limits = {});

/// True iff the two formulas have the same satisfying set over `context`.
bool equivalent_on(const Formula& lhs, const Formula& rhs, std::span<const VariableIndex> context,
                   const Limits& limits = {});

}  // namespace ctxlab
