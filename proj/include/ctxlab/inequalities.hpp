#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ctxlab/correlation_inequality.hpp"
#include "ctxlab/errors.hpp"
#include "ctxlab/logic.hpp"
#include "ctxlab/model.hpp"

namespace ctxlab {

/// Raised when an inequality that should hold for every deterministic model does not.
class InvalidInequality : public DomainError {
 public:
  InvalidInequality(const std::string& what, GlobalAssignment witness)
      : DomainError(what), witness_(witness) {}
  const GlobalAssignment& witness() const { return witness_; }

 private:
  GlobalAssignment witness_;
};

/// sum_i k_i p(phi_i) <= K with a K-consistent multiset.
class LogicalBellInequality {
 public:
  /// Checks K-consistency by exhaustive MAX-SAT and throws DomainError if it fails.
  LogicalBellInequality(FormulaMultiset terms, std::uint64_t bound, std::size_t num_variables,
                        const Limits& limits = {});

  /// For inequalities whose consistency follows from their construction. verified()
  /// reports false until is_k_consistent() is called by the user.
  static LogicalBellInequality unchecked(FormulaMultiset terms, std::uint64_t bound);

  const FormulaMultiset& terms() const { return terms_; }
  std::uint64_t bound() const { return bound_; }
  std::uint64_t cardinality() const { return ctxlab::cardinality(terms_); }
  bool verified() const { return verified_; }

  /// Independent MAX-SAT check of the defining condition.
  bool is_k_consistent(std::size_t num_variables, const Limits& limits = {}) const;

  /// Divides every multiplicity and the bound by their greatest common divisor.
  LogicalBellInequality normalized() const;

 private:
  LogicalBellInequality() = default;

  FormulaMultiset terms_;
  std::uint64_t bound_ = 0;
  bool verified_ = false;
};

/// r . v <= bound over the stacked cells (U, s) of a cover.
struct RationalInequality {
  VectorQ coefficients;
  Rational bound;

  friend bool operator==(const RationalInequality& a, const RationalInequality& b) {
    return a.coefficients.size() == b.coefficients.size() && a.coefficients == b.coefficients &&
           a.bound == b.bound;
  }
};

/// Integer form k . v <= M.
struct IntegerInequality {
  std::vector<Integer> coefficients;
  Integer bound;

  friend bool operator==(const IntegerInequality&, const IntegerInequality&) = default;
};

/// E_U = 2 p(psi_U) - 1 for each context, in context order.
struct ExpectationVector {
  VectorQ values;
};

struct LogicalEvaluation {
  Rational lhs;
  Rational bound;
  /// max(0, lhs - bound)
  Rational violation;
  /// lhs reaches the algebraic maximum (the cardinality) of a valid inequality.
  bool maximal = false;
};

LogicalEvaluation evaluate_logical(const EmpiricalModel& model, const LogicalBellInequality& ineq,
                                   const Limits& limits = {});

/// One term per context defining S(U), with K = max_satisfiable of the multiset.
LogicalBellInequality canonical_support_inequality(const SupportModel& support,
                                                   const Limits& limits = {});
LogicalBellInequality canonical_support_inequality(const EmpiricalModel& model,
                                                   const Limits& limits = {});

/// phi_s + sum_{U' != U} phi_{U'} <= |U| - 1 for a support cell s that extends to no
/// global section. Throws DomainError when s is outside S(U) or extends.
LogicalBellInequality possibilistic_witness_inequality(const SupportModel& support,
                                                       ContextIndex context, AssignmentBits s,
                                                       const Limits& limits = {});

/// Per context, psi_U when E_U >= 0 and !psi_U otherwise, with K = max_satisfiable.
/// For the CHSH table this gives the four correlation formulas with bound 3.
LogicalBellInequality correlation_sign_inequality(const EmpiricalModel& model,
                                                  const Limits& limits = {});

ExpectationVector expectation_vector(const EmpiricalModel& model);

/// |sum_i (2 p(phi_i) - 1)|. The formulas must be jointly unsatisfiable, in which case
/// every non-contextual model stays at or below N - 2.
Rational chsh_functional(const EmpiricalModel& model, std::span<const TaggedFormula> formulas,
                         const Limits& limits = {});

/// Scales to integer coefficients with gcd 1 (bound included in the gcd).
RationalInequality normalize(const RationalInequality& ineq);
IntegerInequality clear_denominators(const RationalInequality& ineq);

Rational evaluate_rational(const EmpiricalModel& model, const RationalInequality& ineq);
Rational evaluate_correlation(const ExpectationVector& expectations,
                              const CorrelationInequality& ineq);

/// Largest value of k . delta^t over t in 2^X, with a maximizing t.
std::pair<Integer, GlobalAssignment> max_over_deterministic(const MeasurementCover& cover,
                                                            std::span<const Integer> k,
                                                            const Limits& limits = {});

/// The term-by-term construction: k^U_s theta^U_s with theta = phi_s for k >= 0 and
/// !phi_s for k < 0, bound K = M + sum_{k<0} |k|. Rejects inequalities violated by
/// some delta^t (InvalidInequality carries the witness).
LogicalBellInequality cellwise_logical_form(const MeasurementCover& cover,
                                            std::span<const Integer> k, const Integer& bound,
                                            const Limits& limits = {});

/// Equivalent logical Bell inequality with terms collected per context: each context
/// contributes threshold events {s : k[U,s] >= w} for its distinct coefficient values,
/// and the result is divided by the gcd of its multiplicities and bound.
LogicalBellInequality rational_to_logical(const MeasurementCover& cover,
                                          std::span<const Integer> k, const Integer& bound,
                                          const Limits& limits = {});

/// sum_U 2|l_U| theta_U <= M + sum_U |l_U| with theta_U = psi_U (l_U > 0) or !psi_U.
LogicalBellInequality correlation_to_logical(const MeasurementCover& cover,
                                             const CorrelationInequality& ineq,
                                             const Limits& limits = {});

/// Inverse of correlation_to_logical: every term must define psi_U or !psi_U on a
/// context of the cover. The result is divided by the gcd of its coefficients and bound.
CorrelationInequality logical_to_correlation(const MeasurementCover& cover,
                                             const LogicalBellInequality& ineq,
                                             const Limits& limits = {});

/// Whether every deterministic expectation vector satisfies the inequality; the first
/// violating t otherwise.
std::optional<GlobalAssignment> correlation_counterexample(const MeasurementCover& cover,
                                                           const CorrelationInequality& ineq,
                                                           const Limits& limits = {});

}  // namespace ctxlab
