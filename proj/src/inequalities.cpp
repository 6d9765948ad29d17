#include "ctxlab/inequalities.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <numeric>

#include "ctxlab/contextuality.hpp"

namespace ctxlab {

namespace {

void check_enumeration(std::size_t n, const Limits& limits) {
  if (n > limits.max_variables) {
    throw LimitExceeded("enumeration over " + std::to_string(n) +
                        " variables exceeds the limit of " +
                        std::to_string(limits.max_variables));
  }
}

ContextIndex context_of(const MeasurementCover& cover, const TaggedFormula& f) {
  auto c = cover.find_context(f.context());
  if (!c) throw DomainError("inequality term is tagged with a context outside the cover");
  return *c;
}

std::uint64_t to_multiplicity(const Integer& value) {
  if (value < 0 || value > Integer(std::numeric_limits<std::uint64_t>::max())) {
    throw DomainError("multiplicity out of range");
  }
  return value.convert_to<std::uint64_t>();
}

bool is_even(AssignmentBits s) { return std::popcount(s) % 2 == 0; }

std::vector<AssignmentBits> parity_cells(std::size_t size, Parity parity) {
  std::vector<AssignmentBits> cells;
  for (AssignmentBits s = 0; s < (AssignmentBits{1} << size); ++s) {
    if (is_even(s) == (parity == Parity::Even)) cells.push_back(s);
  }
  return cells;
}

void check_coefficient_count(const MeasurementCover& cover, std::size_t count) {
  if (count != cover.num_cells()) {
    throw DomainError("expected " + std::to_string(cover.num_cells()) + " coefficients, got " +
                      std::to_string(count));
  }
}

}  // namespace

LogicalBellInequality::LogicalBellInequality(FormulaMultiset terms, std::uint64_t bound,
                                             std::size_t num_variables, const Limits& limits)
    : terms_(std::move(terms)), bound_(bound) {
  auto best = max_satisfiable(terms_, num_variables, limits);
  if (best.value > bound_) {
    throw InvalidInequality("multiset is not " + std::to_string(bound_) +
                                "-consistent: an assignment satisfies weight " +
                                std::to_string(best.value),
                            best.witness);
  }
  verified_ = true;
}

LogicalBellInequality LogicalBellInequality::unchecked(FormulaMultiset terms,
                                                       std::uint64_t bound) {
  LogicalBellInequality result;
  result.terms_ = std::move(terms);
  result.bound_ = bound;
  return result;
}

bool LogicalBellInequality::is_k_consistent(std::size_t num_variables,
                                            const Limits& limits) const {
  return max_satisfiable(terms_, num_variables, limits).value <= bound_;
}

LogicalBellInequality LogicalBellInequality::normalized() const {
  std::uint64_t g = bound_;
  for (const auto& t : terms_) g = std::gcd(g, t.multiplicity);
  LogicalBellInequality result = *this;
  if (g <= 1) return result;
  for (auto& t : result.terms_) t.multiplicity /= g;
  result.bound_ /= g;
  return result;
}

LogicalEvaluation evaluate_logical(const EmpiricalModel& model, const LogicalBellInequality& ineq,
                                   const Limits& limits) {
  LogicalEvaluation result;
  for (const auto& term : ineq.terms()) {
    auto c = context_of(model.cover(), term.formula);
    auto cells = satisfying_assignments(term.formula, limits);
    result.lhs += Rational(term.multiplicity) * model.probability_of(c, cells);
  }
  result.bound = Rational(ineq.bound());
  result.violation = std::max(Rational(0), result.lhs - result.bound);
  auto n = Rational(ineq.cardinality());
  result.maximal = result.lhs == n && result.bound < n;
  return result;
}

LogicalBellInequality canonical_support_inequality(const SupportModel& support,
                                                   const Limits& limits) {
  const auto& cover = support.cover();
  FormulaMultiset terms;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    std::vector<VariableIndex> ctx(cover.context(c).begin(), cover.context(c).end());
    terms.push_back({1, TaggedFormula(ctx, formula_for_cells(support.support(c), ctx))});
  }
  auto bound = max_satisfiable(terms, cover.num_variables(), limits).value;
  return LogicalBellInequality(std::move(terms), bound, cover.num_variables(), limits);
}

LogicalBellInequality canonical_support_inequality(const EmpiricalModel& model,
                                                   const Limits& limits) {
  return canonical_support_inequality(support_of(model), limits);
}

LogicalBellInequality possibilistic_witness_inequality(const SupportModel& support,
                                                       ContextIndex context, AssignmentBits s,
                                                       const Limits& limits) {
  const auto& cover = support.cover();
  if (context >= cover.num_contexts() || s >= cover.context_size(context) ||
      !support.contains(context, s)) {
    throw DomainError("witness cell is not in the support");
  }
  if (extend_to_global_section(support, context, s, limits)) {
    throw DomainError("witness cell extends to a global section");
  }
  FormulaMultiset terms;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    std::vector<VariableIndex> ctx(cover.context(c).begin(), cover.context(c).end());
    Formula f = c == context ? point_formula(LocalAssignment{ctx, s})
                             : formula_for_cells(support.support(c), ctx);
    terms.push_back({1, TaggedFormula(ctx, f)});
  }
  // No global assignment satisfies all terms, since s has no extension.
  auto bound = cover.num_contexts() - 1;
  return LogicalBellInequality::unchecked(std::move(terms), bound);
}

LogicalBellInequality correlation_sign_inequality(const EmpiricalModel& model,
                                                  const Limits& limits) {
  const auto& cover = model.cover();
  auto e = expectation_vector(model);
  FormulaMultiset terms;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    std::vector<VariableIndex> ctx(cover.context(c).begin(), cover.context(c).end());
    auto parity = e.values(static_cast<Eigen::Index>(c)) >= 0 ? Parity::Even : Parity::Odd;
    terms.push_back({1, TaggedFormula(ctx, parity_formula(ctx, parity))});
  }
  auto bound = max_satisfiable(terms, cover.num_variables(), limits).value;
  return LogicalBellInequality(std::move(terms), bound, cover.num_variables(), limits);
}

ExpectationVector expectation_vector(const EmpiricalModel& model) {
  const auto& cover = model.cover();
  ExpectationVector e{VectorQ::Zero(static_cast<Eigen::Index>(cover.num_contexts()))};
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    Rational even = 0;
    for (AssignmentBits s = 0; s < cover.context_size(c); ++s) {
      if (is_even(s)) even += model.probability(c, s);
    }
    e.values(static_cast<Eigen::Index>(c)) = 2 * even - 1;
  }
  return e;
}

Rational chsh_functional(const EmpiricalModel& model, std::span<const TaggedFormula> formulas,
                         const Limits& limits) {
  if (is_jointly_satisfiable(formulas, model.cover().num_variables(), limits)) {
    throw DomainError("formulas are jointly satisfiable");
  }
  Rational sum = 0;
  for (const auto& f : formulas) {
    auto c = context_of(model.cover(), f);
    sum += 2 * model.probability_of(c, satisfying_assignments(f, limits)) - 1;
  }
  return abs(sum);
}

RationalInequality normalize(const RationalInequality& ineq) {
  auto k = clear_denominators(ineq);
  RationalInequality result{VectorQ(ineq.coefficients.size()), Rational(k.bound)};
  for (std::size_t i = 0; i < k.coefficients.size(); ++i) {
    result.coefficients(static_cast<Eigen::Index>(i)) = Rational(k.coefficients[i]);
  }
  return result;
}

IntegerInequality clear_denominators(const RationalInequality& ineq) {
  std::vector<Rational> all(ineq.coefficients.begin(), ineq.coefficients.end());
  all.push_back(ineq.bound);
  Integer scale = lcm_of_denominators(all);
  Integer g = 0;
  for (auto& v : all) {
    v *= scale;
    g = gcd(g, abs(numerator(v)));
  }
  if (g == 0) g = 1;
  IntegerInequality result;
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    result.coefficients.push_back(numerator(all[i]) / g);
  }
  result.bound = numerator(all.back()) / g;
  return result;
}

Rational evaluate_rational(const EmpiricalModel& model, const RationalInequality& ineq) {
  auto v = model.cell_vector();
  if (v.size() != ineq.coefficients.size()) {
    throw DomainError("inequality and model have different cell counts");
  }
  return ineq.coefficients.dot(v);
}

Rational evaluate_correlation(const ExpectationVector& expectations,
                              const CorrelationInequality& ineq) {
  if (static_cast<std::size_t>(expectations.values.size()) != ineq.coefficients.size()) {
    throw DomainError("inequality and model have different context counts");
  }
  Rational sum = 0;
  for (std::size_t i = 0; i < ineq.coefficients.size(); ++i) {
    sum += Rational(ineq.coefficients[i]) * expectations.values(static_cast<Eigen::Index>(i));
  }
  return sum;
}

std::pair<Integer, GlobalAssignment> max_over_deterministic(const MeasurementCover& cover,
                                                            std::span<const Integer> k,
                                                            const Limits& limits) {
  check_coefficient_count(cover, k.size());
  const auto n = cover.num_variables();
  check_enumeration(n, limits);
  std::optional<Integer> best;
  GlobalAssignment arg{n, 0};
  for (AssignmentBits t = 0; t < (AssignmentBits{1} << n); ++t) {
    Integer value = 0;
    for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
      value += k[cover.cell_index(c, restrict_bits(t, n, cover.context(c)))];
    }
    if (!best || value > *best) {
      best = value;
      arg.bits = t;
    }
  }
  return {*best, arg};
}

namespace {

void require_valid(const MeasurementCover& cover, std::span<const Integer> k,
                   const Integer& bound, const Limits& limits) {
  auto [value, t] = max_over_deterministic(cover, k, limits);
  if (value > bound) {
    throw InvalidInequality("inequality is violated by the deterministic model of " +
                                t.bitstring(),
                            t);
  }
}

}  // namespace

LogicalBellInequality cellwise_logical_form(const MeasurementCover& cover,
                                            std::span<const Integer> k, const Integer& bound,
                                            const Limits& limits) {
  require_valid(cover, k, bound, limits);
  FormulaMultiset terms;
  Integer total = bound;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    std::vector<VariableIndex> ctx(cover.context(c).begin(), cover.context(c).end());
    for (AssignmentBits s = 0; s < cover.context_size(c); ++s) {
      const Integer& ks = k[cover.cell_index(c, s)];
      if (ks == 0) continue;
      Formula phi = point_formula(LocalAssignment{ctx, s});
      if (ks > 0) {
        terms.push_back({to_multiplicity(ks), TaggedFormula(ctx, phi)});
      } else {
        terms.push_back({to_multiplicity(-ks), TaggedFormula(ctx, Formula::negation(phi))});
        total -= ks;
      }
    }
  }
  return LogicalBellInequality::unchecked(std::move(terms), to_multiplicity(total));
}

LogicalBellInequality rational_to_logical(const MeasurementCover& cover,
                                          std::span<const Integer> k, const Integer& bound,
                                          const Limits& limits) {
  require_valid(cover, k, bound, limits);
  std::vector<std::pair<Integer, TaggedFormula>> layers;
  Integer total = bound;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    std::vector<VariableIndex> ctx(cover.context(c).begin(), cover.context(c).end());
    std::vector<Integer> row(k.begin() + static_cast<std::ptrdiff_t>(cover.cell_offset(c)),
                             k.begin() + static_cast<std::ptrdiff_t>(cover.cell_offset(c) +
                                                                     cover.context_size(c)));
    std::vector<Integer> levels = row;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    // sum_s k_s p(s) = min + sum_j (w_j - w_{j-1}) p({s : k_s >= w_j})
    total -= levels.front();
    for (std::size_t j = 1; j < levels.size(); ++j) {
      std::vector<AssignmentBits> cells;
      for (AssignmentBits s = 0; s < row.size(); ++s) {
        if (row[s] >= levels[j]) cells.push_back(s);
      }
      layers.emplace_back(levels[j] - levels[j - 1],
                          TaggedFormula(ctx, formula_for_cells(cells, ctx)));
    }
  }
  Integer g = total;
  for (const auto& [m, f] : layers) g = gcd(g, m);
  if (g == 0) g = 1;
  FormulaMultiset terms;
  for (auto& [m, f] : layers) terms.push_back({to_multiplicity(m / g), std::move(f)});
  return LogicalBellInequality::unchecked(std::move(terms), to_multiplicity(total / g));
}

std::optional<GlobalAssignment> correlation_counterexample(const MeasurementCover& cover,
                                                           const CorrelationInequality& ineq,
                                                           const Limits& limits) {
  if (ineq.coefficients.size() != cover.num_contexts()) {
    throw DomainError("expected one coefficient per context");
  }
  const auto n = cover.num_variables();
  check_enumeration(n, limits);
  for (AssignmentBits t = 0; t < (AssignmentBits{1} << n); ++t) {
    Integer value = 0;
    for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
      bool even = is_even(restrict_bits(t, n, cover.context(c)));
      value += even ? ineq.coefficients[c] : Integer(-ineq.coefficients[c]);
    }
    if (value > ineq.bound) return GlobalAssignment{n, t};
  }
  return std::nullopt;
}

LogicalBellInequality correlation_to_logical(const MeasurementCover& cover,
                                             const CorrelationInequality& ineq,
                                             const Limits& limits) {
  if (auto t = correlation_counterexample(cover, ineq, limits)) {
    throw InvalidInequality("inequality is violated by the deterministic model of " +
                                t->bitstring(),
                            *t);
  }
  FormulaMultiset terms;
  Integer total = ineq.bound;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    const Integer& l = ineq.coefficients[c];
    if (l == 0) continue;
    std::vector<VariableIndex> ctx(cover.context(c).begin(), cover.context(c).end());
    Formula theta = parity_formula(ctx, l > 0 ? Parity::Even : Parity::Odd);
    terms.push_back({to_multiplicity(2 * abs(l)), TaggedFormula(ctx, theta)});
    total += abs(l);
  }
  return LogicalBellInequality::unchecked(std::move(terms), to_multiplicity(total));
}

CorrelationInequality logical_to_correlation(const MeasurementCover& cover,
                                             const LogicalBellInequality& ineq,
                                             const Limits& limits) {
  // 2 p(psi_U) = 1 + E_U and 2 p(!psi_U) = 1 - E_U, so doubling both sides gives
  // sum_i (+-m_i) E_{U_i} <= 2K - sum_i m_i.
  CorrelationInequality result{std::vector<Integer>(cover.num_contexts(), 0),
                               Integer(2) * ineq.bound()};
  for (const auto& term : ineq.terms()) {
    auto c = context_of(cover, term.formula);
    auto cells = satisfying_assignments(term.formula, limits);
    Integer m(term.multiplicity);
    auto size = cover.context(c).size();
    if (cells == parity_cells(size, Parity::Even)) {
      result.coefficients[c] += m;
    } else if (cells == parity_cells(size, Parity::Odd)) {
      result.coefficients[c] -= m;
    } else {
      throw DomainError("term on " + cover.context_label(c) + " is not a parity formula");
    }
    result.bound -= m;
  }
  Integer g = abs(result.bound);
  for (const auto& l : result.coefficients) g = gcd(g, abs(l));
  if (g > 1) {
    for (auto& l : result.coefficients) l /= g;
    result.bound /= g;
  }
  return result;
}

}  // namespace ctxlab
