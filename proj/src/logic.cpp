#include "ctxlab/logic.hpp"

#include <algorithm>
#include <bit>

namespace ctxlab {

namespace {

void check_limit(std::size_t size, const Limits& limits) {
  if (size > limits.max_variables) {
    throw LimitExceeded("enumeration over " + std::to_string(size) +
                        " variables exceeds the limit of " +
                        std::to_string(limits.max_variables));
  }
}

/// Bit set of satisfying local assignments of f over `domain`, one word per block.
std::vector<std::uint64_t> truth_table(const Formula& f, std::span<const VariableIndex> domain) {
  BlockEnumerator blocks(domain);
  std::vector<std::uint64_t> table(blocks.num_blocks());
  for (std::size_t b = 0; b < blocks.num_blocks(); ++b) {
    table[b] = f.evaluate_block([&](VariableIndex v) { return blocks.variable_word(b, v); }) &
               blocks.valid_mask(b);
  }
  return table;
}

std::vector<AssignmentBits> cells_of(const std::vector<std::uint64_t>& table) {
  std::vector<AssignmentBits> cells;
  for (std::size_t b = 0; b < table.size(); ++b) {
    for (std::uint64_t w = table[b]; w; w &= w - 1) {
      cells.push_back(b * 64 + static_cast<AssignmentBits>(std::countr_zero(w)));
    }
  }
  return cells;
}

std::vector<VariableIndex> union_of_variables(std::span<const TaggedFormula> formulas) {
  std::vector<VariableIndex> vars;
  for (const auto& f : formulas) {
    auto fv = f.formula().variables();
    vars.insert(vars.end(), fv.begin(), fv.end());
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

/// Global assignment setting `domain` from the block index bits and all else to 0.
GlobalAssignment lift(std::span<const VariableIndex> domain, AssignmentBits local,
                      std::size_t num_variables) {
  GlobalAssignment t{num_variables, 0};
  for (std::size_t j = 0; j < domain.size(); ++j) {
    if ((local >> (domain.size() - 1 - j)) & 1U) {
      t.bits |= AssignmentBits{1} << (num_variables - 1 - domain[j]);
    }
  }
  return t;
}

}  // namespace

TaggedFormula::TaggedFormula(std::vector<VariableIndex> context, Formula formula)
    : context_(std::move(context)), formula_(std::move(formula)) {
  std::sort(context_.begin(), context_.end());
  context_.erase(std::unique(context_.begin(), context_.end()), context_.end());
  for (auto v : formula_.variables()) {
    if (!std::binary_search(context_.begin(), context_.end(), v)) {
      throw DomainError("formula uses a variable outside its context");
    }
  }
}

std::uint64_t cardinality(const FormulaMultiset& multiset) {
  std::uint64_t total = 0;
  for (const auto& entry : multiset) total += entry.multiplicity;
  return total;
}

std::vector<AssignmentBits> satisfying_assignments(const TaggedFormula& phi,
                                                   const Limits& limits) {
  check_limit(phi.context().size(), limits);
  return cells_of(truth_table(phi.formula(), phi.context()));
}

Formula point_formula(const LocalAssignment& s) {
  std::vector<Formula> literals;
  for (std::size_t j = 0; j < s.domain.size(); ++j) {
    auto x = Formula::variable(s.domain[j]);
    literals.push_back(s.value_at(j) == 0 ? x : Formula::negation(x));
  }
  return Formula::conjunction(std::move(literals));
}

Formula support_formula(std::span<const AssignmentBits> cells,
                        std::span<const VariableIndex> context) {
  if (cells.empty()) throw DomainError("support formula of an empty set");
  std::vector<Formula> points;
  LocalAssignment s{std::vector<VariableIndex>(context.begin(), context.end()), 0};
  for (auto bits : cells) {
    s.bits = bits;
    points.push_back(point_formula(s));
  }
  return Formula::disjunction(std::move(points));
}

Formula one_hot_formula(std::span<const VariableIndex> context) {
  if (context.empty()) throw DomainError("ONE(U) needs a nonempty context");
  std::vector<Formula> options;
  for (auto x : context) {
    std::vector<Formula> conj{Formula::variable(x)};
    for (auto other : context) {
      if (other != x) conj.push_back(Formula::negation(Formula::variable(other)));
    }
    options.push_back(Formula::conjunction(std::move(conj)));
  }
  return Formula::disjunction(std::move(options));
}

Formula parity_formula(std::span<const VariableIndex> context, Parity parity) {
  if (context.empty()) throw DomainError("parity formula needs a nonempty context");
  // The XOR of the literals counts outcomes equal to 0, which has the same parity as
  // the number of 1s exactly when |U| is even.
  const bool want_xor = (parity == Parity::Odd) == (context.size() % 2 == 0);
  if (context.size() == 2 && !want_xor) {
    return Formula::biconditional(Formula::variable(context[0]), Formula::variable(context[1]));
  }
  if (context.size() == 1) {
    auto x = Formula::variable(context[0]);
    return want_xor ? x : Formula::negation(std::move(x));
  }
  std::vector<Formula> literals;
  for (auto x : context) literals.push_back(Formula::variable(x));
  auto xor_all = Formula::exclusive_or(std::move(literals));
  return want_xor ? xor_all : Formula::negation(std::move(xor_all));
}

Formula formula_for_cells(std::span<const AssignmentBits> cells,
                          std::span<const VariableIndex> context) {
  const std::size_t total = std::size_t{1} << context.size();
  if (cells.empty()) return Formula::constant(false);
  if (cells.size() == total) return Formula::constant(true);
  if (cells.size() == 1) {
    return point_formula(LocalAssignment{std::vector<VariableIndex>(context.begin(), context.end()),
                                         cells.front()});
  }
  if (cells.size() == total / 2) {
    // Parity of the outcomes on some sub-domain, smallest sub-domain first.
    const std::size_t n = context.size();
    for (std::size_t size = 1; size <= n; ++size) {
      for (AssignmentBits mask = 1; mask < total; ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
        const bool odd = std::popcount(cells.front() & mask) % 2 == 1;
        const bool matches = std::all_of(cells.begin(), cells.end(), [&](AssignmentBits s) {
          return (std::popcount(s & mask) % 2 == 1) == odd;
        });
        if (!matches) continue;
        std::vector<VariableIndex> sub;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask >> (n - 1 - i) & 1U) sub.push_back(context[i]);
        }
        return parity_formula(sub, odd ? Parity::Odd : Parity::Even);
      }
    }
  }
  return support_formula(cells, context);
}

MaxSatResult max_satisfiable(const FormulaMultiset& multiset, std::size_t num_variables,
                             const Limits& limits) {
  MaxSatResult result{0, GlobalAssignment{num_variables, 0}};
  if (multiset.empty()) return result;
  std::vector<TaggedFormula> formulas;
  for (const auto& entry : multiset) formulas.push_back(entry.formula);
  const auto domain = union_of_variables(formulas);
  check_limit(domain.size(), limits);
  for (auto v : domain) {
    if (v >= num_variables) throw DomainError("formula variable outside the cover");
  }

  BlockEnumerator blocks(domain);
  std::vector<std::uint64_t> words(multiset.size());
  std::uint64_t best = 0;
  AssignmentBits best_local = 0;
  bool found = false;
  for (std::size_t b = 0; b < blocks.num_blocks(); ++b) {
    const auto word_of = [&](VariableIndex v) { return blocks.variable_word(b, v); };
    for (std::size_t i = 0; i < multiset.size(); ++i) {
      words[i] = multiset[i].formula.formula().evaluate_block(word_of);
    }
    for (std::uint64_t live = blocks.valid_mask(b); live; live &= live - 1) {
      const int k = std::countr_zero(live);
      std::uint64_t score = 0;
      for (std::size_t i = 0; i < multiset.size(); ++i) {
        if ((words[i] >> k) & 1U) score += multiset[i].multiplicity;
      }
      if (!found || score > best) {
        best = score;
        best_local = b * 64 + static_cast<AssignmentBits>(k);
        found = true;
      }
    }
  }
  result.value = best;
  result.witness = lift(domain, best_local, num_variables);
  return result;
}

std::optional<GlobalAssignment> is_jointly_satisfiable(std::span<const TaggedFormula> formulas,
                                                       std::size_t num_variables,
                                                       const Limits& limits) {
  const auto domain = union_of_variables(formulas);
  check_limit(domain.size(), limits);
  for (auto v : domain) {
    if (v >= num_variables) throw DomainError("formula variable outside the cover");
  }
  BlockEnumerator blocks(domain);
  for (std::size_t b = 0; b < blocks.num_blocks(); ++b) {
    const auto word_of = [&](VariableIndex v) { return blocks.variable_word(b, v); };
    std::uint64_t acc = blocks.valid_mask(b);
    for (const auto& f : formulas) {
      acc &= f.formula().evaluate_block(word_of);
      if (!acc) break;
    }
    if (acc) {
      return lift(domain, b * 64 + static_cast<AssignmentBits>(std::countr_zero(acc)),
                  num_variables);
    }
  }
  return std::nullopt;
}

bool equivalent_on(const Formula& lhs, const Formula& rhs, std::span<const VariableIndex> context,
                   const Limits& limits) {
  check_limit(context.size(), limits);
  return truth_table(lhs, context) == truth_table(rhs, context);
}

}  // namespace ctxlab
