#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxlab/cover.hpp"

namespace ctxlab {

/// Immutable propositional formula over the variables of a cover.
///
/// Outcome 0 reads as true and outcome 1 as false: the variable x holds exactly when
/// the measurement x yields 0.
class Formula {
 public:
  enum class Kind { Constant, Variable, Not, And, Or, Xor, Iff };

  static Formula constant(bool value);
  static Formula variable(VariableIndex v);
  static Formula negation(Formula f);
  /// Empty conjunction is TRUE, empty disjunction FALSE, empty xor FALSE.
  static Formula conjunction(std::vector<Formula> operands);
  static Formula disjunction(std::vector<Formula> operands);
  static Formula exclusive_or(std::vector<Formula> operands);
  static Formula biconditional(Formula lhs, Formula rhs);

  Kind kind() const { return node_->kind; }
  bool constant_value() const { return node_->value; }
  VariableIndex variable_index() const { return node_->variable; }
  const std::vector<Formula>& operands() const { return node_->operands; }

  /// Sorted, duplicate-free.
  std::vector<VariableIndex> variables() const;

  /// Truth of the formula for 64 assignments at once. `word(v)` returns, for variable v,
  /// the 64 outcome bits (1 = outcome 1); the result has bit k set when assignment k
  /// satisfies the formula.
  template <typename WordOf>
  std::uint64_t evaluate_block(const WordOf& word) const;

  /// Text in the operator syntax accepted by parse_formula.
  std::string to_string(const MeasurementCover& cover) const;

 private:
  struct Node {
    Kind kind;
    bool value = false;
    VariableIndex variable = 0;
    std::vector<Formula> operands;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Grammar (loosest binding first): iff "<->", or "|", xor "^", and "&", not "!".
/// Identifiers are [A-Za-z_][A-Za-z0-9_']*; TRUE and FALSE are constants.
Formula parse_formula(std::string_view text, const MeasurementCover& cover);

template <typename WordOf>
std::uint64_t Formula::evaluate_block(const WordOf& word) const {
  switch (node_->kind) {
    case Kind::Constant:
      return node_->value ? ~std::uint64_t{0} : 0;
    case Kind::Variable:
      return ~word(node_->variable);
    case Kind::Not:
      return ~node_->operands.front().evaluate_block(word);
    case Kind::And: {
      std::uint64_t acc = ~std::uint64_t{0};
      for (const auto& f : node_->operands) acc &= f.evaluate_block(word);
      return acc;
    }
    case Kind::Or: {
      std::uint64_t acc = 0;
      for (const auto& f : node_->operands) acc |= f.evaluate_block(word);
      return acc;
    }
    case Kind::Xor: {
      std::uint64_t acc = 0;
      for (const auto& f : node_->operands) acc ^= f.evaluate_block(word);
      return acc;
    }
    case Kind::Iff:
      return ~(node_->operands[0].evaluate_block(word) ^ node_->operands[1].evaluate_block(word));
  }
  return 0;
}

/// Enumerates 2^m assignments of an ordered domain in blocks of 64. Domain position j
/// is bit m-1-j of the assignment index, matching AssignmentBits.
class BlockEnumerator {
 public:
  explicit BlockEnumerator(std::span<const VariableIndex> domain);

  std::size_t num_blocks() const { return num_blocks_; }
  /// Assignments in the final block beyond 2^m are masked off by this.
  std::uint64_t valid_mask(std::size_t block) const;
  /// Outcome word of domain position j in `block`.
  std::uint64_t word(std::size_t block, std::size_t position) const;
  /// Outcome word of variable v (must be in the domain).
  std::uint64_t variable_word(std::size_t block, VariableIndex v) const {
    return word(block, position_of_[v]);
  }

 private:
  std::size_t size_;
  std::size_t num_blocks_;
  std::vector<std::size_t> position_of_;
};

}  // namespace ctxlab
