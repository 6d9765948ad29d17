#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ctxlab {

using VariableIndex = std::size_t;
using ContextIndex = std::size_t;

/// Outcome bits of an assignment over an ordered domain of variables. The first
/// variable of the domain is the most significant bit, so integer order equals the
/// lexicographic order of the bitstring.
using AssignmentBits = std::uint64_t;

/// A measurement cover (X, U): named dichotomic variables and a family of contexts.
///
/// Each context is stored with its variables sorted by position in X. Contexts may be
/// nested but not repeated; their union must be all of X.
class MeasurementCover {
 public:
  MeasurementCover() = default;
  MeasurementCover(std::vector<std::string> variables,
                   const std::vector<std::vector<std::string>>& contexts);
  MeasurementCover(std::vector<std::string> variables,
                   std::vector<std::vector<VariableIndex>> contexts);

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_contexts() const { return contexts_.size(); }
  const std::vector<std::string>& variables() const { return variables_; }
  const std::string& variable_name(VariableIndex v) const { return variables_.at(v); }
  std::span<const VariableIndex> context(ContextIndex c) const { return contexts_.at(c); }
  const std::vector<std::vector<VariableIndex>>& contexts() const { return contexts_; }

  std::optional<VariableIndex> find_variable(std::string_view name) const;
  /// Throws DomainError for unknown names.
  VariableIndex variable_index(std::string_view name) const;
  /// Finds a context equal to `vars` as a set.
  std::optional<ContextIndex> find_context(std::span<const VariableIndex> vars) const;

  /// Number of local assignments 2^|U| of context c.
  std::size_t context_size(ContextIndex c) const { return std::size_t{1} << contexts_.at(c).size(); }
  /// D = sum over contexts of 2^|U|.
  std::size_t num_cells() const { return cell_offsets_.back(); }
  /// Position of cell (c, s) in the stacked model vector.
  std::size_t cell_index(ContextIndex c, AssignmentBits s) const { return cell_offsets_[c] + s; }
  std::size_t cell_offset(ContextIndex c) const { return cell_offsets_[c]; }

  /// "(a,b)"
  std::string context_label(ContextIndex c) const;
  /// "a,b" -> sorted indices; throws on unknown names.
  std::vector<VariableIndex> parse_variable_set(const std::vector<std::string>& names) const;

  friend bool operator==(const MeasurementCover&, const MeasurementCover&) = default;

 private:
  void validate_and_index();

  std::vector<std::string> variables_;
  std::vector<std::vector<VariableIndex>> contexts_;
  std::vector<std::size_t> cell_offsets_{0};
};

/// s : U -> {0,1} over an ordered domain U.
struct LocalAssignment {
  std::vector<VariableIndex> domain;  // ascending
  AssignmentBits bits = 0;

  int value_at(std::size_t position) const {
    return static_cast<int>((bits >> (domain.size() - 1 - position)) & 1U);
  }
  /// Value of variable v; throws DomainError if v is not in the domain.
  int value_of(VariableIndex v) const;
  std::string bitstring() const;
  friend bool operator==(const LocalAssignment&, const LocalAssignment&) = default;
};

/// t : X -> {0,1} for a cover with `size` variables.
struct GlobalAssignment {
  std::size_t size = 0;
  AssignmentBits bits = 0;

  int value_of(VariableIndex v) const { return static_cast<int>((bits >> (size - 1 - v)) & 1U); }
  std::string bitstring() const;
  friend bool operator==(const GlobalAssignment&, const GlobalAssignment&) = default;
  friend auto operator<=>(const GlobalAssignment&, const GlobalAssignment&) = default;
};

/// Bits of t restricted to the (ascending) variable list `vars`.
AssignmentBits restrict_bits(AssignmentBits t, std::size_t num_variables,
                             std::span<const VariableIndex> vars);

LocalAssignment restrict(const GlobalAssignment& t, std::span<const VariableIndex> vars);
/// Restriction of a local assignment to a subset of its domain.
LocalAssignment restrict(const LocalAssignment& s, std::span<const VariableIndex> vars);

/// Parses a bitstring of the given length ("0110").
AssignmentBits parse_bitstring(std::string_view text, std::size_t length);
std::string format_bitstring(AssignmentBits bits, std::size_t length);

/// (n, k, 2^p) Bell scenario: n sites, k settings per site, p dichotomic variables per
/// setting. Contexts pick one setting per site and are ordered with site 1 most
/// significant. Variables are named a, a', b, b', ... (with "_l" suffixes when p > 1).
MeasurementCover bell_scenario_cover(std::size_t sites, std::size_t settings,
                                     std::size_t bits_per_setting);

}  // namespace ctxlab
