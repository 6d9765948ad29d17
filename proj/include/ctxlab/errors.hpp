#pragma once

#include <stdexcept>
#include <string>

namespace ctxlab {

/// Input that violates a documented precondition or invariant.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration or polytope computation would exceed the configured size limit.
class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Size limits for exhaustive enumeration and polytope projection.
struct Limits {
  /// Maximum |X| for enumeration over 2^X (satisfiability, global sections, incidence).
  std::size_t max_variables = 24;
  /// Maximum |X| for the non-contextual polytope pipeline.
  std::size_t max_polytope_variables = 8;
  /// Maximum number of contexts for the correlation polytope pipeline.
  std::size_t max_correlation_contexts = 8;
  /// Maximum D * N tableau entries for the exact decomposition LP.
  std::size_t max_tableau_entries = std::size_t{1} << 22;
};

}  // namespace ctxlab
