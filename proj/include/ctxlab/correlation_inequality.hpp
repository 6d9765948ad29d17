#pragma once

#include <vector>

#include "ctxlab/rational.hpp"

namespace ctxlab {

/// sum_U l_U E_U <= M over the contexts of a cover (coefficients in context order).
struct CorrelationInequality {
  std::vector<Integer> coefficients;
  Integer bound;

  friend bool operator==(const CorrelationInequality&, const CorrelationInequality&) = default;
};

}  // namespace ctxlab
