#include "ctxlab/contextuality.hpp"

#include <algorithm>

#include "ctxlab/simplex.hpp"

namespace ctxlab {

namespace {

void check_variables(const MeasurementCover& cover, const Limits& limits) {
  if (cover.num_variables() > limits.max_variables) {
    throw LimitExceeded("cover has " + std::to_string(cover.num_variables()) +
                        " variables; the enumeration limit is " +
                        std::to_string(limits.max_variables));
  }
}

/// Depth-first search over contexts. Each level picks a support cell compatible with
/// the variables fixed so far.
class SectionSearch {
 public:
  explicit SectionSearch(const SupportModel& support) : support_(support) {
    const auto& cover = support.cover();
    n_ = cover.num_variables();
    // Contexts with small supports first; ties by index.
    order_.resize(cover.num_contexts());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    std::stable_sort(order_.begin(), order_.end(), [&](auto a, auto b) {
      return support.support(a).size() < support.support(b).size();
    });
    masks_.resize(cover.num_contexts());
    for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
      for (auto v : cover.context(c)) masks_[c] |= AssignmentBits{1} << (n_ - 1 - v);
    }
  }

  /// Calls visit(t) for each section consistent with (fixed_mask, fixed_bits); stops
  /// early when visit returns false.
  template <typename Visit>
  void run(AssignmentBits fixed_mask, AssignmentBits fixed_bits, Visit&& visit) {
    stop_ = false;
    descend(0, fixed_mask, fixed_bits, visit);
  }

  /// Spreads local bits of context c onto global positions.
  AssignmentBits spread(ContextIndex c, AssignmentBits s) const {
    const auto ctx = support_.cover().context(c);
    AssignmentBits out = 0;
    for (std::size_t j = 0; j < ctx.size(); ++j) {
      if ((s >> (ctx.size() - 1 - j)) & 1U) out |= AssignmentBits{1} << (n_ - 1 - ctx[j]);
    }
    return out;
  }

  AssignmentBits mask(ContextIndex c) const { return masks_[c]; }

 private:
  template <typename Visit>
  void descend(std::size_t depth, AssignmentBits fixed_mask, AssignmentBits fixed_bits,
               Visit& visit) {
    if (stop_) return;
    if (depth == order_.size()) {
      if (!visit(GlobalAssignment{n_, fixed_bits})) stop_ = true;
      return;
    }
    const ContextIndex c = order_[depth];
    const AssignmentBits ctx_mask = masks_[c];
    const AssignmentBits overlap = ctx_mask & fixed_mask;
    for (auto s : support_.support(c)) {
      const AssignmentBits bits = spread(c, s);
      if ((bits & overlap) != (fixed_bits & overlap)) continue;
      descend(depth + 1, fixed_mask | ctx_mask, fixed_bits | bits, visit);
      if (stop_) return;
    }
  }

  const SupportModel& support_;
  std::size_t n_ = 0;
  std::vector<ContextIndex> order_;
  std::vector<AssignmentBits> masks_;
  bool stop_ = false;
};

}  // namespace

IncidenceMatrix::IncidenceMatrix(MeasurementCover cover, const Limits& limits)
    : cover_(std::move(cover)) {
  check_variables(cover_, limits);
}

int IncidenceMatrix::operator()(std::size_t row, std::size_t col) const {
  const auto [c, s] = row_cell(row);
  return restrict_bits(col, cover_.num_variables(), cover_.context(c)) == s ? 1 : 0;
}

std::pair<ContextIndex, AssignmentBits> IncidenceMatrix::row_cell(std::size_t row) const {
  for (ContextIndex c = 0; c < cover_.num_contexts(); ++c) {
    if (row < cover_.cell_offset(c) + cover_.context_size(c)) {
      return {c, row - cover_.cell_offset(c)};
    }
  }
  throw DomainError("incidence row out of range");
}

std::vector<std::size_t> IncidenceMatrix::column_support(AssignmentBits t) const {
  std::vector<std::size_t> rows;
  rows.reserve(cover_.num_contexts());
  for (ContextIndex c = 0; c < cover_.num_contexts(); ++c) {
    rows.push_back(cover_.cell_index(c, restrict_bits(t, cover_.num_variables(), cover_.context(c))));
  }
  return rows;
}

IncidenceMatrix incidence_matrix(const MeasurementCover& cover, const Limits& limits) {
  return IncidenceMatrix(cover, limits);
}

std::vector<GlobalAssignment> global_sections(const SupportModel& support, const Limits& limits) {
  check_variables(support.cover(), limits);
  std::vector<GlobalAssignment> out;
  SectionSearch search(support);
  search.run(0, 0, [&](const GlobalAssignment& t) {
    out.push_back(t);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<GlobalAssignment> extend_to_global_section(const SupportModel& support,
                                                         ContextIndex c, AssignmentBits s,
                                                         const Limits& limits) {
  check_variables(support.cover(), limits);
  if (!support.contains(c, s)) return std::nullopt;
  SectionSearch search(support);
  std::optional<GlobalAssignment> found;
  search.run(search.mask(c), search.spread(c, s), [&](const GlobalAssignment& t) {
    found = t;
    return false;
  });
  return found;
}

std::vector<std::pair<ContextIndex, AssignmentBits>> unextendable_cells(
    const SupportModel& support, const Limits& limits) {
  std::vector<std::pair<ContextIndex, AssignmentBits>> out;
  for (ContextIndex c = 0; c < support.cover().num_contexts(); ++c) {
    for (auto s : support.support(c)) {
      if (!extend_to_global_section(support, c, s, limits)) out.emplace_back(c, s);
    }
  }
  return out;
}

std::optional<NoncontextualDecomposition> find_noncontextual_decomposition(
    const EmpiricalModel& model, const Limits& limits) {
  const IncidenceMatrix m(model.cover(), limits);
  // mu(t) <= d_U(t|U), so only global sections of the support can carry weight.
  const auto columns = global_sections(support_of(model), limits);
  if (columns.empty()) return std::nullopt;
  if (m.rows() * columns.size() > limits.max_tableau_entries) {
    throw LimitExceeded("decomposition LP of size " + std::to_string(m.rows()) + " x " +
                        std::to_string(columns.size()) + " exceeds the tableau limit");
  }
  MatrixQ a = MatrixQ::Zero(static_cast<Eigen::Index>(m.rows()),
                            static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (auto r : m.column_support(columns[j].bits)) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = 1;
    }
  }
  auto x = find_feasible_point<Rational>(a, model.cell_vector());
  if (!x) return std::nullopt;
  NoncontextualDecomposition out;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const auto& w = (*x)(static_cast<Eigen::Index>(j));
    if (w != 0) out.weights.emplace_back(columns[j], w);
  }
  return out;
}

EmpiricalModel reconstruct(const MeasurementCover& cover,
                           const NoncontextualDecomposition& decomposition) {
  std::vector<EmpiricalModel> parts;
  std::vector<Rational> weights;
  for (const auto& [t, w] : decomposition.weights) {
    parts.push_back(deterministic_model(cover, t));
    weights.push_back(w);
  }
  return mix(parts, weights);
}

std::string to_string(ContextualityClass value) {
  switch (value) {
    case ContextualityClass::Noncontextual: return "NONCONTEXTUAL";
    case ContextualityClass::ProbabilisticallyContextual: return "PROBABILISTICALLY_CONTEXTUAL";
    case ContextualityClass::PossibilisticallyContextual: return "POSSIBILISTICALLY_CONTEXTUAL";
    case ContextualityClass::StronglyContextual: return "STRONGLY_CONTEXTUAL";
  }
  return "UNKNOWN";
}

std::optional<ContextualityClass> classify_support(const SupportModel& support,
                                                   const Limits& limits) {
  check_variables(support.cover(), limits);
  SectionSearch search(support);
  bool any_section = false;
  search.run(0, 0, [&](const GlobalAssignment&) {
    any_section = true;
    return false;
  });
  if (!any_section) return ContextualityClass::StronglyContextual;
  if (!unextendable_cells(support, limits).empty()) {
    return ContextualityClass::PossibilisticallyContextual;
  }
  return std::nullopt;
}

ContextualityClass classify(const EmpiricalModel& model, const Limits& limits) {
  if (auto by_support = classify_support(support_of(model), limits)) return *by_support;
  return find_noncontextual_decomposition(model, limits)
             ? ContextualityClass::Noncontextual
             : ContextualityClass::ProbabilisticallyContextual;
}

}  // namespace ctxlab
