#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctxlab/errors.hpp"
#include "ctxlab/model.hpp"

namespace ctxlab {

/// The 0/1 matrix M with rows (U, s) and columns t in 2^X, M[(U,s), t] = [t|U = s].
///
/// Entries are computed on demand; column t is the stacked deterministic model delta^t.
class IncidenceMatrix {
 public:
  explicit IncidenceMatrix(MeasurementCover cover, const Limits& limits = {});

  const MeasurementCover& cover() const { return cover_; }
  /// D = sum_U 2^|U|
  std::size_t rows() const { return cover_.num_cells(); }
  /// N = 2^|X|
  std::size_t cols() const { return std::size_t{1} << cover_.num_variables(); }

  int operator()(std::size_t row, std::size_t col) const;
  /// (context, local assignment) labelling a row.
  std::pair<ContextIndex, AssignmentBits> row_cell(std::size_t row) const;
  /// Row indices holding a 1 in column t, one per context.
  std::vector<std::size_t> column_support(AssignmentBits t) const;

  template <typename Scalar>
  Matrix<Scalar> dense() const {
    Matrix<Scalar> m = Matrix<Scalar>::Zero(static_cast<Eigen::Index>(rows()),
                                            static_cast<Eigen::Index>(cols()));
    for (std::size_t t = 0; t < cols(); ++t) {
      for (auto r : column_support(t)) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)) = 1;
    }
    return m;
  }

 private:
  MeasurementCover cover_;
};

IncidenceMatrix incidence_matrix(const MeasurementCover& cover, const Limits& limits = {});

/// All t with t|U in S(U) for every context, in ascending bit order.
std::vector<GlobalAssignment> global_sections(const SupportModel& support,
                                              const Limits& limits = {});

/// A global section of the support restricting to s on context c, if any.
std::optional<GlobalAssignment> extend_to_global_section(const SupportModel& support,
                                                         ContextIndex c, AssignmentBits s,
                                                         const Limits& limits = {});

/// mu on 2^X with d_U = sum_t mu(t) delta^t_U; only positive weights are listed.
struct NoncontextualDecomposition {
  std::vector<std::pair<GlobalAssignment, Rational>> weights;
};

/// Solves M x = v, x >= 0 exactly. Absent iff the model is contextual.
std::optional<NoncontextualDecomposition> find_noncontextual_decomposition(
    const EmpiricalModel& model, const Limits& limits = {});

/// Rebuilds the model sum_t mu(t) delta^t.
EmpiricalModel reconstruct(const MeasurementCover& cover,
                           const NoncontextualDecomposition& decomposition);

enum class ContextualityClass {
  Noncontextual,
  ProbabilisticallyContextual,
  PossibilisticallyContextual,
  StronglyContextual,
};

std::string to_string(ContextualityClass value);

/// Strong or possibilistic contextuality of a support; empty when every support cell
/// extends to a global section, which leaves the probabilistic question open.
std::optional<ContextualityClass> classify_support(const SupportModel& support,
                                                   const Limits& limits = {});

/// Strongest class that applies. Strong and possibilistic tests run on the support
/// first, so the exact LP is only solved for possibilistically non-contextual models.
ContextualityClass classify(const EmpiricalModel& model, const Limits& limits = {});

/// Support cells that extend to no global section, as (context, bits) pairs.
std::vector<std::pair<ContextIndex, AssignmentBits>> unextendable_cells(
    const SupportModel& support, const Limits& limits = {});

}  // namespace ctxlab
