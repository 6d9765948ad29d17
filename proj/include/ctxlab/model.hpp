#pragma once

#include <span>
#include <vector>

#include "ctxlab/cover.hpp"
#include "ctxlab/rational.hpp"

namespace ctxlab {

/// A probability model {d_U}: one exact distribution over 2^U per context.
///
/// Row c is indexed by the local assignment bits of context c. Construction rejects
/// negative entries and rows that do not sum to exactly 1.
class EmpiricalModel {
 public:
  EmpiricalModel(MeasurementCover cover, std::vector<VectorQ> rows);

  /// Model whose stacked cell vector (length D) is `cells`.
  static EmpiricalModel from_cell_vector(MeasurementCover cover, const VectorQ& cells);

  const MeasurementCover& cover() const { return cover_; }
  const VectorQ& row(ContextIndex c) const { return rows_.at(c); }
  const std::vector<VectorQ>& rows() const { return rows_; }
  const Rational& probability(ContextIndex c, AssignmentBits s) const {
    return rows_.at(c)(static_cast<Eigen::Index>(s));
  }
  /// Probability of a set of local assignments of context c.
  Rational probability_of(ContextIndex c, std::span<const AssignmentBits> cells) const;

  /// Stacked vector v with v[(U,s)] = d_U(s).
  VectorQ cell_vector() const;

  friend bool operator==(const EmpiricalModel& a, const EmpiricalModel& b);

 private:
  MeasurementCover cover_;
  std::vector<VectorQ> rows_;
};

/// The possibilistic shadow of a model: a nonempty support S(U) per context.
class SupportModel {
 public:
  /// `supports[c]` lists local assignment bits of context c (any order, no repeats).
  SupportModel(MeasurementCover cover, std::vector<std::vector<AssignmentBits>> supports);

  const MeasurementCover& cover() const { return cover_; }
  /// Sorted ascending.
  const std::vector<AssignmentBits>& support(ContextIndex c) const { return supports_.at(c); }
  bool contains(ContextIndex c, AssignmentBits s) const { return masks_.at(c).at(s); }

  friend bool operator==(const SupportModel& a, const SupportModel& b) {
    return a.cover_ == b.cover_ && a.supports_ == b.supports_;
  }

 private:
  MeasurementCover cover_;
  std::vector<std::vector<AssignmentBits>> supports_;
  std::vector<std::vector<bool>> masks_;
};

/// delta^t: mass 1 on t|U in every context.
EmpiricalModel deterministic_model(const MeasurementCover& cover, const GlobalAssignment& t);

/// Convex combination; weights must be non-negative and sum to exactly 1.
EmpiricalModel mix(std::span<const EmpiricalModel> models, std::span<const Rational> weights);

SupportModel support_of(const EmpiricalModel& model);

/// Uniform distribution on each row's support.
EmpiricalModel uniform_on_support(const SupportModel& support);

/// True iff, for every pair of contexts, the marginals on their overlap agree exactly.
bool is_no_signalling(const EmpiricalModel& model);

}  // namespace ctxlab
