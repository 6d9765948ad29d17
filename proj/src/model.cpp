#include "ctxlab/model.hpp"

#include <algorithm>
#include <map>

#include "ctxlab/errors.hpp"

namespace ctxlab {

EmpiricalModel::EmpiricalModel(MeasurementCover cover, std::vector<VectorQ> rows)
    : cover_(std::move(cover)), rows_(std::move(rows)) {
  if (rows_.size() != cover_.num_contexts()) {
    throw DomainError("model has " + std::to_string(rows_.size()) + " rows for " +
                      std::to_string(cover_.num_contexts()) + " contexts");
  }
  for (ContextIndex c = 0; c < rows_.size(); ++c) {
    const auto& row = rows_[c];
    if (static_cast<std::size_t>(row.size()) != cover_.context_size(c)) {
      throw DomainError("row " + cover_.context_label(c) + " has wrong length");
    }
    Rational total = 0;
    for (const auto& p : row) {
      if (p < 0) throw DomainError("negative probability in row " + cover_.context_label(c));
      total += p;
    }
    if (total != 1) {
      throw DomainError("row " + cover_.context_label(c) + " sums to " + total.str() +
                        ", not 1");
    }
  }
}

EmpiricalModel EmpiricalModel::from_cell_vector(MeasurementCover cover, const VectorQ& cells) {
  if (static_cast<std::size_t>(cells.size()) != cover.num_cells()) {
    throw DomainError("cell vector has wrong length");
  }
  std::vector<VectorQ> rows;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    rows.push_back(cells.segment(static_cast<Eigen::Index>(cover.cell_offset(c)),
                                 static_cast<Eigen::Index>(cover.context_size(c))));
  }
  return EmpiricalModel(std::move(cover), std::move(rows));
}

Rational EmpiricalModel::probability_of(ContextIndex c,
                                        std::span<const AssignmentBits> cells) const {
  Rational total = 0;
  for (auto s : cells) total += probability(c, s);
  return total;
}

VectorQ EmpiricalModel::cell_vector() const {
  VectorQ v(static_cast<Eigen::Index>(cover_.num_cells()));
  for (ContextIndex c = 0; c < rows_.size(); ++c) {
    v.segment(static_cast<Eigen::Index>(cover_.cell_offset(c)), rows_[c].size()) = rows_[c];
  }
  return v;
}

bool operator==(const EmpiricalModel& a, const EmpiricalModel& b) {
  return a.cover_ == b.cover_ && a.rows_ == b.rows_;
}

SupportModel::SupportModel(MeasurementCover cover,
                           std::vector<std::vector<AssignmentBits>> supports)
    : cover_(std::move(cover)), supports_(std::move(supports)) {
  if (supports_.size() != cover_.num_contexts()) {
    throw DomainError("support model row count does not match the cover");
  }
  for (ContextIndex c = 0; c < supports_.size(); ++c) {
    auto& cells = supports_[c];
    if (cells.empty()) throw DomainError("empty support in row " + cover_.context_label(c));
    std::sort(cells.begin(), cells.end());
    if (std::adjacent_find(cells.begin(), cells.end()) != cells.end()) {
      throw DomainError("repeated support cell in row " + cover_.context_label(c));
    }
    std::vector<bool> mask(cover_.context_size(c), false);
    for (auto s : cells) {
      if (s >= mask.size()) throw DomainError("support cell out of range");
      mask[s] = true;
    }
    masks_.push_back(std::move(mask));
  }
}

EmpiricalModel deterministic_model(const MeasurementCover& cover, const GlobalAssignment& t) {
  if (t.size != cover.num_variables()) {
    throw DomainError("global assignment size does not match the cover");
  }
  std::vector<VectorQ> rows;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    VectorQ row = VectorQ::Zero(static_cast<Eigen::Index>(cover.context_size(c)));
    row(static_cast<Eigen::Index>(restrict_bits(t.bits, t.size, cover.context(c)))) = 1;
    rows.push_back(std::move(row));
  }
  return EmpiricalModel(cover, std::move(rows));
}

EmpiricalModel mix(std::span<const EmpiricalModel> models, std::span<const Rational> weights) {
  if (models.empty() || models.size() != weights.size()) {
    throw DomainError("mix needs one weight per model");
  }
  Rational total = 0;
  for (const auto& w : weights) {
    if (w < 0) throw DomainError("negative mixing weight");
    total += w;
  }
  if (total != 1) throw DomainError("mixing weights sum to " + total.str() + ", not 1");
  const auto& cover = models.front().cover();
  std::vector<VectorQ> rows;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    rows.push_back(VectorQ::Zero(static_cast<Eigen::Index>(cover.context_size(c))));
  }
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (!(models[i].cover() == cover)) throw DomainError("mixed models have different covers");
    if (weights[i] == 0) continue;
    for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
      rows[c] += weights[i] * models[i].row(c);
    }
  }
  return EmpiricalModel(cover, std::move(rows));
}

SupportModel support_of(const EmpiricalModel& model) {
  std::vector<std::vector<AssignmentBits>> supports;
  for (ContextIndex c = 0; c < model.cover().num_contexts(); ++c) {
    std::vector<AssignmentBits> cells;
    const auto& row = model.row(c);
    for (Eigen::Index s = 0; s < row.size(); ++s) {
      if (row(s) > 0) cells.push_back(static_cast<AssignmentBits>(s));
    }
    supports.push_back(std::move(cells));
  }
  return SupportModel(model.cover(), std::move(supports));
}

EmpiricalModel uniform_on_support(const SupportModel& support) {
  std::vector<VectorQ> rows;
  const auto& cover = support.cover();
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    VectorQ row = VectorQ::Zero(static_cast<Eigen::Index>(cover.context_size(c)));
    const Rational mass(1, support.support(c).size());
    for (auto s : support.support(c)) row(static_cast<Eigen::Index>(s)) = mass;
    rows.push_back(std::move(row));
  }
  return EmpiricalModel(cover, std::move(rows));
}

namespace {

/// Marginal of row c onto the ascending variable list `overlap`.
std::map<AssignmentBits, Rational> marginal(const EmpiricalModel& model, ContextIndex c,
                                            const std::vector<VariableIndex>& overlap) {
  const auto ctx = model.cover().context(c);
  LocalAssignment s{std::vector<VariableIndex>(ctx.begin(), ctx.end()), 0};
  std::map<AssignmentBits, Rational> out;
  for (AssignmentBits bits = 0; bits < model.cover().context_size(c); ++bits) {
    s.bits = bits;
    out[restrict(s, overlap).bits] += model.probability(c, bits);
  }
  return out;
}

}  // namespace

bool is_no_signalling(const EmpiricalModel& model) {
  const auto& cover = model.cover();
  for (ContextIndex i = 0; i < cover.num_contexts(); ++i) {
    for (ContextIndex j = i + 1; j < cover.num_contexts(); ++j) {
      std::vector<VariableIndex> overlap;
      std::set_intersection(cover.context(i).begin(), cover.context(i).end(),
                            cover.context(j).begin(), cover.context(j).end(),
                            std::back_inserter(overlap));
      if (overlap.empty()) continue;
      if (marginal(model, i, overlap) != marginal(model, j, overlap)) return false;
    }
  }
  return true;
}

}  // namespace ctxlab
