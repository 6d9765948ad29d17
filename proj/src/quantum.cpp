#include "ctxlab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "ctxlab/errors.hpp"
#include "ctxlab/zoo.hpp"

namespace ctxlab {

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

void check_dimension(Eigen::Index d) {
  if (d < 1 || static_cast<std::size_t>(d) > kMaxHilbertDimension) {
    throw DomainError("Hilbert space dimension " + std::to_string(d) + " is outside 1.." +
                      std::to_string(kMaxHilbertDimension));
  }
}

void check_projector(const ComplexMatrix& p) {
  if (max_abs(p * p - p) > kStructuralTolerance) throw DomainError("projector is not idempotent");
  if (max_abs(p - p.adjoint()) > kStructuralTolerance) {
    throw DomainError("projector is not self-adjoint");
  }
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix ray_projector(const std::vector<double>& ray) {
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(ray.data(), static_cast<Eigen::Index>(ray.size()));
  v.normalize();
  return (v * v.transpose()).cast<std::complex<double>>();
}

}  // namespace

StateVector::StateVector(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  check_dimension(amplitudes_.size());
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > kProbabilityTolerance) {
    throw DomainError("state vector is not normalized");
  }
}

DichotomicObservable::DichotomicObservable(ComplexMatrix p0, ComplexMatrix p1)
    : p0_(std::move(p0)), p1_(std::move(p1)) {
  if (p0_.rows() != p0_.cols() || p1_.rows() != p1_.cols() || p0_.rows() != p1_.rows()) {
    throw DomainError("projectors must be square matrices of equal size");
  }
  check_dimension(p0_.rows());
  check_projector(p0_);
  check_projector(p1_);
  const auto identity = ComplexMatrix::Identity(p0_.rows(), p0_.cols());
  if (max_abs(p0_ + p1_ - identity) > kStructuralTolerance) {
    throw DomainError("projectors do not sum to the identity");
  }
}

DichotomicObservable DichotomicObservable::from_projector(const ComplexMatrix& p0) {
  return DichotomicObservable(p0, ComplexMatrix::Identity(p0.rows(), p0.cols()) - p0);
}

DichotomicObservable DichotomicObservable::on_site(std::size_t site, std::size_t sites) const {
  if (site >= sites) throw DomainError("site index out of range");
  const auto left = Eigen::Index{1} << site;
  const auto right = Eigen::Index{1} << (sites - 1 - site);
  check_dimension(left * p0_.rows() * right);
  auto embed = [&](const ComplexMatrix& p) {
    return kron(kron(ComplexMatrix::Identity(left, left), p), ComplexMatrix::Identity(right, right));
  };
  return DichotomicObservable(embed(p0_), embed(p1_));
}

void ObservableAssignment::assign(const std::string& variable, DichotomicObservable observable) {
  if (!observables_.empty() && observable.dimension() != dimension()) {
    throw DomainError("observable for '" + variable + "' has a different dimension");
  }
  observables_.insert_or_assign(variable, std::move(observable));
}

const DichotomicObservable& ObservableAssignment::at(const std::string& variable) const {
  auto it = observables_.find(variable);
  if (it == observables_.end()) throw DomainError("no observable for variable '" + variable + "'");
  return it->second;
}

std::size_t ObservableAssignment::dimension() const {
  return observables_.empty() ? 0 : observables_.begin()->second.dimension();
}

void ObservableAssignment::check_compatible(const MeasurementCover& cover) const {
  for (const auto& name : cover.variables()) at(name);
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    auto ctx = cover.context(c);
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      for (std::size_t j = i + 1; j < ctx.size(); ++j) {
        const auto& p = at(cover.variable_name(ctx[i])).projector(0);
        const auto& q = at(cover.variable_name(ctx[j])).projector(0);
        if (max_abs(p * q - q * p) > kStructuralTolerance) {
          throw DomainError("observables " + cover.variable_name(ctx[i]) + " and " +
                            cover.variable_name(ctx[j]) + " in context " +
                            cover.context_label(c) + " do not commute");
        }
      }
    }
  }
}

std::vector<Eigen::VectorXd> born_probabilities(const StateVector& state,
                                                const MeasurementCover& cover,
                                                const ObservableAssignment& observables) {
  observables.check_compatible(cover);
  if (observables.dimension() != state.dimension()) {
    throw DomainError("state and observables have different dimensions");
  }
  std::vector<Eigen::VectorXd> rows;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    auto ctx = cover.context(c);
    Eigen::VectorXd row(static_cast<Eigen::Index>(cover.context_size(c)));
    for (AssignmentBits s = 0; s < cover.context_size(c); ++s) {
      ComplexVector v = state.amplitudes();
      for (std::size_t j = 0; j < ctx.size(); ++j) {
        int outcome = static_cast<int>((s >> (ctx.size() - 1 - j)) & 1U);
        v = observables.at(cover.variable_name(ctx[j])).projector(outcome) * v;
      }
      row(static_cast<Eigen::Index>(s)) = v.squaredNorm();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

EmpiricalModel rationalize(const MeasurementCover& cover,
                           const std::vector<Eigen::VectorXd>& rows,
                           std::uint64_t max_denominator) {
  std::vector<VectorQ> exact;
  for (const auto& row : rows) {
    VectorQ q(row.size());
    Eigen::Index largest = 0;
    for (Eigen::Index i = 0; i < row.size(); ++i) {
      q(i) = best_rational_approximation(std::max(0.0, row(i)), max_denominator);
      if (q(i) > q(largest)) largest = i;
    }
    q(largest) += 1 - q.sum();
    if (q(largest) < 0) throw DomainError("row cannot be rationalized to a distribution");
    exact.push_back(std::move(q));
  }
  return EmpiricalModel(cover, std::move(exact));
}

EmpiricalModel born_model(const StateVector& state, const MeasurementCover& cover,
                          const ObservableAssignment& observables, std::uint64_t max_denominator) {
  return rationalize(cover, born_probabilities(state, cover, observables), max_denominator);
}

StateVector bell_state() { return ghz_state(2); }

StateVector ghz_state(std::size_t n) {
  if (n < 2) throw DomainError("GHZ state needs at least two qubits");
  if ((std::size_t{1} << n) > kMaxHilbertDimension) {
    throw DomainError("GHZ state dimension exceeds " + std::to_string(kMaxHilbertDimension));
  }
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << n);
  v(0) = v(v.size() - 1) = 1.0 / std::numbers::sqrt2;
  return StateVector(v);
}

StateVector basis_state(AssignmentBits bits, std::size_t qubits) {
  if ((std::size_t{1} << qubits) > kMaxHilbertDimension) {
    throw DomainError("state dimension exceeds " + std::to_string(kMaxHilbertDimension));
  }
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << qubits);
  v(static_cast<Eigen::Index>(bits)) = 1;
  return StateVector(v);
}

DichotomicObservable xy_spin_observable(double phi) {
  // +1 eigenvector of cos(phi) X + sin(phi) Y is (1, e^{i phi}) / sqrt(2).
  ComplexVector plus(2);
  plus << 1.0 / std::numbers::sqrt2, std::polar(1.0 / std::numbers::sqrt2, phi);
  return DichotomicObservable::from_projector(plus * plus.adjoint());
}

DichotomicObservable z_observable() {
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1;
  return DichotomicObservable::from_projector(p0);
}

std::pair<MeasurementCover, ObservableAssignment> ks_observables(
    const std::vector<std::vector<double>>& rays, std::vector<std::string> names) {
  if (rays.empty()) throw DomainError("no rays given");
  const std::size_t d = rays.front().size();
  if (d < 1 || d > 8) throw DomainError("ray dimension must be between 1 and 8");
  if (names.empty()) {
    for (std::size_t i = 0; i < rays.size(); ++i) names.push_back("v" + std::to_string(i));
  }
  if (names.size() != rays.size()) throw DomainError("one name per ray is required");

  std::vector<Eigen::VectorXd> unit;
  for (const auto& r : rays) {
    if (r.size() != d) throw DomainError("rays have different dimensions");
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(d));
    if (v.norm() <= kStructuralTolerance) throw DomainError("zero vector is not a ray");
    unit.push_back(v.normalized());
  }
  const std::size_t n = unit.size();
  std::vector<std::vector<bool>> orthogonal(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double overlap = std::abs(unit[i].dot(unit[j]));
      if (std::abs(overlap - 1.0) <= kStructuralTolerance) {
        throw DomainError("rays " + names[i] + " and " + names[j] + " coincide");
      }
      orthogonal[i][j] = orthogonal[j][i] = overlap <= kStructuralTolerance;
    }
  }

  // Orthogonal sets of size d are bases, hence maximal.
  std::vector<std::vector<VariableIndex>> contexts;
  std::vector<VariableIndex> clique;
  auto extend = [&](auto&& self, VariableIndex from) -> void {
    if (clique.size() == d) {
      contexts.push_back(clique);
      return;
    }
    for (VariableIndex v = from; v < n; ++v) {
      if (std::all_of(clique.begin(), clique.end(), [&](VariableIndex u) { return orthogonal[u][v]; })) {
        clique.push_back(v);
        self(self, v + 1);
        clique.pop_back();
      }
    }
  };
  extend(extend, 0);
  if (contexts.empty()) throw DomainError("no orthonormal basis among the rays");

  MeasurementCover cover(names, std::move(contexts));
  ObservableAssignment observables;
  for (std::size_t i = 0; i < n; ++i) {
    observables.assign(names[i], DichotomicObservable::from_projector(ray_projector(rays[i])));
  }
  return {std::move(cover), std::move(observables)};
}

std::vector<std::vector<double>> ks18_rays() {
  return {{0, 0, 0, 1},  {0, 0, 1, 0},   {1, 1, 0, 0},  {1, -1, 0, 0}, {0, 1, 0, 0},
          {1, 0, 1, 0},  {1, 0, -1, 0},  {1, -1, 1, -1}, {1, -1, -1, 1}, {0, 0, 1, 1},
          {1, 1, 1, 1},  {0, 1, 0, -1},  {1, 0, 0, 1},  {1, 0, 0, -1}, {0, 1, -1, 0},
          {1, 1, -1, 1}, {1, 1, 1, -1},  {-1, 1, 1, 1}};
}

QuantumSetup bell_setup() {
  auto cover = bell_scenario_cover(2, 2, 1);
  const double third = std::numbers::pi / 3;
  ObservableAssignment obs;
  obs.assign("a", xy_spin_observable(0).on_site(0, 2));
  obs.assign("a'", xy_spin_observable(third).on_site(0, 2));
  obs.assign("b", xy_spin_observable(0).on_site(1, 2));
  obs.assign("b'", xy_spin_observable(third).on_site(1, 2));
  return {bell_state(), std::move(cover), std::move(obs)};
}

QuantumSetup ghz_setup(bool all_contexts) {
  auto cover = all_contexts ? bell_scenario_cover(3, 2, 1) : ghz_cover();
  ObservableAssignment obs;
  const char* sites[] = {"a", "b", "c"};
  for (std::size_t i = 0; i < 3; ++i) {
    obs.assign(sites[i], xy_spin_observable(0).on_site(i, 3));
    obs.assign(std::string(sites[i]) + "'", xy_spin_observable(std::numbers::pi / 2).on_site(i, 3));
  }
  return {ghz_state(3), std::move(cover), std::move(obs)};
}

QuantumSetup ks18_setup(const StateVector& state) {
  auto reference = ks18_cover();
  auto [cover, obs] = ks_observables(ks18_rays(), reference.variables());
  std::set<std::vector<VariableIndex>> found(cover.contexts().begin(), cover.contexts().end());
  std::set<std::vector<VariableIndex>> expected(reference.contexts().begin(),
                                                reference.contexts().end());
  if (found != expected) throw DomainError("ray orthogonality does not match the ks18 cover");
  return {state, std::move(reference), std::move(obs)};
}

}  // namespace ctxlab
