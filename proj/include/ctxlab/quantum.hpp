#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ctxlab/model.hpp"

namespace ctxlab {

using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr std::size_t kMaxHilbertDimension = 16;
inline constexpr double kStructuralTolerance = 1e-10;
inline constexpr double kProbabilityTolerance = 1e-12;
inline constexpr std::uint64_t kDefaultMaxDenominator = std::uint64_t{1} << 20;

/// A normalized pure state.
class StateVector {
 public:
  explicit StateVector(ComplexVector amplitudes);

  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }

 private:
  ComplexVector amplitudes_;
};

/// A two-outcome projective measurement; outcome 0 corresponds to P0.
class DichotomicObservable {
 public:
  DichotomicObservable(ComplexMatrix p0, ComplexMatrix p1);

  /// (P, I - P)
  static DichotomicObservable from_projector(const ComplexMatrix& p0);

  std::size_t dimension() const { return static_cast<std::size_t>(p0_.rows()); }
  const ComplexMatrix& projector(int outcome) const { return outcome == 0 ? p0_ : p1_; }

  /// The same observable acting on one tensor factor of a system of `sites` qubits
  /// (site 0 is the most significant).
  DichotomicObservable on_site(std::size_t site, std::size_t sites) const;

 private:
  ComplexMatrix p0_;
  ComplexMatrix p1_;
};

/// Observables by variable name on a common Hilbert space.
class ObservableAssignment {
 public:
  void assign(const std::string& variable, DichotomicObservable observable);
  const DichotomicObservable& at(const std::string& variable) const;
  bool contains(const std::string& variable) const { return observables_.contains(variable); }
  std::size_t dimension() const;
  const std::map<std::string, DichotomicObservable>& observables() const { return observables_; }

  /// Throws DomainError if a variable of the cover is missing, dimensions disagree, or
  /// two observables of a context fail to commute.
  void check_compatible(const MeasurementCover& cover) const;

 private:
  std::map<std::string, DichotomicObservable> observables_;
};

/// d_U(s) = |prod_{x in U} P^x_{s(x)} psi|^2 in floating point, one row per context.
/// Projectors are applied in the cover's variable order.
std::vector<Eigen::VectorXd> born_probabilities(const StateVector& state,
                                                const MeasurementCover& cover,
                                                const ObservableAssignment& observables);

/// Snaps each entry to the nearest rational with denominator at most `max_denominator`
/// and gives the rounding residual of each row to its largest cell.
EmpiricalModel rationalize(const MeasurementCover& cover,
                           const std::vector<Eigen::VectorXd>& rows,
                           std::uint64_t max_denominator = kDefaultMaxDenominator);

EmpiricalModel born_model(const StateVector& state, const MeasurementCover& cover,
                          const ObservableAssignment& observables,
                          std::uint64_t max_denominator = kDefaultMaxDenominator);

/// (|00> + |11>)/sqrt(2)
StateVector bell_state();
/// (|0...0> + |1...1>)/sqrt(2) on n qubits.
StateVector ghz_state(std::size_t n);
/// Computational basis vector with the given bits (first qubit most significant).
StateVector basis_state(AssignmentBits bits, std::size_t qubits);

/// Spin along cos(phi) X + sin(phi) Y; outcome 0 is the +1 eigenvector.
DichotomicObservable xy_spin_observable(double phi);
/// Pauli Z; outcome 0 is |0>.
DichotomicObservable z_observable();

/// One variable per ray (named by `names`, or v0, v1, ...), one context per maximal
/// set of d mutually orthogonal rays, observable (|v><v|, I - |v><v|).
std::pair<MeasurementCover, ObservableAssignment> ks_observables(
    const std::vector<std::vector<double>>& rays, std::vector<std::string> names = {});

/// An 18-ray Kochen-Specker configuration in R^4, labelled A..R to match ks18_cover().
std::vector<std::vector<double>> ks18_rays();

struct QuantumSetup {
  StateVector state;
  MeasurementCover cover;
  ObservableAssignment observables;
};

/// Bell state on the (2,2,1) cover with a = b = 0 and a' = b' = pi/3.
QuantumSetup bell_setup();
/// GHZ(3) with X for unprimed and Y for primed settings, on ghz_cover() or, when
/// `all_contexts` is set, on the full (3,2,1) Bell cover.
QuantumSetup ghz_setup(bool all_contexts = false);
/// The 18 ray observables on the given state (dimension 4).
QuantumSetup ks18_setup(const StateVector& state);

}  // namespace ctxlab
