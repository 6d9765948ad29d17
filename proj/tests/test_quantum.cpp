#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ctxlab/contextuality.hpp"
#include "ctxlab/quantum.hpp"
#include "ctxlab/zoo.hpp"
#include "oracles.hpp"

using namespace ctxlab;

namespace {

constexpr double kTol = 1e-9;

ComplexVector random_amplitudes(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexVector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {g(rng), g(rng)};
  return v / v.norm();
}

}  // namespace

TEST(State, RejectsUnnormalizedAndOversized) {
  ComplexVector v(2);
  v << 1, 1;
  EXPECT_THROW(StateVector{v}, DomainError);
  EXPECT_NO_THROW(StateVector(v / std::sqrt(2.0)));
  EXPECT_THROW(StateVector(ComplexVector::Unit(32, 0)), DomainError);
}

TEST(State, StandardStates) {
  auto bell = bell_state().amplitudes();
  EXPECT_NEAR(bell(0).real(), 1 / std::sqrt(2.0), kTol);
  EXPECT_NEAR(std::abs(bell(1)), 0, kTol);
  EXPECT_NEAR(bell(3).real(), 1 / std::sqrt(2.0), kTol);
  auto ghz = ghz_state(3).amplitudes();
  EXPECT_EQ(ghz.size(), 8);
  EXPECT_NEAR(ghz(7).real(), 1 / std::sqrt(2.0), kTol);
  auto b = basis_state(0b10, 2).amplitudes();
  EXPECT_NEAR(b(2).real(), 1, kTol);
}

TEST(Observable, XYSpinProjectors) {
  for (double phi : {0.0, 0.4, std::numbers::pi / 2, 2.0}) {
    auto o = xy_spin_observable(phi);
    const auto& p0 = o.projector(0);
    ComplexMatrix sigma(2, 2);
    sigma << 0, std::polar(1.0, -phi), std::polar(1.0, phi), 0;
    ComplexMatrix expected = (ComplexMatrix::Identity(2, 2) + sigma) / 2;
    EXPECT_LT((p0 - expected).norm(), kTol) << phi;
    EXPECT_LT((o.projector(0) + o.projector(1) - ComplexMatrix::Identity(2, 2)).norm(), kTol);
  }
}

TEST(Observable, RejectsNonProjectors) {
  ComplexMatrix m(2, 2);
  m << 1, 1, 0, 0;
  EXPECT_THROW(DichotomicObservable::from_projector(m), DomainError);
  ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  EXPECT_THROW(DichotomicObservable(id, id), DomainError);
}

TEST(Born, BellSetupMatchesClosedForm) {
  auto setup = bell_setup();
  auto rows = born_probabilities(setup.state, setup.cover, setup.observables);
  const double third = std::numbers::pi / 3;
  const double angle[4][2] = {{0, 0}, {0, third}, {third, 0}, {third, third}};
  for (std::size_t c = 0; c < 4; ++c) {
    auto expected = oracle::bell_row(angle[c][0], angle[c][1]);
    for (int s = 0; s < 4; ++s) EXPECT_NEAR(rows[c](s), expected[s], kTol) << c << " " << s;
  }
  EXPECT_EQ(born_model(setup.state, setup.cover, setup.observables), zoo_model("bell"));
}

TEST(Born, RandomAnglesMatchClosedForm) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0, 2 * std::numbers::pi);
  auto cover = bell_scenario_cover(2, 2, 1);
  for (int i = 0; i < 20; ++i) {
    double angles[4] = {u(rng), u(rng), u(rng), u(rng)};
    ObservableAssignment obs;
    obs.assign("a", xy_spin_observable(angles[0]).on_site(0, 2));
    obs.assign("a'", xy_spin_observable(angles[1]).on_site(0, 2));
    obs.assign("b", xy_spin_observable(angles[2]).on_site(1, 2));
    obs.assign("b'", xy_spin_observable(angles[3]).on_site(1, 2));
    auto rows = born_probabilities(bell_state(), cover, obs);
    for (std::size_t c = 0; c < 4; ++c) {
      auto expected = oracle::bell_row(angles[c / 2], angles[2 + c % 2]);
      for (int s = 0; s < 4; ++s) EXPECT_NEAR(rows[c](s), expected[s], kTol);
    }
  }
}

TEST(Born, GhzSupport) {
  auto setup = ghz_setup();
  auto model = born_model(setup.state, setup.cover, setup.observables);
  EXPECT_EQ(support_of(model), zoo_support("ghz"));
  EXPECT_EQ(classify(model), ContextualityClass::StronglyContextual);
  auto full = ghz_setup(true);
  auto full_model = born_model(full.state, full.cover, full.observables);
  EXPECT_EQ(full_model.cover().num_contexts(), 8U);
  EXPECT_TRUE(is_no_signalling(full_model));
}

TEST(Born, ProductStateIsDeterministicOnZ) {
  auto cover = bell_scenario_cover(2, 1, 1);
  ObservableAssignment obs;
  obs.assign("a", z_observable().on_site(0, 2));
  obs.assign("b", z_observable().on_site(1, 2));
  auto m = born_model(basis_state(0b01, 2), cover, obs);
  EXPECT_EQ(m.probability(0, 0b01), 1);
  EXPECT_EQ(classify(m), ContextualityClass::Noncontextual);
}

TEST(Born, RationalizedRowsSumToOne) {
  std::vector<Eigen::VectorXd> rows{Eigen::Vector4d(0.1, 0.2, 0.3, 0.4), Eigen::Vector4d(1.0 / 3, 1.0 / 3, 1.0 / 3, 0)};
  MeasurementCover cover({"a", "b", "c"}, std::vector<std::vector<std::string>>{{"a", "b"}, {"b", "c"}});
  auto m = rationalize(cover, rows);
  EXPECT_EQ(m.probability(0, 0), Rational(1, 10));
  EXPECT_EQ(m.probability(1, 0), Rational(1, 3));
  EXPECT_EQ(m.row(1).sum(), 1);
  auto coarse = rationalize(cover, rows, 4);
  EXPECT_EQ(coarse.row(0).sum(), 1);
}

TEST(Born, OrderOfCommutingProjectorsIrrelevant) {
  std::mt19937_64 rng(53);
  StateVector state(random_amplitudes(4, rng));
  auto [cover, obs] = ks_observables(ks18_rays());
  // Reversing the variable list reverses the product order inside every context.
  auto names = cover.variables();
  std::reverse(names.begin(), names.end());
  std::vector<std::vector<std::string>> contexts;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    std::vector<std::string> ctx;
    for (auto v : cover.context(c)) ctx.push_back(cover.variable_name(v));
    contexts.push_back(ctx);
  }
  MeasurementCover reversed(names, contexts);
  auto a = born_probabilities(state, cover, obs);
  auto b = born_probabilities(state, reversed, obs);
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    for (AssignmentBits s = 0; s < 16; ++s) {
      // Bits are reversed between the two covers.
      AssignmentBits r = 0;
      for (int i = 0; i < 4; ++i) r |= ((s >> i) & 1U) << (3 - i);
      EXPECT_NEAR(a[c](static_cast<Eigen::Index>(s)), b[c](static_cast<Eigen::Index>(r)), kTol);
    }
  }
}

TEST(KochenSpecker, RaysGiveTheCover) {
  auto [cover, obs] = ks_observables(ks18_rays());
  EXPECT_EQ(cover.num_variables(), 18U);
  EXPECT_EQ(cover.num_contexts(), 9U);
  obs.check_compatible(cover);
  EXPECT_NO_THROW(ks18_setup(basis_state(0, 2)));
}

TEST(KochenSpecker, EveryStateIsStronglyContextual) {
  std::mt19937_64 rng(59);
  for (int i = 0; i < 5; ++i) {
    auto setup = ks18_setup(StateVector(random_amplitudes(4, rng)));
    auto model = born_model(setup.state, setup.cover, setup.observables);
    auto support = support_of(model);
    for (ContextIndex c = 0; c < 9; ++c) {
      for (AssignmentBits s : support.support(c)) EXPECT_EQ(std::popcount(s), 3);
    }
    EXPECT_EQ(classify(model), ContextualityClass::StronglyContextual);
  }
}

TEST(KochenSpecker, ThreeDimensionalBasis) {
  std::vector<std::vector<double>> rays{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, -1, 0}};
  auto [cover, obs] = ks_observables(rays, {"x", "y", "z", "p", "m"});
  EXPECT_EQ(cover.num_contexts(), 2U);
  EXPECT_EQ(cover.context_label(0), "(x,y,z)");
  EXPECT_EQ(cover.context_label(1), "(z,p,m)");
  EXPECT_THROW(ks_observables({{1, 0}, {2, 0}}), DomainError);
  EXPECT_THROW(ks_observables({{1, 0}, {1, 1}}), DomainError);
}

TEST(Compatibility, NonCommutingContextRejected) {
  MeasurementCover cover({"x", "y"}, std::vector<std::vector<std::string>>{{"x", "y"}});
  ObservableAssignment obs;
  obs.assign("x", xy_spin_observable(0));
  obs.assign("y", xy_spin_observable(std::numbers::pi / 2));
  EXPECT_THROW(obs.check_compatible(cover), DomainError);
  EXPECT_THROW(born_probabilities(StateVector(ComplexVector::Unit(2, 0)), cover, obs), DomainError);
  ObservableAssignment missing;
  missing.assign("x", z_observable());
  EXPECT_THROW(missing.check_compatible(cover), DomainError);
}
