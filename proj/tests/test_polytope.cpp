#include <gtest/gtest.h>

#include <random>

#include "ctxlab/polytope.hpp"
#include "ctxlab/zoo.hpp"
#include "oracles.hpp"

using namespace ctxlab;

namespace {

using Names = std::vector<std::vector<std::string>>;

VectorQ vec(std::initializer_list<Rational> values) {
  VectorQ v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const auto& x : values) v(i++) = x;
  return v;
}

LinearSystem xy_example() {
  LinearSystem s({"x", "y"});
  s.add_inequality(vec({1, 0}), 0);
  s.add_inequality(vec({-1, 1}), 0);
  s.add_inequality(vec({1, 1}), 1);
  return s;
}

bool has_row(const LinearSystem& s, const VectorQ& a, const Rational& b) {
  auto target = canonical_row({a, b});
  for (const auto& r : s.rows()) {
    if (canonical_row(r) == target) return true;
  }
  return false;
}

const InequalitySet& bell_polytope() {
  static const InequalitySet set = noncontextual_polytope(bell_scenario_cover(2, 2, 1));
  return set;
}

Rational value_at(const RationalInequality& ineq, const std::vector<Rational>& col) {
  Rational v = 0;
  for (std::size_t i = 0; i < col.size(); ++i) v += ineq.coefficients(static_cast<Eigen::Index>(i)) * col[i];
  return v;
}

}  // namespace

TEST(FourierMotzkin, TwoVariableExample) {
  auto out = fm_eliminate(xy_example(), "x");
  EXPECT_EQ(out.variables(), std::vector<std::string>{"y"});
  EXPECT_EQ(out.num_rows(), 2U);
  EXPECT_TRUE(has_row(out, vec({1}), 0));
  EXPECT_TRUE(has_row(out, vec({2}), 1));
  auto pruned = remove_redundant(out);
  ASSERT_EQ(pruned.num_rows(), 1U);
  EXPECT_EQ(canonical_row(pruned.row(0)), (LinearRow{vec({2}), 1}));
}

TEST(FourierMotzkin, OneSidedVariableDropsItsRows) {
  LinearSystem s({"x", "y"});
  s.add_inequality(vec({1, 0}), 0);
  s.add_inequality(vec({1, -1}), 2);
  s.add_inequality(vec({0, 1}), -1);
  auto out = fm_eliminate(s, 0);
  ASSERT_EQ(out.num_rows(), 1U);
  EXPECT_TRUE(has_row(out, vec({1}), -1));
  EXPECT_THROW(fm_eliminate(s, "z"), DomainError);
}

TEST(FourierMotzkin, ProjectionMatchesPointwiseFeasibility) {
  // Random system in three variables, eliminate z, and compare membership of grid
  // points of the projection against feasibility of the fibre.
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    LinearSystem s({"x", "y", "z"});
    for (int i = 0; i < 6; ++i) {
      VectorQ a(3);
      for (int j = 0; j < 3; ++j) a(j) = static_cast<long>(rng() % 5) - 2;
      s.add_inequality(a, static_cast<long>(rng() % 5) - 3);
    }
    std::vector<std::size_t> vars{2};
    auto proj = project_out(s, vars);
    for (int px = -3; px <= 3; ++px) {
      for (int py = -3; py <= 3; ++py) {
        LinearSystem fixed = s;
        fixed.add_equality(vec({1, 0, 0}), px);
        fixed.add_equality(vec({0, 1, 0}), py);
        bool expected = is_feasible(fixed);
        EXPECT_EQ(proj.satisfied_by(vec({px, py})), expected) << trial << " " << px << " " << py;
      }
    }
  }
}

TEST(Canonical, ScalesToIntegersAndDeduplicates) {
  EXPECT_EQ(canonical_row({vec({Rational(1, 2), Rational(-3, 4)}), Rational(1, 4)}), (LinearRow{vec({2, -3}), 1}));
  LinearSystem s({"x", "y"});
  s.add_inequality(vec({2, 4}), 6);
  s.add_inequality(vec({1, 2}), 3);
  s.add_inequality(vec({0, 0}), -1);
  auto c = canonicalize(s);
  ASSERT_EQ(c.num_rows(), 1U);
  EXPECT_EQ(c.row(0), (LinearRow{vec({1, 2}), 3}));
}

TEST(Redundancy, ExamplesAndIdempotence) {
  LinearSystem s({"x", "y"});
  s.add_inequality(vec({1, 0}), 0);
  s.add_inequality(vec({0, 1}), 0);
  s.add_inequality(vec({1, 1}), -1);  // implied by the first two
  s.add_inequality(vec({-1, -1}), -4);
  auto r = remove_redundant(s);
  EXPECT_EQ(r.num_rows(), 3U);
  EXPECT_FALSE(has_row(r, vec({1, 1}), -1));
  EXPECT_EQ(remove_redundant(r), r);
  EXPECT_TRUE(implies(s, {vec({1, 1}), -1}));
  EXPECT_FALSE(implies(s, {vec({1, 0}), 1}));

  LinearSystem bad({"x"});
  bad.add_inequality(vec({1}), 1);
  bad.add_inequality(vec({-1}), 0);
  EXPECT_FALSE(is_feasible(bad));
  auto empty = remove_redundant(bad);
  ASSERT_EQ(empty.num_rows(), 1U);
  EXPECT_EQ(empty.row(0), (LinearRow{vec({0}), 1}));
}

TEST(Projection, TraceRecordsOrder) {
  auto system = symbolic_system(MeasurementCover({"a", "b"}, Names{{"a", "b"}}));
  EXPECT_EQ(system.num_variables(), 8U);
  EXPECT_EQ(system.variables()[0], "p[(a,b):00]");
  EXPECT_EQ(system.variables()[4], "x[00]");
  std::vector<std::size_t> vars{4, 5, 6, 7};
  ProjectionTrace trace;
  auto out = project_out(system, vars, {}, &trace);
  EXPECT_EQ(trace.order.size(), 4U);
  EXPECT_EQ(trace.rows.size(), 4U);
  EXPECT_EQ(out.num_variables(), 4U);
}

TEST(Polytope, SingleContextIsSimplex) {
  MeasurementCover cover({"a", "b"}, Names{{"a", "b"}});
  auto set = noncontextual_polytope(cover);
  EXPECT_EQ(set.inequalities.size(), 6U);  // four positivity rows and the normalization pair
  EXPECT_EQ(equality_pairs(set).size(), 1U);
  EXPECT_TRUE(contains(set, vec({Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)})));
  EXPECT_FALSE(contains(set, vec({Rational(1, 2), Rational(1, 4), Rational(1, 4), Rational(1, 4)})));
  EXPECT_FALSE(contains(set, vec({Rational(3, 2), Rational(-1, 2), 0, 0})));
}

TEST(Polytope, DisjointContextsAreProductOfSimplices) {
  MeasurementCover cover({"a", "b"}, Names{{"a"}, {"b"}});
  auto set = noncontextual_polytope(cover);
  EXPECT_EQ(set.inequalities.size(), 8U);
  EXPECT_EQ(equality_pairs(set).size(), 2U);
  EXPECT_TRUE(contains(set, vec({Rational(1, 3), Rational(2, 3), 1, 0})));
  EXPECT_FALSE(contains(set, vec({Rational(1, 3), Rational(1, 3), 1, 0})));
}

TEST(Polytope, BellMembershipMatchesLocalPolytope) {
  const auto& set = bell_polytope();
  auto cover = bell_scenario_cover(2, 2, 1);
  std::mt19937_64 rng(43);
  int inside = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<VectorQ> rows;
    for (int c = 0; c < 4; ++c) {
      VectorQ r(4);
      Rational total = 0;
      for (int s = 0; s < 4; ++s) {
        r(s) = static_cast<long>(rng() % 3);
        total += r(s);
      }
      if (total == 0) {
        r(0) = 1;
        total = 1;
      }
      rows.push_back(r / total);
    }
    // Mix with the maximally mixed table to produce many no-signalling points.
    EmpiricalModel m(cover, rows);
    if (i % 2 == 0) {
      std::vector<VectorQ> flat(4, VectorQ::Constant(4, Rational(1, 4)));
      std::vector<EmpiricalModel> parts{m, EmpiricalModel(cover, flat), zoo_model("pr-box")};
      Rational w(static_cast<long>(rng() % 5), 8);
      std::vector<Rational> weights{0, 1 - w, w};
      m = mix(parts, weights);
    }
    bool expected = oracle::bell_local(m);
    inside += expected ? 1 : 0;
    EXPECT_EQ(contains(set, m.cell_vector()), expected) << i;
  }
  EXPECT_GT(inside, 0);
  EXPECT_FALSE(contains(set, zoo_model("bell").cell_vector()));
}

TEST(Polytope, BellInequalitiesAreValidAndSupporting) {
  const auto& set = bell_polytope();
  auto cover = bell_scenario_cover(2, 2, 1);
  for (const auto& ineq : set.inequalities) {
    bool tight = false;
    for (AssignmentBits t = 0; t < 16; ++t) {
      auto v = value_at(ineq, oracle::delta_column(cover, t));
      EXPECT_LE(v, ineq.bound);
      tight = tight || v == ineq.bound;
    }
    EXPECT_TRUE(tight) << format_inequality(cover, ineq);
  }
}

TEST(Polytope, LogicalSetIsConsistent) {
  auto cover = bell_scenario_cover(2, 2, 1);
  auto logical = complete_logical_bell_set(cover);
  EXPECT_FALSE(logical.empty());
  auto bell = zoo_model("bell");
  Rational worst = 0;
  for (const auto& l : logical) {
    EXPECT_TRUE(l.is_k_consistent(4));
    worst = std::max(worst, evaluate_logical(bell, l).violation);
  }
  EXPECT_GT(worst, 0);
}

TEST(Polytope, VariableLimit) {
  Limits tight;
  tight.max_polytope_variables = 3;
  EXPECT_THROW(noncontextual_polytope(bell_scenario_cover(2, 2, 1), tight), LimitExceeded);
}

TEST(Correlation, SingleContextIsInterval) {
  MeasurementCover cover({"a", "b"}, Names{{"a", "b"}});
  auto vertices = correlation_vertices(cover);
  EXPECT_EQ(vertices, (std::vector<std::vector<int>>{{1}, {-1}}));
  auto facets = correlation_polytope(cover);
  ASSERT_EQ(facets.size(), 2U);
  EXPECT_NE(std::find(facets.begin(), facets.end(), CorrelationInequality{{1}, 1}), facets.end());
  EXPECT_NE(std::find(facets.begin(), facets.end(), CorrelationInequality{{-1}, 1}), facets.end());
}

TEST(Correlation, ChshScenario) {
  auto cover = bell_scenario_cover(2, 2, 1);
  EXPECT_EQ(correlation_vertices(cover).size(), 8U);
  auto facets = correlation_polytope(cover);
  EXPECT_EQ(facets.size(), 16U);
  int chsh = 0;
  for (const auto& f : facets) {
    EXPECT_FALSE(correlation_counterexample(cover, f).has_value());
    int nonzero = 0;
    for (const auto& c : f.coefficients) nonzero += c != 0 ? 1 : 0;
    if (nonzero == 4) {
      ++chsh;
      EXPECT_EQ(f.bound, 2);
      auto logical = correlation_to_logical(cover, f);
      EXPECT_TRUE(logical.is_k_consistent(4));
    } else {
      EXPECT_EQ(nonzero, 1);
      EXPECT_EQ(f.bound, 1);
    }
  }
  EXPECT_EQ(chsh, 8);
}

TEST(Format, ReadableRows) {
  auto cover = bell_scenario_cover(2, 2, 1);
  VectorQ k = VectorQ::Zero(16);
  k(1) = Rational(3, 2);
  k(11) = -1;
  EXPECT_EQ(format_inequality(cover, RationalInequality{k, 1}), "3/2 p[(a,b):01] - p[(a',b):11] <= 1");
  EXPECT_EQ(format_inequality(cover, CorrelationInequality{{1, 1, 1, -1}, 2}),
            "E(a,b) + E(a,b') + E(a',b) - E(a',b') <= 2");
}
