// Runs every acceptance criterion twice over: once through the library's selftest and
// once against the brute-force references in oracles.hpp. Prints one line per
// criterion and exits nonzero if any fails.

#include <chrono>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "ctxlab/contextuality.hpp"
#include "ctxlab/inequalities.hpp"
#include "ctxlab/polytope.hpp"
#include "ctxlab/quantum.hpp"
#include "ctxlab/selftest.hpp"
#include "ctxlab/zoo.hpp"
#include "oracles.hpp"

using namespace ctxlab;

namespace {

using Rng = std::mt19937_64;

struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  template <typename A, typename B>
  void expect_eq(const A& got, const B& want, const std::string& what) {
    if (!(got == want)) {
      std::ostringstream out;
      out << what << ": got " << got << ", want " << want;
      failures.push_back(out.str());
    }
  }
};

std::vector<std::size_t> ctx_of(const MeasurementCover& cover, ContextIndex c) {
  return {cover.context(c).begin(), cover.context(c).end()};
}

std::vector<std::vector<AssignmentBits>> rows_of(const SupportModel& s) {
  std::vector<std::vector<AssignmentBits>> rows;
  for (ContextIndex c = 0; c < s.cover().num_contexts(); ++c) rows.push_back(s.support(c));
  return rows;
}

/// Events and their probabilities computed from satisfying sets only.
std::vector<oracle::Event> events_of(const LogicalBellInequality& ineq) {
  std::vector<oracle::Event> events;
  for (const auto& t : ineq.terms()) {
    events.push_back({t.multiplicity, t.formula.context(), satisfying_assignments(t.formula)});
  }
  return events;
}

Rational lhs_of(const EmpiricalModel& m, const std::vector<oracle::Event>& events) {
  Rational total = 0;
  for (const auto& e : events) {
    auto c = *m.cover().find_context(e.context);
    for (auto s : e.cells) total += Rational(static_cast<long>(e.k)) * m.probability(c, s);
  }
  return total;
}

std::uint64_t cardinality_of(const std::vector<oracle::Event>& events) {
  std::uint64_t n = 0;
  for (const auto& e : events) n += e.k;
  return n;
}

/// Sum_s (-1)^{popcount s} p(s).
Rational expectation(const EmpiricalModel& m, ContextIndex c) {
  Rational e = 0;
  for (AssignmentBits s = 0; s < m.cover().context_size(c); ++s) {
    e += std::popcount(s) % 2 == 0 ? m.probability(c, s) : -m.probability(c, s);
  }
  return e;
}

VectorQ random_row(Rng& rng, std::size_t size, const Rational& total) {
  VectorQ r(static_cast<Eigen::Index>(size));
  Rational sum = 0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    r(i) = 1 + static_cast<long>(rng() % 9);
    sum += r(i);
  }
  return r * (total / sum);
}

/// Born probability of outcome s for GHZ(3) measured with spins in the XY plane.
double ghz_probability(const double phi[3], AssignmentBits s) {
  std::complex<double> zeros = 1;
  std::complex<double> ones = 1;
  for (int j = 0; j < 3; ++j) {
    const double sign = (s >> (2 - j) & 1U) ? -1 : 1;
    zeros *= 1 / std::sqrt(2.0);
    ones *= sign * std::polar(1.0, -phi[j]) / std::sqrt(2.0);
  }
  return std::norm((zeros + ones) / std::sqrt(2.0));
}

// 1
void bell_table(Check& check) {
  auto m = zoo_model("bell");
  const auto& cover = m.cover();
  check.expect(!oracle::bell_local(m), "table lies in the local polytope");
  auto support = support_of(m);
  auto sections = oracle::global_sections(cover, rows_of(support));
  for (ContextIndex c = 0; c < 4; ++c) {
    for (auto s : support.support(c)) {
      bool extends = false;
      for (auto t : sections) extends = extends || oracle::restrict_to(t, 4, ctx_of(cover, c)) == s;
      check.expect(extends, "support cell without a global section");
    }
  }
  std::vector<oracle::Event> chsh;
  for (ContextIndex c = 0; c < 4; ++c) chsh.push_back({1, ctx_of(cover, c), oracle::parity_cells(2, c < 3)});
  check.expect_eq(oracle::max_sat(chsh, 4), std::uint64_t{3}, "max_sat of the CHSH formulas");
  check.expect_eq(lhs_of(m, chsh) - 3, Rational(1, 4), "logical violation");
  check.expect_eq(expectation(m, 0) + expectation(m, 1) + expectation(m, 2) - expectation(m, 3), Rational(5, 2),
                  "CHSH value");
  check.expect_eq(evaluate_logical(m, correlation_sign_inequality(m)).violation, Rational(1, 4),
                  "library violation");
  check.expect_eq(to_string(classify(m)), to_string(ContextualityClass::ProbabilisticallyContextual), "class");
}

// 2
void hardy(Check& check) {
  auto support = zoo_support("hardy");
  const auto& cover = support.cover();
  auto sections = oracle::global_sections(cover, rows_of(support));
  for (auto t : sections) check.expect(oracle::restrict_to(t, 4, ctx_of(cover, 0)) != 0, "(0,0) extends");
  auto witness = possibilistic_witness_inequality(support, 0, 0b00);
  auto events = events_of(witness);
  check.expect_eq(oracle::max_sat(events, 4), std::uint64_t{3}, "witness max_sat");
  check.expect_eq(witness.bound(), std::uint64_t{3}, "witness bound");
  std::vector<TaggedFormula> formulas;
  for (const auto& t : witness.terms()) formulas.push_back(t.formula);
  Rng rng(101);
  for (int i = 0; i < 20; ++i) {
    Rational p(1 + static_cast<long>(rng() % 99), 100);
    std::vector<VectorQ> rows;
    for (ContextIndex c = 0; c < 4; ++c) {
      VectorQ row = VectorQ::Zero(4);
      const auto& cells = support.support(c);
      if (c == 0) {
        row(0) = p;
        auto rest = random_row(rng, 3, 1 - p);
        for (int j = 0; j < 3; ++j) row(j + 1) = rest(j);
      } else {
        auto w = random_row(rng, cells.size(), 1);
        for (std::size_t j = 0; j < cells.size(); ++j) row(static_cast<Eigen::Index>(cells[j])) = w(static_cast<Eigen::Index>(j));
      }
      rows.push_back(row);
    }
    EmpiricalModel m(cover, rows);
    check.expect_eq(lhs_of(m, events) - 3, p, "witness violation");
    check.expect_eq(evaluate_logical(m, witness).violation, p, "library witness violation");
    check.expect_eq(chsh_functional(m, formulas) - 2, 2 * p, "CHSH-form violation");
  }
}

// 3
void ghz(Check& check) {
  auto setup = ghz_setup();
  auto model = born_model(setup.state, setup.cover, setup.observables);
  const auto& cover = model.cover();
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    double phi[3];
    auto ctx = ctx_of(cover, c);
    for (int j = 0; j < 3; ++j) phi[j] = ctx[j] % 2 == 1 ? std::numbers::pi / 2 : 0.0;
    for (AssignmentBits s = 0; s < 8; ++s) {
      double want = ghz_probability(phi, s);
      double got = static_cast<double>(model.probability(c, s));
      check.expect(std::abs(want - got) < 1e-9, "Born probability of " + cover.context_label(c));
      check.expect_eq(model.probability(c, s) > 0, want > 1e-9, "support of " + cover.context_label(c));
    }
  }
  check.expect(support_of(model) == zoo_support("ghz"), "support differs from the reference table");
  check.expect(oracle::global_sections(cover, rows_of(support_of(model))).empty(), "global section exists");
  check.expect_eq(to_string(classify(model)), to_string(ContextualityClass::StronglyContextual), "class");
  auto canonical = canonical_support_inequality(model);
  auto events = events_of(canonical);
  check.expect_eq(oracle::max_sat(events, 6), std::uint64_t{3}, "canonical max_sat");
  check.expect_eq(lhs_of(model, events) - Rational(static_cast<long>(canonical.bound())), 1, "canonical violation");
  check.expect(evaluate_logical(model, canonical).maximal, "not maximal");
}

// 4
void pr_box(Check& check) {
  auto m = zoo_model("pr-box");
  check.expect(oracle::global_sections(m.cover(), rows_of(support_of(m))).empty(), "global section exists");
  check.expect_eq(to_string(classify(m)), to_string(ContextualityClass::StronglyContextual), "class");
  const Rational want[4] = {1, 1, 1, -1};
  auto e = expectation_vector(m);
  for (ContextIndex c = 0; c < 4; ++c) {
    check.expect_eq(expectation(m, c), want[c], "oracle expectation");
    check.expect_eq(e.values(static_cast<Eigen::Index>(c)), want[c], "library expectation");
  }
  check.expect_eq(evaluate_correlation(e, {{1, 1, 1, -1}, 2}), 4, "CHSH value");
}

// 5
void ks18(Check& check) {
  auto cover = ks18_cover();
  std::vector<oracle::Event> one;
  for (ContextIndex c = 0; c < 9; ++c) one.push_back({1, ctx_of(cover, c), oracle::one_hot_cells(4)});
  check.expect_eq(oracle::max_sat(one, 18), std::uint64_t{8}, "max_sat of ONE");
  Rng rng(103);
  std::normal_distribution<double> g;
  for (int i = 0; i < 12; ++i) {
    ComplexVector v(4);
    for (int j = 0; j < 4; ++j) v(j) = {g(rng), g(rng)};
    auto setup = ks18_setup(StateVector(v / v.norm()));
    auto model = born_model(setup.state, setup.cover, setup.observables);
    check.expect(oracle::global_sections(cover, rows_of(support_of(model))).empty(), "global section exists");
    check.expect_eq(to_string(classify(model)), to_string(ContextualityClass::StronglyContextual), "class");
    auto canonical = canonical_support_inequality(model);
    auto events = events_of(canonical);
    check.expect_eq(lhs_of(model, events), Rational(static_cast<long>(cardinality_of(events))), "lhs");
    check.expect(Rational(static_cast<long>(canonical.bound())) < lhs_of(model, events), "not violated");
    check.expect(evaluate_logical(model, canonical).maximal, "not maximal");
  }
}

// 6
void peres_mermin(Check& check) {
  auto cover = peres_mermin_cover();
  std::vector<oracle::Event> parities;
  for (ContextIndex c = 0; c < 6; ++c) parities.push_back({1, ctx_of(cover, c), oracle::parity_cells(3, c >= 3)});
  check.expect_eq(oracle::max_sat(parities, 9), std::uint64_t{5}, "max_sat of the parity formulas");
  auto model = zoo_model("peres-mermin");
  check.expect(support_of(model) == SupportModel(cover, rows_of(support_of(model))), "support");
  auto canonical = canonical_support_inequality(model);
  auto events = events_of(canonical);
  check.expect_eq(oracle::max_sat(events, 9), canonical.bound(), "bound is not max_sat");
  check.expect_eq(lhs_of(model, events), Rational(6), "lhs");
  check.expect(evaluate_logical(model, canonical).maximal, "not maximal");
}

// 7
void werner_wolf(Check& check) {
  auto fixture = std::get<CorrelationFixture>(zoo("werner-wolf-a2"));
  const auto& cover = fixture.cover;
  auto logical = correlation_to_logical(cover, fixture.inequality).normalized();
  check.expect_eq(logical.bound(), std::uint64_t{7}, "bound");
  auto events = events_of(logical);
  check.expect_eq(events.size(), std::size_t{8}, "term count");
  for (std::size_t i = 0; i < events.size() && i < 8; ++i) {
    check.expect_eq(events[i].k, std::uint64_t{i < 7 ? 1U : 3U}, "multiplicity");
    check.expect(events[i].context == ctx_of(cover, i), "context order");
    check.expect(events[i].cells == oracle::parity_cells(3, i < 7), "parity formula");
  }
  check.expect_eq(oracle::max_sat(events, 6), std::uint64_t{7}, "max_sat");
  for (unsigned mask = 0; mask < 128; ++mask) {
    if (std::popcount(mask) != 5) continue;
    std::vector<oracle::Event> group{{1, ctx_of(cover, 7), oracle::parity_cells(3, false)}};
    for (unsigned i = 0; i < 7; ++i) {
      if (mask >> i & 1U) group.push_back({1, ctx_of(cover, i), oracle::parity_cells(3, true)});
    }
    check.expect(oracle::max_sat(group, 6) < 6, "five-subset satisfiable");
  }
}

// 8
void vertex4(Check& check) {
  auto fixture = std::get<CorrelationFixture>(zoo("werner-wolf-a2"));
  auto model = zoo_model("vertex4-322");
  check.expect(model.cover() == fixture.cover, "cover");
  Rational value = 0;
  for (ContextIndex c = 0; c < 8; ++c) value += Rational(fixture.inequality.coefficients[c]) * expectation(model, c);
  check.expect(value <= Rational(fixture.inequality.bound), "correlation inequality violated");
  auto canonical = canonical_support_inequality(model);
  auto events = events_of(canonical);
  check.expect_eq(oracle::max_sat(events, 6), std::uint64_t{7}, "canonical max_sat");
  check.expect_eq(canonical.bound(), std::uint64_t{7}, "canonical bound");
  check.expect_eq(lhs_of(model, events), Rational(8), "canonical lhs");
  check.expect(evaluate_logical(model, canonical).maximal, "not maximal");
}

// 9
void completeness(Check& check) {
  auto cover = bell_scenario_cover(2, 2, 1);
  auto set = noncontextual_polytope(cover);
  auto pr = zoo_model("pr-box");
  auto bell = zoo_model("bell");
  Rng rng(107);
  int inside = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<EmpiricalModel> parts;
    std::vector<Rational> weights;
    for (int j = 0; j < 3; ++j) parts.push_back(deterministic_model(cover, {4, rng() % 16}));
    parts.push_back(i % 2 == 0 ? pr : bell);
    auto w = random_row(rng, 4, 1);
    if (i % 4 == 3) {
      // Signalling rows: independent random distributions.
      std::vector<VectorQ> rows;
      for (int c = 0; c < 4; ++c) rows.push_back(random_row(rng, 4, 1));
      parts.push_back(EmpiricalModel(cover, rows));
      w = random_row(rng, 5, 1);
    }
    for (Eigen::Index j = 0; j < w.size(); ++j) weights.push_back(w(j));
    auto m = mix(parts, weights);
    bool want = oracle::bell_local(m);
    inside += want ? 1 : 0;
    check.expect_eq(contains(set, m.cell_vector()), want, "membership of random model " + std::to_string(i));
    check.expect_eq(find_noncontextual_decomposition(m).has_value(), want, "LP of random model " + std::to_string(i));
  }
  check.expect(inside > 0 && inside < 200, "random models all on one side");
  auto logical = complete_logical_bell_set(cover);
  check.expect(!logical.empty(), "empty logical set");
  bool bell_violates = false;
  bool pr_violates = false;
  for (const auto& l : logical) {
    auto events = events_of(l);
    const auto k = Rational(static_cast<long>(l.bound()));
    check.expect(oracle::max_sat(events, 4) <= l.bound(), "member is not K-consistent");
    bell_violates = bell_violates || lhs_of(bell, events) > k;
    pr_violates = pr_violates || lhs_of(pr, events) > k;
    for (AssignmentBits t = 0; t < 16; ++t) {
      check.expect(lhs_of(deterministic_model(cover, {4, t}), events) <= k, "deterministic model violates");
    }
  }
  check.expect(bell_violates, "Bell table violates no member");
  check.expect(pr_violates, "PR box violates no member");
}

// 10
void correlation(Check& check) {
  auto cover = bell_scenario_cover(2, 2, 1);
  std::vector<std::vector<int>> vertices;
  for (AssignmentBits t = 0; t < 16; ++t) {
    std::vector<int> eta;
    for (ContextIndex c = 0; c < 4; ++c) {
      eta.push_back(std::popcount(oracle::restrict_to(t, 4, ctx_of(cover, c))) % 2 == 0 ? 1 : -1);
    }
    if (std::find(vertices.begin(), vertices.end(), eta) == vertices.end()) vertices.push_back(eta);
  }
  auto facets = correlation_polytope(cover);
  int chsh = 0;
  Rational best_pr = -100;
  auto pr = zoo_model("pr-box");
  for (const auto& f : facets) {
    int tight = 0;
    for (const auto& eta : vertices) {
      Integer v = 0;
      for (std::size_t c = 0; c < 4; ++c) v += f.coefficients[c] * eta[c];
      check.expect(v <= f.bound, "facet violated by a vertex");
      tight += v == f.bound ? 1 : 0;
    }
    check.expect(tight >= 4, "facet meets fewer than 4 vertices");
    int minus = 0;
    bool unit = true;
    for (const auto& l : f.coefficients) {
      unit = unit && (l == 1 || l == -1);
      minus += l == -1 ? 1 : 0;
    }
    if (unit && f.bound == 2 && minus % 2 == 1) ++chsh;
    Rational value = 0;
    for (ContextIndex c = 0; c < 4; ++c) value += Rational(f.coefficients[c]) * expectation(pr, c);
    best_pr = std::max(best_pr, value);
  }
  check.expect_eq(chsh, 8, "CHSH-type facets");
  check.expect_eq(best_pr, 4, "PR box value");
}

// 11
void properties(Check& check) {
  Rng rng(109);
  // Validity on every delta^t against K-consistency, over random parity/point multisets.
  for (int i = 0; i < 100; ++i) {
    auto cover = bell_scenario_cover(2 + rng() % 2, 2, 1);
    FormulaMultiset terms;
    std::vector<oracle::Event> events;
    const int count = 1 + static_cast<int>(rng() % 5);
    for (int j = 0; j < count; ++j) {
      auto c = rng() % cover.num_contexts();
      auto ctx = ctx_of(cover, c);
      std::vector<AssignmentBits> cells;
      for (AssignmentBits s = 0; s < cover.context_size(c); ++s) {
        if (rng() % 2 == 0) cells.push_back(s);
      }
      std::uint64_t k = 1 + rng() % 3;
      terms.push_back({k, TaggedFormula(ctx, formula_for_cells(cells, ctx))});
      events.push_back({k, ctx, cells});
    }
    std::uint64_t bound = rng() % (cardinality(terms) + 1);
    bool valid = true;
    for (AssignmentBits t = 0; t < (AssignmentBits{1} << cover.num_variables()); ++t) {
      std::uint64_t total = 0;
      for (const auto& e : events) total += oracle::holds(e, t, cover.num_variables()) ? e.k : 0;
      valid = valid && total <= bound;
    }
    auto ineq = LogicalBellInequality::unchecked(terms, bound);
    check.expect_eq(ineq.is_k_consistent(cover.num_variables()), valid, "validity vs K-consistency");
  }
  // The collected logical form is a positive multiple of k . v - M.
  auto cover = bell_scenario_cover(2, 2, 1);
  for (int i = 0; i < 200; ++i) {
    std::vector<Integer> k(16);
    for (auto& x : k) x = static_cast<long>(rng() % 7) - 3;
    Integer m;
    bool first = true;
    for (AssignmentBits t = 0; t < 16; ++t) {
      auto col = oracle::delta_column(cover, t);
      Integer v = 0;
      for (std::size_t j = 0; j < 16; ++j) v += col[j] == 1 ? k[j] : Integer(0);
      if (first || v > m) m = v;
      first = false;
    }
    m += static_cast<long>(rng() % 2);
    auto logical = rational_to_logical(cover, k, m);
    std::vector<VectorQ> rows;
    for (int c = 0; c < 4; ++c) rows.push_back(random_row(rng, 4, 1));
    EmpiricalModel model(cover, rows);
    Rational x = -Rational(m);
    for (std::size_t j = 0; j < 16; ++j) x += Rational(k[j]) * model.cell_vector()(static_cast<Eigen::Index>(j));
    auto events = events_of(logical);
    Rational y = lhs_of(model, events) - Rational(static_cast<long>(logical.bound()));
    // Every context minimum and every threshold gap is a multiple of g, so y = x / g.
    Integer g = 0;
    Integer slack = m;
    for (ContextIndex c = 0; c < 4; ++c) {
      Integer lo = k[cover.cell_index(c, 0)];
      for (AssignmentBits s = 0; s < 4; ++s) lo = std::min(lo, k[cover.cell_index(c, s)]);
      slack -= lo;
      for (AssignmentBits s = 0; s < 4; ++s) g = gcd(g, k[cover.cell_index(c, s)] - lo);
    }
    g = gcd(g, slack);
    if (g == 0) g = 1;
    check.expect_eq(y * Rational(g), x, "collected identity");
  }
  // Projection soundness: points of the projection extend, points outside do not.
  for (int i = 0; i < 10; ++i) {
    LinearSystem s({"x", "y", "z", "w"});
    for (int j = 0; j < 7; ++j) {
      VectorQ a(4);
      for (int v = 0; v < 4; ++v) a(v) = static_cast<long>(rng() % 5) - 2;
      s.add_inequality(a, static_cast<long>(rng() % 5) - 4);
    }
    std::vector<std::size_t> vars{3};
    auto proj = project_out(s, vars);
    for (int p = 0; p < 100; ++p) {
      VectorQ point(3);
      for (int v = 0; v < 3; ++v) point(v) = Rational(static_cast<long>(rng() % 13) - 6, 2);
      LinearSystem fixed = s;
      for (int v = 0; v < 3; ++v) {
        VectorQ e = VectorQ::Zero(4);
        e(v) = 1;
        fixed.add_equality(e, point(v));
      }
      check.expect_eq(proj.satisfied_by(point), is_feasible(fixed), "projection soundness");
    }
  }
}

struct Criterion {
  int id;
  std::function<void(Check&)> oracle_check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{{1, bell_table}, {2, hardy},        {3, ghz},         {4, pr_box},
                                        {5, ks18},       {6, peres_mermin}, {7, werner_wolf}, {8, vertex4},
                                        {9, completeness}, {10, correlation}, {11, properties}};
  int failed = 0;
  for (const auto& criterion : criteria) {
    auto library = run_criterion(criterion.id);
    Check check;
    auto start = std::chrono::steady_clock::now();
    try {
      criterion.oracle_check(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = library.passed && check.failures.empty();
    failed += ok ? 0 : 1;
    std::printf("AC%-2d %s  %s (library %.2f s of %.0f s, reference %.2f s): %s\n", criterion.id, ok ? "PASS" : "FAIL",
                library.title.c_str(), library.seconds, library.budget_seconds, seconds, library.detail.c_str());
    if (!library.passed) std::printf("      library: %s\n", format_result(library).c_str());
    for (std::size_t i = 0; i < check.failures.size() && i < 5; ++i) {
      std::printf("      reference: %s\n", check.failures[i].c_str());
    }
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
