#include "ctxlab/selftest.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "ctxlab/contextuality.hpp"
#include "ctxlab/inequalities.hpp"
#include "ctxlab/polytope.hpp"
#include "ctxlab/quantum.hpp"
#include "ctxlab/zoo.hpp"

namespace ctxlab {

namespace {

using Rng = std::mt19937_64;

/// Collects failed expectations for one criterion.
class Check {
 public:
  void expect(bool condition, const std::string& what) {
    if (!condition) failures_.push_back(what);
  }
  template <typename T>
  void expect_eq(const T& actual, const T& expected, const std::string& what) {
    if (!(actual == expected)) {
      std::ostringstream out;
      out << what << ": got " << actual << ", expected " << expected;
      failures_.push_back(out.str());
    }
  }
  void note(const std::string& text) { notes_.push_back(text); }
  bool ok() const { return failures_.empty(); }
  std::string detail() const {
    const auto& lines = failures_.empty() ? notes_ : failures_;
    std::string out;
    for (const auto& l : lines) out += (out.empty() ? "" : "; ") + l;
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

long long uniform_signed(Rng& rng, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

/// Positive integer weights normalized to sum `total`.
VectorQ random_distribution(Rng& rng, std::size_t size, const Rational& total = 1) {
  VectorQ w(static_cast<Eigen::Index>(size));
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = Rational(uniform(rng, 1, 20));
  Rational sum = w.sum();
  return w * (total / sum);
}

EmpiricalModel random_table(const MeasurementCover& cover, Rng& rng) {
  std::vector<VectorQ> rows;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    VectorQ row = random_distribution(rng, cover.context_size(c));
    // Some zero cells so that supports vary.
    for (Eigen::Index i = 0; i < row.size(); ++i) {
      if (uniform(rng, 0, 3) == 0) row(i) = 0;
    }
    if (row.sum() == 0) row(0) = 1;
    rows.push_back(row / row.sum());
  }
  return EmpiricalModel(cover, std::move(rows));
}

EmpiricalModel random_local_model(const MeasurementCover& cover, Rng& rng) {
  const auto n = cover.num_variables();
  std::size_t k = uniform(rng, 1, 5);
  std::vector<EmpiricalModel> parts;
  for (std::size_t i = 0; i < k; ++i) {
    parts.push_back(deterministic_model(cover, {n, uniform(rng, 0, (AssignmentBits{1} << n) - 1)}));
  }
  VectorQ w = random_distribution(rng, k);
  std::vector<Rational> weights(w.begin(), w.end());
  return mix(parts, weights);
}

EmpiricalModel blend(const EmpiricalModel& a, const EmpiricalModel& b, const Rational& w) {
  std::vector<EmpiricalModel> parts{a, b};
  std::vector<Rational> weights{w, 1 - w};
  return mix(parts, weights);
}

MeasurementCover random_cover(Rng& rng, std::size_t max_variables) {
  const std::size_t n = uniform(rng, 2, max_variables);
  // Nonempty subsets of at most three variables.
  const std::size_t available = n + n * (n - 1) / 2 + n * (n - 1) * (n - 2) / 6;
  const std::size_t k = std::min<std::size_t>(uniform(rng, 2, 4), available);
  std::set<std::vector<VariableIndex>> contexts;
  while (contexts.size() < k) {
    std::vector<VariableIndex> ctx;
    for (VariableIndex v = 0; v < n; ++v) {
      if (uniform(rng, 0, 2) == 0) ctx.push_back(v);
    }
    if (ctx.empty() || ctx.size() > 3) continue;
    contexts.insert(ctx);
  }
  std::vector<std::vector<VariableIndex>> list(contexts.begin(), contexts.end());
  for (VariableIndex v = 0; v < n; ++v) {
    bool covered = std::any_of(list.begin(), list.end(), [&](const auto& ctx) {
      return std::find(ctx.begin(), ctx.end(), v) != ctx.end();
    });
    if (!covered) {
      auto& ctx = list[uniform(rng, 0, list.size() - 1)];
      ctx.push_back(v);
      std::sort(ctx.begin(), ctx.end());
    }
  }
  std::sort(list.begin(), list.end());
  list.erase(std::unique(list.begin(), list.end()), list.end());
  std::vector<std::string> names;
  for (VariableIndex v = 0; v < n; ++v) names.push_back("x" + std::to_string(v));
  return MeasurementCover(std::move(names), std::move(list));
}

Formula random_formula(Rng& rng, std::span<const VariableIndex> vars, int depth) {
  if (depth == 0 || uniform(rng, 0, 3) == 0) {
    if (uniform(rng, 0, 9) == 0) return Formula::constant(uniform(rng, 0, 1) == 1);
    return Formula::variable(vars[uniform(rng, 0, vars.size() - 1)]);
  }
  switch (uniform(rng, 0, 4)) {
    case 0:
      return Formula::negation(random_formula(rng, vars, depth - 1));
    case 1:
      return Formula::conjunction({random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1)});
    case 2:
      return Formula::disjunction({random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1)});
    case 3:
      return Formula::exclusive_or({random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1)});
    default:
      return Formula::biconditional(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1));
  }
}

std::vector<VariableIndex> context_vector(const MeasurementCover& cover, ContextIndex c) {
  return {cover.context(c).begin(), cover.context(c).end()};
}

std::vector<TaggedFormula> formulas_of(const LogicalBellInequality& ineq) {
  std::vector<TaggedFormula> out;
  for (const auto& t : ineq.terms()) out.push_back(t.formula);
  return out;
}

bool has_parity(const TaggedFormula& f, Parity parity) {
  auto cells = satisfying_assignments(f);
  auto size = f.context().size();
  std::vector<AssignmentBits> expected;
  for (AssignmentBits s = 0; s < (AssignmentBits{1} << size); ++s) {
    if ((std::popcount(s) % 2 == 0) == (parity == Parity::Even)) expected.push_back(s);
  }
  return cells == expected;
}

// 1
void bell_table(Check& check, const SelftestOptions&) {
  auto model = zoo_model("bell");
  check.expect(classify(model) == ContextualityClass::ProbabilisticallyContextual,
               "classified as " + to_string(classify(model)));
  check.expect(unextendable_cells(support_of(model)).empty(),
               "support has a cell without a global section");
  check.expect(!find_noncontextual_decomposition(model).has_value(), "decomposition exists");
  auto ineq = correlation_sign_inequality(model);
  auto eval = evaluate_logical(model, ineq);
  check.expect_eq(eval.bound, Rational(3), "logical Bell bound");
  check.expect_eq(eval.violation, Rational(1, 4), "logical Bell violation");
  auto formulas = formulas_of(ineq);
  auto chsh = chsh_functional(model, formulas);
  check.expect_eq(chsh, Rational(5, 2), "CHSH value");
  check.expect_eq(chsh - Rational(formulas.size() - 2), Rational(1, 2), "CHSH violation");
  check.note("violation " + to_fraction_string(eval.violation) + ", CHSH " + to_fraction_string(chsh) +
             " against 2");
}

// 2
void hardy(Check& check, const SelftestOptions& options) {
  auto support = zoo_support("hardy");
  const auto& cover = support.cover();
  auto bad = unextendable_cells(support);
  bool found = std::find(bad.begin(), bad.end(), std::pair<ContextIndex, AssignmentBits>{0, 0b00}) != bad.end();
  check.expect(found, "(a,b) = 00 extends to a global section");
  check.expect(extend_to_global_section(support, 0, 0b00) == std::nullopt, "00 on (a,b) extends");
  auto witness = possibilistic_witness_inequality(support, 0, 0b00);
  check.expect(witness.is_k_consistent(cover.num_variables()), "witness inequality not 3-consistent");
  check.expect_eq(witness.bound(), std::uint64_t{3}, "witness bound");
  Rng rng(options.seed);
  for (int trial = 0; trial < 25; ++trial) {
    Rational p(uniform(rng, 1, 99), 100);
    std::vector<VectorQ> rows;
    for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
      VectorQ row = VectorQ::Zero(4);
      const auto& cells = support.support(c);
      if (c == 0) {
        VectorQ rest = random_distribution(rng, cells.size() - 1, 1 - p);
        row(0) = p;
        for (std::size_t i = 1; i < cells.size(); ++i) row(static_cast<Eigen::Index>(cells[i])) = rest(static_cast<Eigen::Index>(i - 1));
      } else {
        VectorQ w = random_distribution(rng, cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) row(static_cast<Eigen::Index>(cells[i])) = w(static_cast<Eigen::Index>(i));
      }
      rows.push_back(row);
    }
    EmpiricalModel model(cover, rows);
    check.expect(support_of(model) == support, "random model has a different support");
    auto eval = evaluate_logical(model, witness);
    check.expect_eq(eval.violation, p, "witness violation");
    auto formulas = formulas_of(witness);
    auto chsh = chsh_functional(model, formulas);
    check.expect_eq(chsh - Rational(formulas.size() - 2), 2 * p, "CHSH-form violation");
  }
  check.note("violation p and 2p on 25 random distributions");
}

// 3
void ghz(Check& check, const SelftestOptions&) {
  auto setup = ghz_setup();
  auto model = born_model(setup.state, setup.cover, setup.observables);
  auto support = support_of(model);
  check.expect(support == zoo_support("ghz"), "Born support differs from the GHZ table");
  const auto& cover = support.cover();
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    std::vector<AssignmentBits> expected;
    for (AssignmentBits s = 0; s < 8; ++s) {
      bool even = std::popcount(s) % 2 == 0;
      if (even == (c == 0)) expected.push_back(s);
    }
    check.expect(support.support(c) == expected, "row " + cover.context_label(c) + " has the wrong parity");
  }
  check.expect(classify(model) == ContextualityClass::StronglyContextual,
               "classified as " + to_string(classify(model)));
  auto eval = evaluate_logical(model, canonical_support_inequality(model));
  check.expect_eq(eval.violation, Rational(1), "canonical violation");
  check.expect(eval.maximal, "violation not maximal");
  check.note("canonical " + to_fraction_string(eval.lhs) + " against " + to_fraction_string(eval.bound));
}

// 4
void pr_box(Check& check, const SelftestOptions&) {
  auto model = zoo_model("pr-box");
  check.expect(classify(model) == ContextualityClass::StronglyContextual,
               "classified as " + to_string(classify(model)));
  auto e = expectation_vector(model);
  VectorQ expected(4);
  expected << 1, 1, 1, -1;
  check.expect(e.values == expected, "expectation vector is not (1,1,1,-1)");
  auto chsh = chsh_functional(model, formulas_of(correlation_sign_inequality(model)));
  check.expect_eq(chsh, Rational(4), "CHSH value");
  check.note("CHSH " + to_fraction_string(chsh));
}

// 5
void ks18(Check& check, const SelftestOptions& options) {
  auto support = zoo_support("ks18");
  const auto& cover = support.cover();
  std::vector<TaggedFormula> one;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    auto ctx = context_vector(cover, c);
    one.emplace_back(ctx, one_hot_formula(ctx));
  }
  check.expect(!is_jointly_satisfiable(one, cover.num_variables()).has_value(),
               "ONE(U) formulas are satisfiable");
  check.expect(global_sections(support).empty(), "support has a global section");
  Rng rng(options.seed);
  std::normal_distribution<double> gauss;
  const int states = 12;
  for (int i = 0; i < states; ++i) {
    ComplexVector v(4);
    for (auto& a : v) a = {gauss(rng), gauss(rng)};
    v.normalize();
    auto setup = ks18_setup(StateVector(v));
    auto model = born_model(setup.state, setup.cover, setup.observables);
    check.expect(classify(model) == ContextualityClass::StronglyContextual,
                 "state " + std::to_string(i) + " classified as " + to_string(classify(model)));
    check.expect(evaluate_logical(model, canonical_support_inequality(model)).maximal,
                 "state " + std::to_string(i) + " not maximally violating");
  }
  check.note(std::to_string(states) + " random states strongly contextual");
}

// 6
void peres_mermin(Check& check, const SelftestOptions&) {
  auto model = zoo_model("peres-mermin");
  const auto& cover = model.cover();
  std::vector<TaggedFormula> parities;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    auto ctx = context_vector(cover, c);
    parities.emplace_back(ctx, parity_formula(ctx, c < 3 ? Parity::Odd : Parity::Even));
  }
  check.expect(!is_jointly_satisfiable(parities, cover.num_variables()).has_value(),
               "parity formulas are satisfiable");
  auto eval = evaluate_logical(model, canonical_support_inequality(model));
  check.expect(eval.maximal, "canonical violation not maximal");
  check.expect_eq(eval.lhs, Rational(6), "canonical lhs");
  check.note("canonical " + to_fraction_string(eval.lhs) + " against " + to_fraction_string(eval.bound));
}

// 7
void werner_wolf(Check& check, const SelftestOptions&) {
  auto fixture = std::get<CorrelationFixture>(zoo("werner-wolf-a2"));
  const auto& cover = fixture.cover;
  auto logical = correlation_to_logical(cover, fixture.inequality).normalized();
  check.expect_eq(logical.bound(), std::uint64_t{7}, "bound");
  check.expect_eq(logical.terms().size(), std::size_t{8}, "term count");
  for (std::size_t i = 0; i < logical.terms().size() && i < 8; ++i) {
    const auto& t = logical.terms()[i];
    auto c = cover.find_context(t.formula.context());
    check.expect(c == i, "term " + std::to_string(i) + " is on the wrong context");
    check.expect_eq(t.multiplicity, std::uint64_t{i < 7 ? 1U : 3U}, "multiplicity " + std::to_string(i));
    check.expect(has_parity(t.formula, i < 7 ? Parity::Even : Parity::Odd),
                 "term " + std::to_string(i) + " is not the expected parity formula");
  }
  check.expect_eq(max_satisfiable(logical.terms(), cover.num_variables()).value, std::uint64_t{7},
                  "max_satisfiable");
  check.expect(logical.is_k_consistent(cover.num_variables()), "not 7-consistent");
  const auto& terms = logical.terms();
  int subsets = 0;
  for (unsigned mask = 0; mask < (1U << 7); ++mask) {
    if (std::popcount(mask) != 5) continue;
    std::vector<TaggedFormula> group{terms[7].formula};
    for (unsigned i = 0; i < 7; ++i) {
      if (mask & (1U << i)) group.push_back(terms[i].formula);
    }
    check.expect(!is_jointly_satisfiable(group, cover.num_variables()).has_value(),
                 "a 5-subset with the negated formula is satisfiable");
    ++subsets;
  }
  check.note(std::to_string(subsets) + " five-element subsets unsatisfiable");
}

// 8
void vertex4(Check& check, const SelftestOptions&) {
  auto model = zoo_model("vertex4-322");
  auto fixture = std::get<CorrelationFixture>(zoo("werner-wolf-a2"));
  check.expect(model.cover() == fixture.cover, "cover differs from the (3,2,1) scenario");
  auto value = evaluate_correlation(expectation_vector(model), fixture.inequality);
  check.expect(value <= Rational(fixture.inequality.bound), "violates the correlation inequality");
  auto logical = correlation_to_logical(fixture.cover, fixture.inequality).normalized();
  check.expect(evaluate_logical(model, logical).violation == 0, "violates the logical form");
  auto eval = evaluate_logical(model, canonical_support_inequality(model));
  check.expect_eq(eval.lhs, Rational(8), "canonical lhs");
  check.expect_eq(eval.bound, Rational(7), "canonical bound");
  check.expect(eval.maximal, "not maximal");
  check.note("correlation value " + to_fraction_string(value) + " <= 4, canonical 8 against 7");
}

// 9
void completeness(Check& check, const SelftestOptions& options) {
  auto cover = bell_scenario_cover(2, 2, 1);
  auto set = noncontextual_polytope(cover);
  auto logical = complete_logical_bell_set(cover);
  check.expect(!logical.empty(), "no logical inequalities");
  for (const auto& ineq : logical) {
    check.expect(ineq.is_k_consistent(cover.num_variables()), "member fails K-consistency");
  }
  auto violates_some = [&](const EmpiricalModel& m) {
    return std::any_of(logical.begin(), logical.end(),
                       [&](const auto& ineq) { return evaluate_logical(m, ineq).violation > 0; });
  };
  check.expect(violates_some(zoo_model("bell")), "Bell table violates no member");
  check.expect(violates_some(zoo_model("pr-box")), "PR box violates no member");
  for (AssignmentBits t = 0; t < 16; ++t) {
    auto delta = deterministic_model(cover, {4, t});
    check.expect(!violates_some(delta), "a deterministic model violates a member");
    check.expect(contains(set, delta.cell_vector()), "a deterministic model is outside the polytope");
  }
  Rng rng(options.seed);
  auto bell = zoo_model("bell");
  auto pr = zoo_model("pr-box");
  std::size_t contextual = 0;
  for (std::size_t i = 0; i < options.random_models; ++i) {
    EmpiricalModel model = [&] {
      switch (i % 4) {
        case 0:
          return random_table(cover, rng);
        case 1:
          return random_local_model(cover, rng);
        case 2:
          return blend(pr, random_local_model(cover, rng), Rational(uniform(rng, 0, 60), 100));
        default:
          return blend(bell, random_local_model(cover, rng), Rational(uniform(rng, 0, 100), 100));
      }
    }();
    bool member = contains(set, model.cell_vector());
    bool decomposable = find_noncontextual_decomposition(model).has_value();
    check.expect(member == decomposable, "membership and decomposition disagree on model " + std::to_string(i));
    check.expect(member == !violates_some(model) || !is_no_signalling(model),
                 "logical set and polytope disagree on model " + std::to_string(i));
    contextual += !decomposable;
  }
  check.note(std::to_string(set.inequalities.size()) + " inequalities, " + std::to_string(logical.size()) +
             " logical; " + std::to_string(contextual) + "/" + std::to_string(options.random_models) +
             " random models contextual");
}

// 10
void correlation(Check& check, const SelftestOptions&) {
  auto cover = bell_scenario_cover(2, 2, 1);
  auto facets = correlation_polytope(cover);
  auto vertices = correlation_vertices(cover);
  for (const auto& f : facets) {
    int tight = 0;
    for (const auto& eta : vertices) {
      Integer value = 0;
      for (std::size_t c = 0; c < eta.size(); ++c) value += f.coefficients[c] * eta[c];
      check.expect(value <= f.bound, "a vertex violates " + format_inequality(cover, f));
      tight += value == f.bound;
    }
    check.expect(tight >= 4, format_inequality(cover, f) + " meets only " + std::to_string(tight) + " vertices");
  }
  int chsh = 0;
  for (unsigned signs = 0; signs < 16; ++signs) {
    if (std::popcount(signs) % 2 == 0) continue;
    CorrelationInequality expected;
    for (unsigned c = 0; c < 4; ++c) expected.coefficients.emplace_back((signs >> c) & 1U ? -1 : 1);
    expected.bound = 2;
    bool present = std::find(facets.begin(), facets.end(), expected) != facets.end();
    check.expect(present, "missing " + format_inequality(cover, expected));
    chsh += present;
  }
  auto e = expectation_vector(zoo_model("pr-box"));
  bool at_four = std::any_of(facets.begin(), facets.end(), [&](const auto& f) {
    return evaluate_correlation(e, f) == 4 && Rational(f.bound) < 4;
  });
  check.expect(at_four, "PR box reaches 4 on no member");
  check.note(std::to_string(facets.size()) + " facets, " + std::to_string(chsh) + " CHSH-type");
}

bool extends(const LinearSystem& original, std::span<const std::size_t> kept, const VectorQ& point) {
  // Substitute the kept coordinates and ask for any values of the rest.
  std::vector<std::size_t> free_vars;
  for (std::size_t j = 0; j < original.num_variables(); ++j) {
    if (std::find(kept.begin(), kept.end(), j) == kept.end()) free_vars.push_back(j);
  }
  std::vector<std::string> names;
  for (auto j : free_vars) names.push_back(original.variables()[j]);
  LinearSystem reduced(names);
  for (const auto& r : original.rows()) {
    Rational rhs = r.rhs;
    for (std::size_t i = 0; i < kept.size(); ++i) rhs -= r.coefficients(static_cast<Eigen::Index>(kept[i])) * point(static_cast<Eigen::Index>(i));
    VectorQ a(static_cast<Eigen::Index>(free_vars.size()));
    for (std::size_t i = 0; i < free_vars.size(); ++i) a(static_cast<Eigen::Index>(i)) = r.coefficients(static_cast<Eigen::Index>(free_vars[i]));
    reduced.add_inequality(a, rhs);
  }
  return is_feasible(reduced);
}

// 11
void properties(Check& check, const SelftestOptions& options) {
  Rng rng(options.seed);

  // Valid on every deterministic model iff K-consistent.
  int valid = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto cover = random_cover(rng, 6);
    FormulaMultiset terms;
    std::size_t count = uniform(rng, 2, 6);
    for (std::size_t i = 0; i < count; ++i) {
      auto ctx = context_vector(cover, uniform(rng, 0, cover.num_contexts() - 1));
      terms.push_back({uniform(rng, 1, 3), TaggedFormula(ctx, random_formula(rng, ctx, 3))});
    }
    std::uint64_t bound = uniform(rng, 0, cardinality(terms));
    auto candidate = LogicalBellInequality::unchecked(terms, bound);
    bool on_deltas = true;
    const auto n = cover.num_variables();
    for (AssignmentBits t = 0; t < (AssignmentBits{1} << n); ++t) {
      on_deltas = on_deltas && evaluate_logical(deterministic_model(cover, {n, t}), candidate).violation == 0;
    }
    bool consistent = true;
    try {
      LogicalBellInequality checked(terms, bound, n);
    } catch (const InvalidInequality&) {
      consistent = false;
    }
    check.expect(on_deltas == consistent, "validity and K-consistency disagree in trial " + std::to_string(trial));
    valid += consistent;
  }

  // k . v - M = sum_i m_i p(theta_i) - K for the cellwise form, and g times that for the
  // collected form with g the gcd of level gaps and slack.
  for (int trial = 0; trial < 200; ++trial) {
    auto cover = random_cover(rng, 5);
    std::vector<Integer> k;
    for (std::size_t i = 0; i < cover.num_cells(); ++i) k.emplace_back(uniform_signed(rng, -3, 3));
    Integer m = max_over_deterministic(cover, k).first + Integer(uniform(rng, 0, 2));
    auto model = random_table(cover, rng);
    VectorQ v = model.cell_vector();
    Rational lhs = -Rational(m);
    for (std::size_t i = 0; i < k.size(); ++i) lhs += Rational(k[i]) * v(static_cast<Eigen::Index>(i));

    auto cellwise = evaluate_logical(model, cellwise_logical_form(cover, k, m));
    check.expect(lhs == cellwise.lhs - cellwise.bound, "cellwise identity fails in trial " + std::to_string(trial));

    Integer slack = m;
    Integer g = 0;
    for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
      auto first = k.begin() + static_cast<std::ptrdiff_t>(cover.cell_offset(c));
      auto last = first + static_cast<std::ptrdiff_t>(cover.context_size(c));
      Integer low = *std::min_element(first, last);
      slack -= low;
      for (auto it = first; it != last; ++it) g = gcd(g, Integer(*it - low));
    }
    g = gcd(g, slack);
    if (g == 0) g = 1;
    auto collected = evaluate_logical(model, rational_to_logical(cover, k, m));
    check.expect(lhs == Rational(g) * (collected.lhs - collected.bound),
                 "collected identity fails in trial " + std::to_string(trial));
  }

  // Each elimination step against an exact feasibility test on the original system.
  int inside = 0;
  int outside = 0;
  for (int system_index = 0; system_index < 5; ++system_index) {
    const std::size_t n = 4;
    std::vector<std::string> names;
    for (std::size_t j = 0; j < n; ++j) names.push_back("z" + std::to_string(j));
    LinearSystem original(names);
    for (int r = 0; r < 8; ++r) {
      VectorQ a(static_cast<Eigen::Index>(n));
      for (auto& x : a) x = Rational(uniform_signed(rng, -3, 3));
      original.add_inequality(a, Rational(uniform_signed(rng, -4, 2)));
    }
    for (std::size_t j = 0; j < n; ++j) {
      VectorQ e = VectorQ::Zero(static_cast<Eigen::Index>(n));
      e(static_cast<Eigen::Index>(j)) = 1;
      original.add_inequality(e, -5);
      original.add_inequality(-e, -5);
    }
    LinearSystem current = original;
    std::vector<std::size_t> kept(n);
    std::iota(kept.begin(), kept.end(), 0);
    for (std::size_t step = 0; step + 1 < n; ++step) {
      std::size_t var = uniform(rng, 0, kept.size() - 1);
      auto raw = fm_eliminate(current, var);
      auto pruned = remove_redundant(raw);
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(var));
      for (int p = 0; p < 100; ++p) {
        VectorQ point(static_cast<Eigen::Index>(kept.size()));
        for (auto& x : point) x = Rational(uniform_signed(rng, -24, 24), 4);
        bool truth = extends(original, kept, point);
        check.expect(raw.satisfied_by(point) == truth, "elimination step disagrees with the extension test");
        check.expect(pruned.satisfied_by(point) == truth, "pruned step disagrees with the extension test");
        (truth ? inside : outside)++;
      }
      current = pruned;
    }
  }
  check.expect(inside > 0 && outside > 0, "sampled points did not reach both sides");
  check.note(std::to_string(valid) + "/100 multisets consistent; 200 identities; " + std::to_string(inside) +
             " extendable and " + std::to_string(outside) + " non-extendable points");
}

struct Criterion {
  const char* title;
  const char* claim;
  double budget;
  void (*run)(Check&, const SelftestOptions&);
};

const Criterion kCriteria[kNumCriteria] = {
    {"Bell table", "contextual with possibilistic extension; violation 1/4, CHSH 5/2 against 2", 1, bell_table},
    {"Hardy witness", "witness violation p and 2p in CHSH form", 1, hardy},
    {"GHZ(3)", "Born support matches the GHZ table; strongly contextual, canonical violation 1", 1, ghz},
    {"PR box", "strongly contextual; E = (1,1,1,-1); CHSH value 4", 1, pr_box},
    {"KS18", "ONE(U) unsatisfiable; every state strongly contextual", 30, ks18},
    {"Peres-Mermin", "parity formulas unsatisfiable; maximal canonical violation", 1, peres_mermin},
    {"Werner-Wolf A2", "sum p(psi_i) + 3 p(!psi_8) <= 7; any 5 with !psi_8 unsatisfiable", 5, werner_wolf},
    {"Vertex-4 (3,2,2)", "satisfies A2 yet canonical 8 against 7", 5, vertex4},
    {"Non-contextual polytope", "membership equals decomposability; logical members valid", 600, completeness},
    {"Correlation polytope", "tight facets including 8 CHSH; PR box at 4", 120, correlation},
    {"Property suites", "validity iff K-consistency; conversion identity; projection soundness", 300, properties},
};

}  // namespace

CriterionResult run_criterion(int id, const SelftestOptions& options) {
  if (id < 1 || id > kNumCriteria) throw DomainError("no acceptance criterion " + std::to_string(id));
  const auto& criterion = kCriteria[id - 1];
  CriterionResult result{id, criterion.title, criterion.claim, false, "", 0, criterion.budget};
  Check check;
  auto start = std::chrono::steady_clock::now();
  try {
    criterion.run(check, options);
  } catch (const std::exception& e) {
    check.expect(false, std::string("exception: ") + e.what());
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check.expect(result.seconds < criterion.budget, "over the time budget");
  result.passed = check.ok();
  result.detail = check.detail();
  return result;
}

std::vector<CriterionResult> run_selftest(const SelftestOptions& options) {
  std::vector<CriterionResult> results;
  for (int id = 1; id <= kNumCriteria; ++id) results.push_back(run_criterion(id, options));
  return results;
}

std::string format_result(const CriterionResult& r) {
  char time[32];
  std::snprintf(time, sizeof time, "%.2f s", r.seconds);
  std::string line = std::string(r.passed ? "PASS" : "FAIL") + "  " + std::to_string(r.id) + "  " + r.title +
                     " (" + time + ")";
  if (!r.detail.empty()) line += ": " + r.detail;
  if (!r.passed) line += " [claim: " + r.claim + "]";
  return line;
}

}  // namespace ctxlab
