#include "ctxlab/zoo.hpp"

#include <bit>

#include "ctxlab/errors.hpp"

namespace ctxlab {

namespace {

VectorQ row_of(std::initializer_list<Rational> values) {
  VectorQ row(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const auto& v : values) row(i++) = v;
  return row;
}

/// Cells of context c whose restriction to `names` has even (or odd) Hamming weight.
std::vector<AssignmentBits> parity_cells(const MeasurementCover& cover, ContextIndex c,
                                         const std::vector<std::string>& names, bool odd) {
  const auto ctx = cover.context(c);
  const auto subset = cover.parse_variable_set(names);
  std::vector<AssignmentBits> cells;
  LocalAssignment s{std::vector<VariableIndex>(ctx.begin(), ctx.end()), 0};
  for (AssignmentBits bits = 0; bits < cover.context_size(c); ++bits) {
    s.bits = bits;
    const bool is_odd = std::popcount(restrict(s, subset).bits) % 2 == 1;
    if (is_odd == odd) cells.push_back(bits);
  }
  return cells;
}

ContextIndex context_named(const MeasurementCover& cover, const std::vector<std::string>& names) {
  auto found = cover.find_context(cover.parse_variable_set(names));
  if (!found) throw DomainError("fixture context missing");
  return *found;
}

EmpiricalModel bell_table() {
  const Rational h(1, 2), big(3, 8), small(1, 8), zero(0);
  return EmpiricalModel(bell_scenario_cover(2, 2, 1),
                        {row_of({h, zero, zero, h}), row_of({big, small, small, big}),
                         row_of({big, small, small, big}), row_of({small, big, big, small})});
}

SupportModel hardy_support() {
  // Bitstrings in context order: (a,b), (a,b'), (a',b), (a',b').
  return SupportModel(bell_scenario_cover(2, 2, 1),
                      {{0b00, 0b01, 0b10, 0b11}, {0b01, 0b10, 0b11}, {0b01, 0b10, 0b11},
                       {0b00, 0b01, 0b10}});
}

EmpiricalModel pr_box() {
  const Rational h(1, 2), zero(0);
  return EmpiricalModel(bell_scenario_cover(2, 2, 1),
                        {row_of({h, zero, zero, h}), row_of({h, zero, zero, h}),
                         row_of({h, zero, zero, h}), row_of({zero, h, h, zero})});
}

EmpiricalModel ghz_model() {
  const auto cover = ghz_cover();
  std::vector<std::vector<AssignmentBits>> supports;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    std::vector<std::string> names;
    for (auto v : cover.context(c)) names.push_back(cover.variable_name(v));
    supports.push_back(parity_cells(cover, c, names, /*odd=*/c != 0));
  }
  return uniform_on_support(SupportModel(cover, std::move(supports)));
}

SupportModel ks18_support() {
  const auto cover = ks18_cover();
  std::vector<std::vector<AssignmentBits>> supports;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    std::vector<AssignmentBits> cells;
    const std::size_t m = cover.context(c).size();
    for (AssignmentBits bits = 0; bits < cover.context_size(c); ++bits) {
      if (std::popcount(bits) == static_cast<int>(m) - 1) cells.push_back(bits);
    }
    supports.push_back(std::move(cells));
  }
  return SupportModel(cover, std::move(supports));
}

EmpiricalModel peres_mermin_model() {
  const auto cover = peres_mermin_cover();
  std::vector<std::vector<AssignmentBits>> supports;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    std::vector<std::string> names;
    for (auto v : cover.context(c)) names.push_back(cover.variable_name(v));
    // Rows of the square carry odd parity, columns even.
    supports.push_back(parity_cells(cover, c, names, /*odd=*/c < 3));
  }
  return uniform_on_support(SupportModel(cover, std::move(supports)));
}

EmpiricalModel vertex4_model() {
  const auto cover = bell_scenario_cover(3, 2, 1);
  struct Row {
    std::vector<std::string> context;
    std::vector<std::string> parity_vars;
    bool odd;
  };
  const std::vector<Row> rows = {
      {{"a", "b", "c"}, {"a", "b"}, false},        {{"a", "b", "c'"}, {"a", "b"}, false},
      {{"a", "b'", "c'"}, {"b'", "c'"}, false},    {{"a'", "b'", "c'"}, {"b'", "c'"}, false},
      {{"a'", "b", "c"}, {"a'", "c"}, false},      {{"a'", "b'", "c"}, {"a'", "c"}, false},
      {{"a", "b'", "c"}, {"a", "b'", "c"}, false}, {{"a'", "b", "c'"}, {"a'", "b", "c'"}, true},
  };
  std::vector<std::vector<AssignmentBits>> supports(cover.num_contexts());
  for (const auto& row : rows) {
    const auto c = context_named(cover, row.context);
    supports[c] = parity_cells(cover, c, row.parity_vars, row.odd);
  }
  return uniform_on_support(SupportModel(cover, std::move(supports)));
}

CorrelationFixture werner_wolf_a2() {
  CorrelationInequality ineq;
  for (int i = 0; i < 7; ++i) ineq.coefficients.emplace_back(1);
  ineq.coefficients.emplace_back(-3);
  ineq.bound = 4;
  return {bell_scenario_cover(3, 2, 1), std::move(ineq)};
}

}  // namespace

MeasurementCover ghz_cover() {
  return MeasurementCover({"a", "a'", "b", "b'", "c", "c'"},
                          std::vector<std::vector<std::string>>{{"a", "b", "c"},
                                                                {"a", "b'", "c'"},
                                                                {"a'", "b", "c'"},
                                                                {"a'", "b'", "c"}});
}

MeasurementCover ks18_cover() {
  std::vector<std::string> names;
  for (char ch = 'A'; ch <= 'R'; ++ch) names.emplace_back(1, ch);
  const std::vector<std::string> columns = {"ABCD", "AEFG", "HICJ", "HKGL", "BEMN",
                                            "IKNO", "PQDJ", "PRFL", "QRMO"};
  std::vector<std::vector<std::string>> contexts;
  for (const auto& col : columns) {
    std::vector<std::string> ctx;
    for (char ch : col) ctx.emplace_back(1, ch);
    contexts.push_back(std::move(ctx));
  }
  return MeasurementCover(std::move(names), contexts);
}

MeasurementCover peres_mermin_cover() {
  return MeasurementCover({"A", "B", "C", "D", "E", "F", "G", "H", "I"},
                          std::vector<std::vector<std::string>>{{"A", "B", "C"},
                                                                {"D", "E", "F"},
                                                                {"G", "H", "I"},
                                                                {"A", "D", "G"},
                                                                {"B", "E", "H"},
                                                                {"C", "F", "I"}});
}

std::vector<std::string> zoo_names() {
  return {"bell", "hardy", "ghz", "pr-box", "ks18", "peres-mermin", "vertex4-322",
          "werner-wolf-a2"};
}

ZooFixture zoo(std::string_view name) {
  if (name == "bell") return bell_table();
  if (name == "hardy") return hardy_support();
  if (name == "ghz") return ghz_model();
  if (name == "pr-box") return pr_box();
  if (name == "ks18") return ks18_support();
  if (name == "peres-mermin") return peres_mermin_model();
  if (name == "vertex4-322") return vertex4_model();
  if (name == "werner-wolf-a2") return werner_wolf_a2();
  throw DomainError("unknown zoo entry '" + std::string(name) + "'");
}

EmpiricalModel zoo_model(std::string_view name) {
  auto fixture = zoo(name);
  if (auto* model = std::get_if<EmpiricalModel>(&fixture)) return std::move(*model);
  throw DomainError("zoo entry '" + std::string(name) + "' is not a probability model");
}

SupportModel zoo_support(std::string_view name) {
  auto fixture = zoo(name);
  if (auto* model = std::get_if<EmpiricalModel>(&fixture)) return support_of(*model);
  if (auto* support = std::get_if<SupportModel>(&fixture)) return std::move(*support);
  throw DomainError("zoo entry '" + std::string(name) + "' has no support table");
}

}  // namespace ctxlab
