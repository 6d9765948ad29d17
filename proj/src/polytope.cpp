#include "ctxlab/polytope.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <sstream>

#include "ctxlab/contextuality.hpp"
#include "ctxlab/simplex.hpp"

namespace ctxlab {

namespace {

using RowKey = std::vector<Rational>;

RowKey key_of(const LinearRow& row) {
  RowKey key(row.coefficients.begin(), row.coefficients.end());
  key.push_back(row.rhs);
  return key;
}

RowKey negated_key(const LinearRow& row) {
  RowKey key;
  key.reserve(static_cast<std::size_t>(row.coefficients.size()) + 1);
  for (const auto& a : row.coefficients) key.push_back(-a);
  key.push_back(-row.rhs);
  return key;
}

bool is_zero_row(const LinearRow& row) {
  return std::all_of(row.coefficients.begin(), row.coefficients.end(),
                     [](const Rational& a) { return a == 0; });
}

LinearRow drop_column(const LinearRow& row, std::size_t var) {
  const auto n = row.coefficients.size();
  const auto v = static_cast<Eigen::Index>(var);
  LinearRow out{VectorQ(n - 1), row.rhs};
  out.coefficients.head(v) = row.coefficients.head(v);
  out.coefficients.tail(n - 1 - v) = row.coefficients.tail(n - 1 - v);
  return out;
}

LinearSystem without_variable(const LinearSystem& system, std::size_t var,
                              const std::vector<LinearRow>& rows) {
  auto names = system.variables();
  names.erase(names.begin() + static_cast<std::ptrdiff_t>(var));
  LinearSystem out(std::move(names));
  for (const auto& r : rows) out.add_inequality(r.coefficients, r.rhs);
  return canonicalize(out);
}

/// Farkas test: lambda >= 0, s >= 0 with A^T lambda = a and b . lambda - s = rhs, using
/// the rows flagged in `use`. Assumes those rows are jointly feasible.
bool farkas_implied(const std::vector<LinearRow>& rows, const std::vector<bool>& use,
                    const LinearRow& target) {
  if (is_zero_row(target)) return target.rhs <= 0;
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (use[i]) active.push_back(i);
  }
  const auto n = target.coefficients.size();
  const auto m = static_cast<Eigen::Index>(active.size());
  MatrixQ a = MatrixQ::Zero(n + 1, m + 1);
  VectorQ b(n + 1);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& row = rows[active[static_cast<std::size_t>(j)]];
    for (Eigen::Index k = 0; k < n; ++k) {
      if (row.coefficients(k) != 0) a(k, j) = row.coefficients(k);
    }
    a(n, j) = row.rhs;
  }
  a(n, m) = -1;
  b.head(n) = target.coefficients;
  b(n) = target.rhs;
  return find_feasible_point(a, b).has_value();
}

bool rows_feasible(const std::vector<LinearRow>& rows, std::size_t n) {
  if (rows.empty()) return true;
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto nn = static_cast<Eigen::Index>(n);
  // A z+ - A z- - s = b
  MatrixQ a = MatrixQ::Zero(m, 2 * nn + m);
  VectorQ b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    for (Eigen::Index k = 0; k < nn; ++k) {
      if (row.coefficients(k) == 0) continue;
      a(i, k) = row.coefficients(k);
      a(i, nn + k) = -row.coefficients(k);
    }
    a(i, 2 * nn + i) = -1;
    b(i) = row.rhs;
  }
  return find_feasible_point(a, b).has_value();
}

/// Index of a row whose negation is also present and which has a nonzero coefficient
/// on var; the one with the fewest nonzero coefficients wins.
std::optional<std::size_t> equality_on(const LinearSystem& system, std::size_t var) {
  std::set<RowKey> keys;
  for (const auto& r : system.rows()) keys.insert(key_of(r));
  std::optional<std::size_t> best;
  Eigen::Index best_nonzeros = 0;
  const auto v = static_cast<Eigen::Index>(var);
  for (std::size_t i = 0; i < system.num_rows(); ++i) {
    const auto& r = system.row(i);
    if (r.coefficients(v) == 0 || !keys.contains(negated_key(r))) continue;
    Eigen::Index nonzeros = 0;
    for (const auto& a : r.coefficients) nonzeros += a != 0;
    if (!best || nonzeros < best_nonzeros) {
      best = i;
      best_nonzeros = nonzeros;
    }
  }
  return best;
}

LinearSystem substitute(const LinearSystem& system, std::size_t var, std::size_t eq) {
  const auto v = static_cast<Eigen::Index>(var);
  const LinearRow& e = system.row(eq);
  const RowKey neg = negated_key(e);
  std::vector<LinearRow> out;
  for (std::size_t i = 0; i < system.num_rows(); ++i) {
    const auto& r = system.row(i);
    if (i == eq || key_of(r) == neg) continue;
    if (r.coefficients(v) == 0) {
      out.push_back(drop_column(r, var));
      continue;
    }
    Rational f = r.coefficients(v) / e.coefficients(v);
    LinearRow combined{r.coefficients - f * e.coefficients, r.rhs - f * e.rhs};
    out.push_back(drop_column(combined, var));
  }
  return without_variable(system, var, out);
}

void check_polytope_limits(const MeasurementCover& cover, const Limits& limits) {
  if (cover.num_variables() > limits.max_polytope_variables) {
    throw LimitExceeded("polytope projection over " + std::to_string(cover.num_variables()) +
                        " variables exceeds the limit of " +
                        std::to_string(limits.max_polytope_variables));
  }
}

std::string cell_name(const MeasurementCover& cover, ContextIndex c, AssignmentBits s) {
  return "p[" + cover.context_label(c) + ":" + format_bitstring(s, cover.context(c).size()) + "]";
}

template <typename Coefficient>
std::string format_terms(const std::vector<std::string>& names,
                         const std::vector<Coefficient>& coefficients) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const auto& a = coefficients[i];
    if (a == 0) continue;
    bool negative = a < 0;
    Coefficient magnitude = negative ? Coefficient(-a) : a;
    if (first) {
      if (negative) out << "-";
    } else {
      out << (negative ? " - " : " + ");
    }
    if (magnitude != 1) out << magnitude << " ";
    out << names[i];
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

}  // namespace

LinearSystem::LinearSystem(std::vector<std::string> variables)
    : variables_(std::move(variables)) {}

std::size_t LinearSystem::variable_index(std::string_view name) const {
  auto it = std::find(variables_.begin(), variables_.end(), name);
  if (it == variables_.end()) throw DomainError("unknown variable '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - variables_.begin());
}

void LinearSystem::add_inequality(VectorQ coefficients, Rational rhs) {
  if (static_cast<std::size_t>(coefficients.size()) != variables_.size()) {
    throw DomainError("row length does not match the variable count");
  }
  rows_.push_back({std::move(coefficients), std::move(rhs)});
}

void LinearSystem::add_equality(const VectorQ& coefficients, const Rational& rhs) {
  add_inequality(coefficients, rhs);
  add_inequality(-coefficients, -rhs);
}

bool LinearSystem::satisfied_by(const VectorQ& point) const {
  if (static_cast<std::size_t>(point.size()) != variables_.size()) {
    throw DomainError("point dimension does not match the variable count");
  }
  return std::all_of(rows_.begin(), rows_.end(), [&](const LinearRow& r) {
    return r.coefficients.dot(point) >= r.rhs;
  });
}

LinearRow canonical_row(const LinearRow& row) {
  std::vector<Rational> all(row.coefficients.begin(), row.coefficients.end());
  all.push_back(row.rhs);
  Integer scale = lcm_of_denominators(all);
  Integer g = 0;
  for (const auto& v : all) g = gcd(g, abs(numerator(v) * (scale / denominator(v))));
  if (g == 0) return row;
  Rational factor(scale, g);
  return {row.coefficients * factor, row.rhs * factor};
}

LinearSystem canonicalize(const LinearSystem& system) {
  LinearSystem out(system.variables());
  std::set<RowKey> seen;
  for (const auto& r : system.rows()) {
    if (is_zero_row(r) && r.rhs <= 0) continue;
    auto c = canonical_row(r);
    if (seen.insert(key_of(c)).second) out.add_inequality(c.coefficients, c.rhs);
  }
  return out;
}

LinearSystem fm_eliminate(const LinearSystem& system, std::size_t var) {
  if (var >= system.num_variables()) throw DomainError("variable index out of range");
  const auto v = static_cast<Eigen::Index>(var);
  std::vector<const LinearRow*> lower;
  std::vector<const LinearRow*> upper;
  std::vector<LinearRow> out;
  for (const auto& r : system.rows()) {
    const auto& a = r.coefficients(v);
    if (a > 0) {
      lower.push_back(&r);
    } else if (a < 0) {
      upper.push_back(&r);
    } else {
      out.push_back(drop_column(r, var));
    }
  }
  for (const auto* l : lower) {
    for (const auto* u : upper) {
      Rational wl = -u->coefficients(v);
      Rational wu = l->coefficients(v);
      LinearRow combined{wl * l->coefficients + wu * u->coefficients, wl * l->rhs + wu * u->rhs};
      combined.coefficients(v) = 0;
      out.push_back(drop_column(combined, var));
    }
  }
  return without_variable(system, var, out);
}

LinearSystem fm_eliminate(const LinearSystem& system, std::string_view name) {
  return fm_eliminate(system, system.variable_index(name));
}

bool is_feasible(const LinearSystem& system) {
  return rows_feasible(system.rows(), system.num_variables());
}

bool implies(const LinearSystem& system, const LinearRow& row) {
  if (static_cast<std::size_t>(row.coefficients.size()) != system.num_variables()) {
    throw DomainError("row length does not match the variable count");
  }
  if (!is_feasible(system)) return true;
  return farkas_implied(system.rows(), std::vector<bool>(system.num_rows(), true), row);
}

LinearSystem remove_redundant(const LinearSystem& system) {
  LinearSystem canonical = canonicalize(system);
  const auto& rows = canonical.rows();
  if (!rows_feasible(rows, canonical.num_variables())) {
    LinearSystem out(system.variables());
    out.add_inequality(VectorQ::Zero(static_cast<Eigen::Index>(system.num_variables())), 1);
    return out;
  }
  std::vector<bool> keep(rows.size(), true);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    keep[i] = false;
    if (!farkas_implied(rows, keep, rows[i])) keep[i] = true;
  }
  LinearSystem out(system.variables());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (keep[i]) out.add_inequality(rows[i].coefficients, rows[i].rhs);
  }
  return out;
}

LinearSystem project_out(const LinearSystem& system, std::span<const std::size_t> vars,
                         const ProjectionOptions& options) {
  return project_out(system, vars, options, nullptr);
}

LinearSystem project_out(const LinearSystem& system, std::span<const std::size_t> vars,
                         const ProjectionOptions& options, ProjectionTrace* trace) {
  std::vector<std::string> pending;
  for (auto v : vars) {
    if (v >= system.num_variables()) throw DomainError("variable index out of range");
    pending.push_back(system.variables()[v]);
  }
  std::sort(pending.begin(), pending.end(), [&](const auto& x, const auto& y) {
    return system.variable_index(x) < system.variable_index(y);
  });
  pending.erase(std::unique(pending.begin(), pending.end()), pending.end());

  LinearSystem current = canonicalize(system);
  while (!pending.empty()) {
    std::size_t best = 0;
    std::size_t best_cost = 0;
    for (std::size_t p = 0; p < pending.size(); ++p) {
      const auto v = static_cast<Eigen::Index>(current.variable_index(pending[p]));
      std::size_t lower = 0;
      std::size_t upper = 0;
      for (const auto& r : current.rows()) {
        lower += r.coefficients(v) > 0;
        upper += r.coefficients(v) < 0;
      }
      if (p == 0 || lower * upper < best_cost) {
        best = p;
        best_cost = lower * upper;
      }
    }
    const auto var = current.variable_index(pending[best]);
    std::optional<std::size_t> eq;
    if (options.substitute_equalities) eq = equality_on(current, var);
    current = eq ? substitute(current, var, *eq) : fm_eliminate(current, var);
    if (options.prune_each_step) current = remove_redundant(current);
    if (trace) {
      trace->order.push_back(pending[best]);
      trace->rows.push_back(current.num_rows());
    }
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return options.prune_each_step ? current : remove_redundant(current);
}

LinearSystem symbolic_system(const MeasurementCover& cover, const Limits& limits) {
  check_polytope_limits(cover, limits);
  const auto d = cover.num_cells();
  const auto n = std::size_t{1} << cover.num_variables();
  std::vector<std::string> names;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    for (AssignmentBits s = 0; s < cover.context_size(c); ++s) names.push_back(cell_name(cover, c, s));
  }
  for (AssignmentBits t = 0; t < n; ++t) {
    names.push_back("x[" + format_bitstring(t, cover.num_variables()) + "]");
  }
  LinearSystem system(std::move(names));
  const auto width = static_cast<Eigen::Index>(d + n);
  IncidenceMatrix m(cover, limits);
  std::vector<VectorQ> cell_rows(d, VectorQ::Zero(width));
  for (std::size_t r = 0; r < d; ++r) cell_rows[r](static_cast<Eigen::Index>(r)) = 1;
  for (AssignmentBits t = 0; t < n; ++t) {
    for (auto r : m.column_support(t)) cell_rows[r](static_cast<Eigen::Index>(d + t)) = -1;
  }
  for (const auto& row : cell_rows) system.add_equality(row, 0);
  for (AssignmentBits t = 0; t < n; ++t) {
    VectorQ row = VectorQ::Zero(width);
    row(static_cast<Eigen::Index>(d + t)) = 1;
    system.add_inequality(std::move(row), 0);
  }
  VectorQ total = VectorQ::Zero(width);
  total.tail(static_cast<Eigen::Index>(n)).setOnes();
  system.add_equality(total, 1);
  return system;
}

InequalitySet noncontextual_polytope(const MeasurementCover& cover, const Limits& limits,
                                     const ProjectionOptions& options) {
  auto system = symbolic_system(cover, limits);
  const auto d = cover.num_cells();
  std::vector<std::size_t> xs;
  for (std::size_t j = d; j < system.num_variables(); ++j) xs.push_back(j);
  auto projected = project_out(system, xs, options);
  InequalitySet set;
  for (const auto& r : projected.rows()) {
    set.inequalities.push_back({-r.coefficients, -r.rhs});
  }
  return set;
}

std::vector<LogicalBellInequality> complete_logical_bell_set(const MeasurementCover& cover,
                                                             const Limits& limits,
                                                             const ProjectionOptions& options) {
  std::vector<LogicalBellInequality> out;
  for (const auto& ineq : noncontextual_polytope(cover, limits, options).inequalities) {
    auto k = clear_denominators(ineq);
    auto logical = rational_to_logical(cover, k.coefficients, k.bound, limits);
    if (!logical.terms().empty()) out.push_back(std::move(logical));
  }
  return out;
}

std::vector<std::vector<int>> correlation_vertices(const MeasurementCover& cover,
                                                   const Limits& limits) {
  if (cover.num_contexts() > limits.max_correlation_contexts) {
    throw LimitExceeded("correlation polytope over " + std::to_string(cover.num_contexts()) +
                        " contexts exceeds the limit of " +
                        std::to_string(limits.max_correlation_contexts));
  }
  const auto n = cover.num_variables();
  if (n > limits.max_variables) {
    throw LimitExceeded("enumeration over " + std::to_string(n) +
                        " variables exceeds the limit of " +
                        std::to_string(limits.max_variables));
  }
  std::vector<std::vector<int>> vertices;
  std::set<std::vector<int>> seen;
  for (AssignmentBits t = 0; t < (AssignmentBits{1} << n); ++t) {
    std::vector<int> eta;
    for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
      eta.push_back(std::popcount(restrict_bits(t, n, cover.context(c))) % 2 == 0 ? 1 : -1);
    }
    if (seen.insert(eta).second) vertices.push_back(std::move(eta));
  }
  return vertices;
}

std::vector<CorrelationInequality> correlation_polytope(const MeasurementCover& cover,
                                                        const Limits& limits,
                                                        const ProjectionOptions& options) {
  auto vertices = correlation_vertices(cover, limits);
  const auto k = cover.num_contexts();
  const auto n = vertices.size();
  std::vector<std::string> names;
  for (ContextIndex c = 0; c < k; ++c) names.push_back("E" + cover.context_label(c));
  for (std::size_t v = 0; v < n; ++v) names.push_back("w" + std::to_string(v));
  LinearSystem system(std::move(names));
  const auto width = static_cast<Eigen::Index>(k + n);
  for (ContextIndex c = 0; c < k; ++c) {
    VectorQ row = VectorQ::Zero(width);
    row(static_cast<Eigen::Index>(c)) = 1;
    for (std::size_t v = 0; v < n; ++v) row(static_cast<Eigen::Index>(k + v)) = -vertices[v][c];
    system.add_equality(row, 0);
  }
  for (std::size_t v = 0; v < n; ++v) {
    VectorQ row = VectorQ::Zero(width);
    row(static_cast<Eigen::Index>(k + v)) = 1;
    system.add_inequality(std::move(row), 0);
  }
  VectorQ total = VectorQ::Zero(width);
  total.tail(static_cast<Eigen::Index>(n)).setOnes();
  system.add_equality(total, 1);

  std::vector<std::size_t> weights;
  for (std::size_t j = k; j < k + n; ++j) weights.push_back(j);
  auto projected = project_out(system, weights, options);
  std::vector<CorrelationInequality> out;
  for (const auto& r : projected.rows()) {
    CorrelationInequality ineq;
    for (const auto& a : r.coefficients) ineq.coefficients.push_back(-to_integer(a));
    ineq.bound = -to_integer(r.rhs);
    out.push_back(std::move(ineq));
  }
  return out;
}

bool contains(const InequalitySet& set, const VectorQ& cells) {
  return std::all_of(set.inequalities.begin(), set.inequalities.end(),
                     [&](const RationalInequality& r) {
                       return r.coefficients.dot(cells) <= r.bound;
                     });
}

std::vector<std::pair<std::size_t, std::size_t>> equality_pairs(const InequalitySet& set) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const auto& v = set.inequalities;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (v[j].bound == -v[i].bound && v[j].coefficients == -v[i].coefficients) {
        pairs.emplace_back(i, j);
      }
    }
  }
  return pairs;
}

std::string format_inequality(const MeasurementCover& cover, const RationalInequality& ineq) {
  std::vector<std::string> names;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    for (AssignmentBits s = 0; s < cover.context_size(c); ++s) names.push_back(cell_name(cover, c, s));
  }
  std::vector<Rational> coefficients(ineq.coefficients.begin(), ineq.coefficients.end());
  return format_terms(names, coefficients) + " <= " + ineq.bound.str();
}

std::string format_inequality(const MeasurementCover& cover, const CorrelationInequality& ineq) {
  std::vector<std::string> names;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) names.push_back("E" + cover.context_label(c));
  return format_terms(names, ineq.coefficients) + " <= " + ineq.bound.str();
}

}  // namespace ctxlab
