#include "ctxlab/json_io.hpp"

#include <cmath>
#include <fstream>

namespace ctxlab {

namespace {

template <typename T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw DomainError(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("field '") + key + "': " + e.what());
  }
}

Rational rational_of(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw DomainError("expected a \"p/q\" string, got " + j.dump());
}

Integer integer_of(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  if (j.is_string()) return to_integer(parse_rational(j.get<std::string>()));
  throw DomainError("expected an integer, got " + j.dump());
}

Json integer_json(const Integer& value) {
  if (value >= std::numeric_limits<long long>::min() &&
      value <= std::numeric_limits<long long>::max()) {
    return value.convert_to<long long>();
  }
  return value.str();
}

ContextIndex context_index_of(const std::string& key, const MeasurementCover& cover) {
  std::size_t pos = 0;
  unsigned long c = 0;
  try {
    c = std::stoul(key, &pos);
  } catch (const std::exception&) {
    throw DomainError("bad context index '" + key + "'");
  }
  if (pos != key.size() || c >= cover.num_contexts()) {
    throw DomainError("bad context index '" + key + "'");
  }
  return c;
}

std::size_t cell_of(const std::string& key, const MeasurementCover& cover) {
  auto colon = key.find(':');
  if (colon == std::string::npos) throw DomainError("bad cell key '" + key + "'");
  auto c = context_index_of(key.substr(0, colon), cover);
  auto s = parse_bitstring(key.substr(colon + 1), cover.context(c).size());
  return cover.cell_index(c, s);
}

std::string cell_key(const MeasurementCover& cover, std::size_t cell) {
  ContextIndex c = 0;
  while (c + 1 < cover.num_contexts() && cover.cell_offset(c + 1) <= cell) ++c;
  return std::to_string(c) + ":" + format_bitstring(cell - cover.cell_offset(c), cover.context(c).size());
}

std::vector<std::string> context_names(const MeasurementCover& cover,
                                       std::span<const VariableIndex> ctx) {
  std::vector<std::string> names;
  for (auto v : ctx) names.push_back(cover.variable_name(v));
  return names;
}

std::complex<double> complex_of(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw DomainError("expected a complex number [re, im], got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Json cover_to_json(const MeasurementCover& cover) {
  Json j;
  j["variables"] = cover.variables();
  Json contexts = Json::array();
  for (const auto& ctx : cover.contexts()) contexts.push_back(context_names(cover, ctx));
  j["contexts"] = contexts;
  return j;
}

MeasurementCover cover_from_json(const Json& j) {
  return MeasurementCover(get<std::vector<std::string>>(j, "variables"),
                          get<std::vector<std::vector<std::string>>>(j, "contexts"));
}

Json model_to_json(const EmpiricalModel& model) {
  const auto& cover = model.cover();
  Json j = cover_to_json(cover);
  Json rows = Json::object();
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    Json row = Json::object();
    for (AssignmentBits s = 0; s < cover.context_size(c); ++s) {
      const auto& p = model.probability(c, s);
      if (p != 0) row[format_bitstring(s, cover.context(c).size())] = to_fraction_string(p);
    }
    rows[std::to_string(c)] = row;
  }
  j["rows"] = rows;
  return j;
}

EmpiricalModel model_from_json(const Json& j) {
  auto cover = cover_from_json(j);
  std::vector<VectorQ> rows;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    rows.push_back(VectorQ::Zero(static_cast<Eigen::Index>(cover.context_size(c))));
  }
  auto table = get<Json>(j, "rows");
  if (!table.is_object()) throw DomainError("'rows' must be an object");
  for (const auto& [key, row] : table.items()) {
    auto c = context_index_of(key, cover);
    if (!row.is_object()) throw DomainError("row " + key + " must map bitstrings to \"p/q\"");
    for (const auto& [bits, p] : row.items()) {
      rows[c](static_cast<Eigen::Index>(parse_bitstring(bits, cover.context(c).size()))) = rational_of(p);
    }
  }
  return EmpiricalModel(std::move(cover), std::move(rows));
}

Json support_to_json(const SupportModel& support) {
  const auto& cover = support.cover();
  Json j = cover_to_json(cover);
  Json rows = Json::object();
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    Json row = Json::array();
    for (auto s : support.support(c)) row.push_back(format_bitstring(s, cover.context(c).size()));
    rows[std::to_string(c)] = row;
  }
  j["rows"] = rows;
  return j;
}

SupportModel support_from_json(const Json& j) {
  auto cover = cover_from_json(j);
  std::vector<std::vector<AssignmentBits>> supports(cover.num_contexts());
  auto table = get<Json>(j, "rows");
  if (!table.is_object()) throw DomainError("'rows' must be an object");
  for (const auto& [key, row] : table.items()) {
    auto c = context_index_of(key, cover);
    if (!row.is_array()) throw DomainError("support row " + key + " must be an array");
    for (const auto& bits : row) {
      if (!bits.is_string()) throw DomainError("support entries must be bitstrings");
      supports[c].push_back(parse_bitstring(bits.get<std::string>(), cover.context(c).size()));
    }
  }
  return SupportModel(std::move(cover), std::move(supports));
}

AnyModel any_model_from_json(const Json& j) {
  auto rows = get<Json>(j, "rows");
  bool arrays = rows.is_object() && !rows.empty() && rows.begin()->is_array();
  if (arrays) return support_from_json(j);
  return model_from_json(j);
}

Json logical_to_json(const MeasurementCover& cover, const LogicalBellInequality& ineq) {
  Json j;
  j["type"] = "logical";
  Json terms = Json::array();
  for (const auto& t : ineq.terms()) {
    terms.push_back({{"k", t.multiplicity},
                     {"context", context_names(cover, t.formula.context())},
                     {"formula", t.formula.formula().to_string(cover)}});
  }
  j["terms"] = terms;
  j["bound"] = ineq.bound();
  return j;
}

LogicalBellInequality logical_from_json(const Json& j, const MeasurementCover& cover,
                                        const Limits& limits) {
  auto terms_json = get<Json>(j, "terms");
  if (!terms_json.is_array()) throw DomainError("'terms' must be an array");
  FormulaMultiset terms;
  for (const auto& t : terms_json) {
    auto k = get<long long>(t, "k");
    if (k < 0) throw DomainError("multiplicities must be non-negative");
    auto ctx = cover.parse_variable_set(get<std::vector<std::string>>(t, "context"));
    auto formula = parse_formula(get<std::string>(t, "formula"), cover);
    terms.push_back({static_cast<std::uint64_t>(k), TaggedFormula(std::move(ctx), formula)});
  }
  auto bound = get<long long>(j, "bound");
  if (bound < 0) throw DomainError("bound must be non-negative");
  return LogicalBellInequality(std::move(terms), static_cast<std::uint64_t>(bound),
                               cover.num_variables(), limits);
}

Json rational_to_json(const MeasurementCover& cover, const RationalInequality& ineq) {
  Json j;
  j["type"] = "rational";
  Json coefficients = Json::object();
  for (Eigen::Index i = 0; i < ineq.coefficients.size(); ++i) {
    if (ineq.coefficients(i) != 0) {
      coefficients[cell_key(cover, static_cast<std::size_t>(i))] = to_fraction_string(ineq.coefficients(i));
    }
  }
  j["coefficients"] = coefficients;
  j["bound"] = to_fraction_string(ineq.bound);
  return j;
}

RationalInequality rational_from_json(const Json& j, const MeasurementCover& cover) {
  RationalInequality ineq{VectorQ::Zero(static_cast<Eigen::Index>(cover.num_cells())),
                          rational_of(get<Json>(j, "bound"))};
  auto coefficients = get<Json>(j, "coefficients");
  if (!coefficients.is_object()) throw DomainError("'coefficients' must be an object");
  for (const auto& [key, value] : coefficients.items()) {
    ineq.coefficients(static_cast<Eigen::Index>(cell_of(key, cover))) = rational_of(value);
  }
  return ineq;
}

Json correlation_to_json(const CorrelationInequality& ineq) {
  Json j;
  j["type"] = "correlation";
  Json coefficients = Json::object();
  for (std::size_t c = 0; c < ineq.coefficients.size(); ++c) {
    if (ineq.coefficients[c] != 0) coefficients[std::to_string(c)] = integer_json(ineq.coefficients[c]);
  }
  j["coefficients"] = coefficients;
  j["bound"] = integer_json(ineq.bound);
  return j;
}

CorrelationInequality correlation_from_json(const Json& j, const MeasurementCover& cover) {
  CorrelationInequality ineq{std::vector<Integer>(cover.num_contexts(), 0),
                             integer_of(get<Json>(j, "bound"))};
  auto coefficients = get<Json>(j, "coefficients");
  if (!coefficients.is_object()) throw DomainError("'coefficients' must be an object");
  for (const auto& [key, value] : coefficients.items()) {
    ineq.coefficients[context_index_of(key, cover)] = integer_of(value);
  }
  return ineq;
}

Json decomposition_to_json(const NoncontextualDecomposition& decomposition) {
  Json j = Json::object();
  for (const auto& [t, w] : decomposition.weights) j[t.bitstring()] = to_fraction_string(w);
  return j;
}

NoncontextualDecomposition decomposition_from_json(const Json& j, const MeasurementCover& cover) {
  if (!j.is_object()) throw DomainError("decomposition must be an object");
  NoncontextualDecomposition d;
  for (const auto& [bits, w] : j.items()) {
    GlobalAssignment t{cover.num_variables(), parse_bitstring(bits, cover.num_variables())};
    d.weights.emplace_back(t, rational_of(w));
  }
  return d;
}

Json linear_system_to_json(const LinearSystem& system) {
  Json j;
  j["variables"] = system.variables();
  Json rows = Json::array();
  for (const auto& r : system.rows()) {
    Json coefficients = Json::array();
    for (const auto& a : r.coefficients) coefficients.push_back(to_fraction_string(a));
    rows.push_back({{"coefficients", coefficients}, {"relation", ">="}, {"rhs", to_fraction_string(r.rhs)}});
  }
  j["rows"] = rows;
  return j;
}

LinearSystem linear_system_from_json(const Json& j) {
  LinearSystem system(get<std::vector<std::string>>(j, "variables"));
  auto rows = get<Json>(j, "rows");
  if (!rows.is_array()) throw DomainError("'rows' must be an array");
  for (const auto& r : rows) {
    auto relation = get<std::string>(r, "relation");
    auto coefficients = get<Json>(r, "coefficients");
    if (!coefficients.is_array()) throw DomainError("row coefficients must be an array");
    VectorQ a(static_cast<Eigen::Index>(coefficients.size()));
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
      a(static_cast<Eigen::Index>(i)) = rational_of(coefficients[i]);
    }
    Rational rhs = rational_of(get<Json>(r, "rhs"));
    if (relation == ">=") {
      system.add_inequality(std::move(a), rhs);
    } else if (relation == "<=") {
      system.add_inequality(-a, -rhs);
    } else if (relation == "=") {
      system.add_equality(a, rhs);
    } else {
      throw DomainError("unknown relation '" + relation + "'");
    }
  }
  return system;
}

Json inequality_set_to_json(const MeasurementCover& cover, const InequalitySet& set) {
  Json list = Json::array();
  for (const auto& ineq : set.inequalities) list.push_back(rational_to_json(cover, ineq));
  return {{"inequalities", list}};
}

InequalitySet inequality_set_from_json(const Json& j, const MeasurementCover& cover) {
  auto list = get<Json>(j, "inequalities");
  if (!list.is_array()) throw DomainError("'inequalities' must be an array");
  InequalitySet set;
  for (const auto& item : list) set.inequalities.push_back(rational_from_json(item, cover));
  return set;
}

QuantumSetup quantum_setup_from_json(const Json& j) {
  auto cover = cover_from_json(j);
  auto state_json = get<Json>(j, "state");
  if (!state_json.is_array()) throw DomainError("'state' must be an array of [re, im]");
  ComplexVector amplitudes(static_cast<Eigen::Index>(state_json.size()));
  for (std::size_t i = 0; i < state_json.size(); ++i) {
    amplitudes(static_cast<Eigen::Index>(i)) = complex_of(state_json[i]);
  }
  StateVector state(amplitudes);
  const auto d = static_cast<Eigen::Index>(state.dimension());

  ObservableAssignment observables;
  if (j.contains("rays")) {
    const auto rays = get<Json>(j, "rays");
    for (const auto& [name, ray] : rays.items()) {
      auto v = ray.get<std::vector<double>>();
      if (static_cast<Eigen::Index>(v.size()) != d) {
        throw DomainError("ray for '" + name + "' does not match the state dimension");
      }
      Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(v.data(), d);
      if (u.norm() == 0) throw DomainError("ray for '" + name + "' is zero");
      u.normalize();
      observables.assign(name, DichotomicObservable::from_projector(
                                   (u * u.transpose()).cast<std::complex<double>>()));
    }
  }
  if (j.contains("observables")) {
    const auto projectors = get<Json>(j, "observables");
    for (const auto& [name, entries] : projectors.items()) {
      if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != d * d) {
        throw DomainError("projector for '" + name + "' must list d*d complex entries");
      }
      ComplexMatrix p(d, d);
      for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
          p(r, c) = complex_of(entries[static_cast<std::size_t>(r * d + c)]);
        }
      }
      observables.assign(name, DichotomicObservable::from_projector(p));
    }
  }
  observables.check_compatible(cover);
  return {std::move(state), std::move(cover), std::move(observables)};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace ctxlab
