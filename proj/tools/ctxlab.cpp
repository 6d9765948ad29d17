#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "ctxlab/contextuality.hpp"
#include "ctxlab/inequalities.hpp"
#include "ctxlab/json_io.hpp"
#include "ctxlab/polytope.hpp"
#include "ctxlab/quantum.hpp"
#include "ctxlab/selftest.hpp"
#include "ctxlab/zoo.hpp"

namespace {

using namespace ctxlab;

struct Options {
  std::string model_file;
  std::string zoo_name;
  std::string scenario;
  std::string inequality_file;
  std::string target = "logical";
  std::string out_file;
  std::string setup_file;
  std::string preset;
  std::uint64_t seed = 20240601;
  std::optional<std::size_t> limit_vars;
  std::uint64_t max_denominator = kDefaultMaxDenominator;
  bool json = false;
};

/// Usage problems detected after parsing (exit status 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Limits limits_of(const Options& o) {
  Limits limits;
  if (o.limit_vars) {
    limits.max_variables = *o.limit_vars;
    limits.max_polytope_variables = *o.limit_vars;
  }
  return limits;
}

MeasurementCover scenario_cover(const std::string& text) {
  std::vector<std::size_t> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      parts.push_back(std::stoul(item));
    } catch (const std::exception&) {
      throw UsageError("--scenario expects n,k,p");
    }
  }
  if (parts.size() != 3) throw UsageError("--scenario expects n,k,p");
  return bell_scenario_cover(parts[0], parts[1], parts[2]);
}

std::size_t sources(const Options& o) {
  return !o.model_file.empty() + !o.zoo_name.empty() + !o.scenario.empty();
}

/// A probability or support model from --model or --zoo.
AnyModel load_model(const Options& o) {
  if (!o.scenario.empty() || sources(o) != 1) throw UsageError("give exactly one of --model or --zoo");
  if (!o.model_file.empty()) return any_model_from_json(read_json_file(o.model_file));
  auto fixture = zoo(o.zoo_name);
  if (auto* m = std::get_if<EmpiricalModel>(&fixture)) return *m;
  if (auto* s = std::get_if<SupportModel>(&fixture)) return *s;
  throw DomainError("zoo entry '" + o.zoo_name + "' is an inequality, not a model");
}

EmpiricalModel load_probability_model(const Options& o) {
  auto any = load_model(o);
  if (auto* m = std::get_if<EmpiricalModel>(&any)) return *m;
  throw DomainError("this command needs a probability model, not a support table");
}

MeasurementCover load_cover(const Options& o) {
  if (sources(o) != 1) throw UsageError("give exactly one of --model, --zoo or --scenario");
  if (!o.scenario.empty()) return scenario_cover(o.scenario);
  if (!o.zoo_name.empty()) {
    auto fixture = zoo(o.zoo_name);
    if (auto* f = std::get_if<CorrelationFixture>(&fixture)) return f->cover;
  }
  auto any = load_model(o);
  return std::visit([](const auto& m) { return m.cover(); }, any);
}

void emit(const Options& o, const Json& j, const std::string& text) {
  if (!o.out_file.empty()) write_json_file(o.out_file, j);
  if (o.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

std::string report(const Rational& value) { return to_report_string(value); }

std::string describe(const MeasurementCover& cover, const LogicalBellInequality& ineq) {
  std::ostringstream out;
  bool first = true;
  for (const auto& t : ineq.terms()) {
    if (!first) out << " + ";
    if (t.multiplicity != 1) out << t.multiplicity << " ";
    out << "p(" << t.formula.formula().to_string(cover) << ")";
    first = false;
  }
  if (first) out << "0";
  out << " <= " << ineq.bound();
  return out.str();
}

struct Violation {
  std::string source;
  LogicalBellInequality inequality;
  LogicalEvaluation evaluation;
};

int run_classify(const Options& o) {
  const auto limits = limits_of(o);
  auto any = load_model(o);
  Json j;
  std::ostringstream text;

  if (auto* support = std::get_if<SupportModel>(&any)) {
    auto cls = classify_support(*support, limits);
    j["class"] = cls ? to_string(*cls) : "UNDETERMINED_BY_SUPPORT";
    j["contextual"] = cls.has_value();
    text << "class: " << j["class"].get<std::string>() << "\n";
    Json witnesses = Json::array();
    for (auto [c, s] : unextendable_cells(*support, limits)) {
      witnesses.push_back({{"context", c}, {"bits", format_bitstring(s, support->cover().context(c).size())}});
    }
    j["unextendable_cells"] = witnesses;
    text << "cells without a global section: " << witnesses.size() << "\n";
    if (auto cells = unextendable_cells(*support, limits); !cells.empty()) {
      auto [c, s] = cells.front();
      auto witness = possibilistic_witness_inequality(*support, c, s, limits);
      j["witness_inequality"] = logical_to_json(support->cover(), witness);
      text << "witness inequality: " << describe(support->cover(), witness) << "\n";
    }
    auto canonical = canonical_support_inequality(*support, limits);
    j["canonical_inequality"] = logical_to_json(support->cover(), canonical);
    text << "canonical inequality: " << describe(support->cover(), canonical) << "\n";
    emit(o, j, text.str());
    return 0;
  }

  const auto& model = std::get<EmpiricalModel>(any);
  const auto& cover = model.cover();
  auto cls = classify(model, limits);
  j["class"] = to_string(cls);
  j["contextual"] = cls != ContextualityClass::Noncontextual;
  text << "class: " << to_string(cls) << "\n";

  std::vector<Violation> candidates;
  auto add = [&](std::string source, LogicalBellInequality ineq) {
    auto eval = evaluate_logical(model, ineq, limits);
    candidates.push_back({std::move(source), std::move(ineq), eval});
  };
  add("support", canonical_support_inequality(model, limits));
  add("correlation-sign", correlation_sign_inequality(model, limits));
  auto support = support_of(model);
  for (auto [c, s] : unextendable_cells(support, limits)) {
    add("witness " + cover.context_label(c) + ":" + format_bitstring(s, cover.context(c).size()),
        possibilistic_witness_inequality(support, c, s, limits));
  }
  const auto* best = &candidates.front();
  for (const auto& v : candidates) {
    if (v.evaluation.violation > best->evaluation.violation) best = &v;
  }
  const auto& canonical = candidates.front().evaluation;
  j["canonical_violation"] = to_fraction_string(best->evaluation.violation);
  j["canonical_source"] = best->source;
  j["canonical_inequality"] = logical_to_json(cover, best->inequality);
  j["support_inequality"] = {{"lhs", to_fraction_string(canonical.lhs)},
                             {"bound", to_fraction_string(canonical.bound)},
                             {"maximal", canonical.maximal}};
  j["maximal_violation"] = canonical.maximal;
  text << "canonical violation: " << report(best->evaluation.violation) << " (" << best->source << ": "
       << describe(cover, best->inequality) << ")\n";
  text << "support inequality: " << report(canonical.lhs) << " against " << canonical.bound
       << (canonical.maximal ? ", maximal violation" : "") << "\n";

  const auto& sign = candidates[1].inequality;
  std::vector<TaggedFormula> formulas;
  for (const auto& t : sign.terms()) formulas.push_back(t.formula);
  if (!is_jointly_satisfiable(formulas, cover.num_variables(), limits)) {
    auto chsh = chsh_functional(model, formulas, limits);
    Rational bound(formulas.size() - 2);
    j["chsh"] = {{"value", to_fraction_string(chsh)},
                 {"bound", to_fraction_string(bound)},
                 {"violation", to_fraction_string(std::max(Rational(0), chsh - bound))}};
    text << "CHSH value: " << report(chsh) << " against " << bound << "\n";
  }
  if (cls == ContextualityClass::Noncontextual) {
    auto d = find_noncontextual_decomposition(model, limits);
    j["decomposition"] = decomposition_to_json(*d);
    text << "decomposition:";
    for (const auto& [t, w] : d->weights) text << " " << t.bitstring() << ":" << to_fraction_string(w);
    text << "\n";
  }
  emit(o, j, text.str());
  return 0;
}

int run_derive(const Options& o) {
  const auto limits = limits_of(o);
  auto cover = load_cover(o);
  Json j;
  j["cover"] = cover_to_json(cover);
  std::ostringstream text;
  if (o.target == "rational") {
    auto set = noncontextual_polytope(cover, limits);
    j["inequalities"] = inequality_set_to_json(cover, set)["inequalities"];
    for (const auto& ineq : set.inequalities) text << format_inequality(cover, ineq) << "\n";
  } else if (o.target == "logical") {
    auto set = complete_logical_bell_set(cover, limits);
    Json list = Json::array();
    bool all_verified = true;
    for (const auto& ineq : set) {
      bool ok = ineq.is_k_consistent(cover.num_variables(), limits);
      all_verified = all_verified && ok;
      auto entry = logical_to_json(cover, ineq);
      entry["verified"] = ok;
      list.push_back(entry);
      text << describe(cover, ineq) << (ok ? "" : "  [NOT K-CONSISTENT]") << "\n";
    }
    j["inequalities"] = list;
    j["verified"] = all_verified;
    text << set.size() << " logical Bell inequalities, "
         << (all_verified ? "all K-consistent" : "some NOT K-consistent") << "\n";
  } else if (o.target == "correlation") {
    auto set = correlation_polytope(cover, limits);
    Json list = Json::array();
    for (const auto& ineq : set) {
      list.push_back(correlation_to_json(ineq));
      text << format_inequality(cover, ineq) << "\n";
    }
    j["inequalities"] = list;
  } else {
    throw UsageError("--target must be logical, rational or correlation");
  }
  emit(o, j, text.str());
  return 0;
}

/// The inequality from --inequality (any of the three forms), or the zoo's correlation
/// fixture when --zoo names one.
Json load_inequality(const Options& o) {
  if (!o.inequality_file.empty()) return read_json_file(o.inequality_file);
  if (!o.zoo_name.empty()) {
    auto fixture = zoo(o.zoo_name);
    if (auto* f = std::get_if<CorrelationFixture>(&fixture)) return correlation_to_json(f->inequality);
  }
  throw UsageError("--inequality FILE is required");
}

std::string type_of(const Json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw DomainError("inequality file needs a \"type\" of logical, rational or correlation");
  }
  return j["type"].get<std::string>();
}

int run_eval(const Options& o) {
  const auto limits = limits_of(o);
  auto model = load_probability_model(o);
  const auto& cover = model.cover();
  auto ij = load_inequality(o);
  auto type = type_of(ij);
  Rational lhs;
  Rational bound;
  bool maximal = false;
  if (type == "logical") {
    auto eval = evaluate_logical(model, logical_from_json(ij, cover, limits), limits);
    lhs = eval.lhs;
    bound = eval.bound;
    maximal = eval.maximal;
  } else if (type == "rational") {
    auto ineq = rational_from_json(ij, cover);
    lhs = evaluate_rational(model, ineq);
    bound = ineq.bound;
  } else if (type == "correlation") {
    auto ineq = correlation_from_json(ij, cover);
    lhs = evaluate_correlation(expectation_vector(model), ineq);
    bound = Rational(ineq.bound);
  } else {
    throw DomainError("unknown inequality type '" + type + "'");
  }
  Rational violation = std::max(Rational(0), lhs - bound);
  Json j{{"type", type},
         {"lhs", to_fraction_string(lhs)},
         {"bound", to_fraction_string(bound)},
         {"violation", to_fraction_string(violation)},
         {"violated", violation > 0}};
  if (type == "logical") j["maximal_violation"] = maximal;
  std::ostringstream text;
  text << "lhs: " << report(lhs) << "\nbound: " << report(bound) << "\nviolation: " << report(violation)
       << (maximal ? " (maximal)" : "") << "\n";
  emit(o, j, text.str());
  return 0;
}

int run_convert(const Options& o) {
  const auto limits = limits_of(o);
  auto cover = load_cover(o);
  auto ij = load_inequality(o);
  auto type = type_of(ij);
  Json j;
  std::ostringstream text;
  if (type == "rational" && o.target == "logical") {
    auto k = clear_denominators(rational_from_json(ij, cover));
    auto logical = rational_to_logical(cover, k.coefficients, k.bound, limits);
    j = logical_to_json(cover, logical);
    text << describe(cover, logical) << "\n";
  } else if (type == "correlation" && o.target == "logical") {
    auto logical = correlation_to_logical(cover, correlation_from_json(ij, cover), limits).normalized();
    j = logical_to_json(cover, logical);
    text << describe(cover, logical) << "\n";
  } else if (type == "logical" && o.target == "correlation") {
    auto corr = logical_to_correlation(cover, logical_from_json(ij, cover, limits), limits);
    j = correlation_to_json(corr);
    text << format_inequality(cover, corr) << "\n";
  } else {
    throw UsageError("supported conversions: rational->logical, correlation->logical, logical->correlation");
  }
  emit(o, j, text.str());
  return 0;
}

int run_expect(const Options& o) {
  auto model = load_probability_model(o);
  const auto& cover = model.cover();
  auto e = expectation_vector(model);
  Json values = Json::object();
  std::ostringstream text;
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    const auto& v = e.values(static_cast<Eigen::Index>(c));
    values[std::to_string(c)] = to_fraction_string(v);
    text << "E" << cover.context_label(c) << " = " << report(v) << "\n";
  }
  emit(o, Json{{"expectations", values}}, text.str());
  return 0;
}

StateVector random_state(std::size_t dimension, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  ComplexVector v(static_cast<Eigen::Index>(dimension));
  for (auto& a : v) a = {gauss(rng), gauss(rng)};
  v.normalize();
  return StateVector(v);
}

int run_quantum(const Options& o) {
  if (o.setup_file.empty() == o.preset.empty()) throw UsageError("give exactly one of --setup or --preset");
  std::optional<QuantumSetup> setup;
  if (!o.setup_file.empty()) {
    setup = quantum_setup_from_json(read_json_file(o.setup_file));
  } else if (o.preset == "bell") {
    setup = bell_setup();
  } else if (o.preset == "ghz") {
    setup = ghz_setup();
  } else if (o.preset == "ghz-full") {
    setup = ghz_setup(true);
  } else if (o.preset == "ks18") {
    setup = ks18_setup(random_state(4, o.seed));
  } else {
    throw UsageError("--preset must be bell, ghz, ghz-full or ks18");
  }
  auto model = born_model(setup->state, setup->cover, setup->observables, o.max_denominator);
  auto j = model_to_json(model);
  std::ostringstream text;
  const auto& cover = model.cover();
  for (ContextIndex c = 0; c < cover.num_contexts(); ++c) {
    text << cover.context_label(c) << ":";
    for (AssignmentBits s = 0; s < cover.context_size(c); ++s) {
      text << " " << format_bitstring(s, cover.context(c).size()) << "=" << to_fraction_string(model.probability(c, s));
    }
    text << "\n";
  }
  emit(o, j, text.str());
  return 0;
}

int run_zoo(const Options& o) {
  if (o.zoo_name.empty()) {
    Json j = zoo_names();
    std::ostringstream text;
    for (const auto& name : zoo_names()) text << name << "\n";
    emit(o, j, text.str());
    return 0;
  }
  auto fixture = zoo(o.zoo_name);
  Json j = std::visit(
      [](const auto& f) -> Json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, EmpiricalModel>) {
          return model_to_json(f);
        } else if constexpr (std::is_same_v<T, SupportModel>) {
          return support_to_json(f);
        } else {
          Json out = cover_to_json(f.cover);
          out["inequality"] = correlation_to_json(f.inequality);
          return out;
        }
      },
      fixture);
  if (!o.out_file.empty()) write_json_file(o.out_file, j);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_selftest_command(const Options& o) {
  SelftestOptions options;
  options.seed = o.seed;
  bool all = true;
  Json list = Json::array();
  for (int id = 1; id <= kNumCriteria; ++id) {
    auto r = run_criterion(id, options);
    all = all && r.passed;
    if (!o.json) std::cout << format_result(r) << std::endl;
    list.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"seconds", r.seconds},
                    {"detail", r.detail}});
  }
  if (o.json) std::cout << list.dump(2) << "\n";
  if (!o.out_file.empty()) write_json_file(o.out_file, list);
  return all ? 0 : 1;
}

void add_model_options(CLI::App* cmd, Options& o, bool scenario) {
  cmd->add_option("--model", o.model_file, "model JSON file");
  cmd->add_option("--zoo", o.zoo_name, "built-in fixture name");
  if (scenario) cmd->add_option("--scenario", o.scenario, "Bell scenario n,k,p");
}

void add_common_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out_file, "write the JSON result to FILE");
  cmd->add_option("--limit-vars", o.limit_vars, "enumeration limit on |X|");
  cmd->add_flag("--json", o.json, "print JSON instead of a report");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Contextuality analysis and logical Bell inequalities"};
  app.require_subcommand(1);

  auto* classify_cmd = app.add_subcommand("classify", "classify a model and report violations");
  add_model_options(classify_cmd, o, false);
  add_common_options(classify_cmd, o);

  auto* derive_cmd = app.add_subcommand("derive", "complete inequality set for a cover");
  add_model_options(derive_cmd, o, true);
  derive_cmd->add_option("--target", o.target, "logical, rational or correlation");
  add_common_options(derive_cmd, o);

  auto* eval_cmd = app.add_subcommand("eval", "evaluate an inequality on a model");
  add_model_options(eval_cmd, o, false);
  eval_cmd->add_option("--inequality", o.inequality_file, "inequality JSON file");
  add_common_options(eval_cmd, o);

  auto* convert_cmd = app.add_subcommand("convert", "convert between inequality forms");
  add_model_options(convert_cmd, o, true);
  convert_cmd->add_option("--inequality", o.inequality_file, "inequality JSON file");
  convert_cmd->add_option("--target", o.target, "logical or correlation");
  add_common_options(convert_cmd, o);

  auto* expect_cmd = app.add_subcommand("expect", "expectation vector of a model");
  add_model_options(expect_cmd, o, false);
  add_common_options(expect_cmd, o);

  auto* quantum_cmd = app.add_subcommand("quantum", "Born-rule model from a state and observables");
  quantum_cmd->add_option("--setup", o.setup_file, "quantum setup JSON file");
  quantum_cmd->add_option("--preset", o.preset, "bell, ghz, ghz-full or ks18");
  quantum_cmd->add_option("--seed", o.seed, "seed for the ks18 random state");
  quantum_cmd->add_option("--max-denominator", o.max_denominator, "rationalization bound");
  add_common_options(quantum_cmd, o);

  auto* zoo_cmd = app.add_subcommand("zoo", "list fixtures or print one");
  zoo_cmd->add_option("--zoo", o.zoo_name, "fixture to print");
  zoo_cmd->add_option("--out", o.out_file, "write the JSON to FILE");

  auto* selftest_cmd = app.add_subcommand("selftest", "run the acceptance criteria");
  selftest_cmd->add_option("--seed", o.seed, "seed for randomized checks");
  add_common_options(selftest_cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*classify_cmd) return run_classify(o);
    if (*derive_cmd) return run_derive(o);
    if (*eval_cmd) return run_eval(o);
    if (*convert_cmd) return run_convert(o);
    if (*expect_cmd) return run_expect(o);
    if (*quantum_cmd) return run_quantum(o);
    if (*zoo_cmd) return run_zoo(o);
    if (*selftest_cmd) return run_selftest_command(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
