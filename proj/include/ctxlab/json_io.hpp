#pragma once

#include <filesystem>
#include <variant>

#include <json.hpp>

#include "ctxlab/contextuality.hpp"
#include "ctxlab/inequalities.hpp"
#include "ctxlab/polytope.hpp"
#include "ctxlab/quantum.hpp"

namespace ctxlab {

using Json = nlohmann::ordered_json;

/// All readers throw DomainError on malformed input.

Json cover_to_json(const MeasurementCover& cover);
MeasurementCover cover_from_json(const Json& j);

/// {"variables", "contexts", "rows": {"<context index>": {"<bits>": "p/q"}}}; zero
/// cells are omitted on output and default to 0 on input.
Json model_to_json(const EmpiricalModel& model);
EmpiricalModel model_from_json(const Json& j);

/// As model_to_json, with each row an array of bitstrings.
Json support_to_json(const SupportModel& support);
SupportModel support_from_json(const Json& j);

using AnyModel = std::variant<EmpiricalModel, SupportModel>;
AnyModel any_model_from_json(const Json& j);

/// {"type": "logical", "terms": [{"k", "context", "formula"}], "bound"}; contexts and
/// formulas are read against `cover`.
Json logical_to_json(const MeasurementCover& cover, const LogicalBellInequality& ineq);
LogicalBellInequality logical_from_json(const Json& j, const MeasurementCover& cover,
                                        const Limits& limits = {});

/// {"type": "rational", "coefficients": {"<context index>:<bits>": "p/q"}, "bound": "p/q"}
Json rational_to_json(const MeasurementCover& cover, const RationalInequality& ineq);
RationalInequality rational_from_json(const Json& j, const MeasurementCover& cover);

/// {"type": "correlation", "coefficients": {"<context index>": l}, "bound": M}
Json correlation_to_json(const CorrelationInequality& ineq);
CorrelationInequality correlation_from_json(const Json& j, const MeasurementCover& cover);

/// {"<global bits>": "p/q"}
Json decomposition_to_json(const NoncontextualDecomposition& decomposition);
NoncontextualDecomposition decomposition_from_json(const Json& j, const MeasurementCover& cover);

/// {"variables", "rows": [{"coefficients": ["p/q", ...], "relation": ">=", "rhs": "p/q"}]}
Json linear_system_to_json(const LinearSystem& system);
LinearSystem linear_system_from_json(const Json& j);

/// {"inequalities": [rational inequality, ...]}
Json inequality_set_to_json(const MeasurementCover& cover, const InequalitySet& set);
InequalitySet inequality_set_from_json(const Json& j, const MeasurementCover& cover);

/// {"variables", "contexts", "state": [[re, im], ...],
///  "observables": {"x": [[re, im], ...] (P0, row-major)} or "rays": {"x": [..]}}
QuantumSetup quantum_setup_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace ctxlab
