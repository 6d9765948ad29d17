#include "ctxlab/cover.hpp"

#include <algorithm>
#include <set>

#include "ctxlab/errors.hpp"

namespace ctxlab {

MeasurementCover::MeasurementCover(std::vector<std::string> variables,
                                   const std::vector<std::vector<std::string>>& contexts)
    : variables_(std::move(variables)) {
  for (const auto& ctx : contexts) {
    std::vector<VariableIndex> indices;
    for (const auto& name : ctx) {
      auto found = std::find(variables_.begin(), variables_.end(), name);
      if (found == variables_.end()) {
        throw DomainError("context refers to unknown variable '" + name + "'");
      }
      indices.push_back(static_cast<VariableIndex>(found - variables_.begin()));
    }
    contexts_.push_back(std::move(indices));
  }
  validate_and_index();
}

MeasurementCover::MeasurementCover(std::vector<std::string> variables,
                                   std::vector<std::vector<VariableIndex>> contexts)
    : variables_(std::move(variables)), contexts_(std::move(contexts)) {
  validate_and_index();
}

void MeasurementCover::validate_and_index() {
  if (variables_.empty()) throw DomainError("cover has no variables");
  if (variables_.size() > 63) throw DomainError("cover has more than 63 variables");
  std::set<std::string> names(variables_.begin(), variables_.end());
  if (names.size() != variables_.size()) throw DomainError("duplicate variable names");
  std::vector<bool> covered(variables_.size(), false);
  std::set<std::vector<VariableIndex>> seen;
  for (auto& ctx : contexts_) {
    if (ctx.empty()) throw DomainError("empty context");
    std::sort(ctx.begin(), ctx.end());
    if (std::adjacent_find(ctx.begin(), ctx.end()) != ctx.end()) {
      throw DomainError("context lists a variable twice");
    }
    if (ctx.back() >= variables_.size()) throw DomainError("context variable out of range");
    if (ctx.size() > 24) throw DomainError("context larger than 24 variables");
    if (!seen.insert(ctx).second) throw DomainError("duplicate context");
    for (auto v : ctx) covered[v] = true;
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
    throw DomainError("contexts do not cover every variable");
  }
  cell_offsets_.assign(1, 0);
  for (const auto& ctx : contexts_) {
    cell_offsets_.push_back(cell_offsets_.back() + (std::size_t{1} << ctx.size()));
  }
}

std::optional<VariableIndex> MeasurementCover::find_variable(std::string_view name) const {
  auto found = std::find(variables_.begin(), variables_.end(), name);
  if (found == variables_.end()) return std::nullopt;
  return static_cast<VariableIndex>(found - variables_.begin());
}

VariableIndex MeasurementCover::variable_index(std::string_view name) const {
  if (auto v = find_variable(name)) return *v;
  throw DomainError("unknown variable '" + std::string(name) + "'");
}

std::optional<ContextIndex> MeasurementCover::find_context(
    std::span<const VariableIndex> vars) const {
  std::vector<VariableIndex> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());
  for (ContextIndex c = 0; c < contexts_.size(); ++c) {
    if (contexts_[c] == sorted) return c;
  }
  return std::nullopt;
}

std::string MeasurementCover::context_label(ContextIndex c) const {
  std::string label = "(";
  for (std::size_t i = 0; i < contexts_.at(c).size(); ++i) {
    if (i) label += ",";
    label += variables_[contexts_[c][i]];
  }
  return label + ")";
}

std::vector<VariableIndex> MeasurementCover::parse_variable_set(
    const std::vector<std::string>& names) const {
  std::vector<VariableIndex> out;
  for (const auto& n : names) out.push_back(variable_index(n));
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw DomainError("variable listed twice");
  }
  return out;
}

int LocalAssignment::value_of(VariableIndex v) const {
  auto found = std::find(domain.begin(), domain.end(), v);
  if (found == domain.end()) throw DomainError("variable not in assignment domain");
  return value_at(static_cast<std::size_t>(found - domain.begin()));
}

std::string LocalAssignment::bitstring() const { return format_bitstring(bits, domain.size()); }

std::string GlobalAssignment::bitstring() const { return format_bitstring(bits, size); }

AssignmentBits restrict_bits(AssignmentBits t, std::size_t num_variables,
                             std::span<const VariableIndex> vars) {
  AssignmentBits out = 0;
  for (auto v : vars) out = (out << 1) | ((t >> (num_variables - 1 - v)) & 1U);
  return out;
}

LocalAssignment restrict(const GlobalAssignment& t, std::span<const VariableIndex> vars) {
  LocalAssignment s;
  s.domain.assign(vars.begin(), vars.end());
  std::sort(s.domain.begin(), s.domain.end());
  for (auto v : s.domain) {
    if (v >= t.size) throw DomainError("restriction to unknown variable");
  }
  s.bits = restrict_bits(t.bits, t.size, s.domain);
  return s;
}

LocalAssignment restrict(const LocalAssignment& s, std::span<const VariableIndex> vars) {
  LocalAssignment out;
  out.domain.assign(vars.begin(), vars.end());
  std::sort(out.domain.begin(), out.domain.end());
  for (auto v : out.domain) out.bits = (out.bits << 1) | static_cast<AssignmentBits>(s.value_of(v));
  return out;
}

AssignmentBits parse_bitstring(std::string_view text, std::size_t length) {
  if (text.size() != length) {
    throw DomainError("bitstring '" + std::string(text) + "' should have length " +
                      std::to_string(length));
  }
  AssignmentBits bits = 0;
  for (char ch : text) {
    if (ch != '0' && ch != '1') throw DomainError("bad bitstring '" + std::string(text) + "'");
    bits = (bits << 1) | static_cast<AssignmentBits>(ch - '0');
  }
  return bits;
}

std::string format_bitstring(AssignmentBits bits, std::size_t length) {
  std::string out(length, '0');
  for (std::size_t i = 0; i < length; ++i) {
    if ((bits >> (length - 1 - i)) & 1U) out[i] = '1';
  }
  return out;
}

MeasurementCover bell_scenario_cover(std::size_t sites, std::size_t settings,
                                     std::size_t bits_per_setting) {
  if (sites == 0 || settings == 0 || bits_per_setting == 0) {
    throw DomainError("scenario parameters must be positive");
  }
  if (sites * settings * bits_per_setting > 63) throw DomainError("scenario too large");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < sites; ++i) {
    const std::string site = sites <= 26 ? std::string(1, static_cast<char>('a' + i))
                                         : "s" + std::to_string(i + 1);
    for (std::size_t j = 0; j < settings; ++j) {
      for (std::size_t l = 0; l < bits_per_setting; ++l) {
        std::string name = site + std::string(j, '\'');
        if (bits_per_setting > 1) name += "_" + std::to_string(l + 1);
        names.push_back(std::move(name));
      }
    }
  }
  std::vector<std::vector<VariableIndex>> contexts;
  std::size_t count = 1;
  for (std::size_t i = 0; i < sites; ++i) count *= settings;
  for (std::size_t code = 0; code < count; ++code) {
    std::vector<VariableIndex> ctx;
    std::size_t rest = code;
    std::vector<std::size_t> choice(sites);
    for (std::size_t i = sites; i-- > 0;) {
      choice[i] = rest % settings;
      rest /= settings;
    }
    for (std::size_t i = 0; i < sites; ++i) {
      for (std::size_t l = 0; l < bits_per_setting; ++l) {
        ctx.push_back((i * settings + choice[i]) * bits_per_setting + l);
      }
    }
    contexts.push_back(std::move(ctx));
  }
  return MeasurementCover(std::move(names), std::move(contexts));
}

}  // namespace ctxlab
