#include "ctxlab/formula.hpp"

#include <algorithm>
#include <cctype>

#include "ctxlab/errors.hpp"

namespace ctxlab {

Formula Formula::constant(bool value) {
  return Formula(std::make_shared<const Node>(Node{Kind::Constant, value, 0, {}}));
}

Formula Formula::variable(VariableIndex v) {
  return Formula(std::make_shared<const Node>(Node{Kind::Variable, false, v, {}}));
}

Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Kind::Not, false, 0, {std::move(f)}}));
}

Formula Formula::conjunction(std::vector<Formula> operands) {
  if (operands.empty()) return constant(true);
  if (operands.size() == 1) return operands.front();
  return Formula(std::make_shared<const Node>(Node{Kind::And, false, 0, std::move(operands)}));
}

Formula Formula::disjunction(std::vector<Formula> operands) {
  if (operands.empty()) return constant(false);
  if (operands.size() == 1) return operands.front();
  return Formula(std::make_shared<const Node>(Node{Kind::Or, false, 0, std::move(operands)}));
}

Formula Formula::exclusive_or(std::vector<Formula> operands) {
  if (operands.empty()) return constant(false);
  if (operands.size() == 1) return operands.front();
  return Formula(std::make_shared<const Node>(Node{Kind::Xor, false, 0, std::move(operands)}));
}

Formula Formula::biconditional(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::Iff, false, 0, {std::move(lhs), std::move(rhs)}}));
}

std::vector<VariableIndex> Formula::variables() const {
  std::vector<VariableIndex> out;
  std::vector<const Node*> stack{node_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->kind == Kind::Variable) out.push_back(n->variable);
    for (const auto& op : n->operands) stack.push_back(op.node_.get());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

int precedence(Formula::Kind kind) {
  switch (kind) {
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::Xor: return 3;
    case Formula::Kind::And: return 4;
    case Formula::Kind::Not: return 5;
    default: return 6;
  }
}

void print(const Formula& f, const MeasurementCover& cover, std::string& out) {
  const auto paren = [&](const Formula& child, int parent_prec) {
    if (precedence(child.kind()) <= parent_prec) {
      out += "(";
      print(child, cover, out);
      out += ")";
    } else {
      print(child, cover, out);
    }
  };
  switch (f.kind()) {
    case Formula::Kind::Constant:
      out += f.constant_value() ? "TRUE" : "FALSE";
      return;
    case Formula::Kind::Variable:
      out += cover.variable_name(f.variable_index());
      return;
    case Formula::Kind::Not:
      out += "!";
      paren(f.operands().front(), precedence(Formula::Kind::Not) - 1);
      return;
    default:
      break;
  }
  const char* op = f.kind() == Formula::Kind::And   ? " & "
                   : f.kind() == Formula::Kind::Or  ? " | "
                   : f.kind() == Formula::Kind::Xor ? " ^ "
                                                    : " <-> ";
  const int prec = precedence(f.kind());
  for (std::size_t i = 0; i < f.operands().size(); ++i) {
    if (i) out += op;
    paren(f.operands()[i], prec);
  }
}

class Parser {
 public:
  Parser(std::string_view text, const MeasurementCover& cover) : text_(text), cover_(cover) {}

  Formula parse() {
    Formula f = parse_iff();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("formula '" + std::string(text_) + "': " + what + " at offset " +
                      std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  Formula parse_iff() {
    Formula lhs = parse_or();
    while (accept("<->")) lhs = Formula::biconditional(lhs, parse_or());
    return lhs;
  }

  Formula parse_or() {
    std::vector<Formula> ops{parse_xor()};
    while (accept("|")) ops.push_back(parse_xor());
    return Formula::disjunction(std::move(ops));
  }

  Formula parse_xor() {
    std::vector<Formula> ops{parse_and()};
    while (accept("^")) ops.push_back(parse_and());
    return Formula::exclusive_or(std::move(ops));
  }

  Formula parse_and() {
    std::vector<Formula> ops{parse_not()};
    while (accept("&")) ops.push_back(parse_not());
    return Formula::conjunction(std::move(ops));
  }

  Formula parse_not() {
    if (accept("!")) return Formula::negation(parse_not());
    return parse_atom();
  }

  Formula parse_atom() {
    skip_space();
    if (accept("(")) {
      Formula inner = parse_iff();
      if (!accept(")")) fail("expected ')'");
      return inner;
    }
    const auto start = pos_;
    if (pos_ < text_.size() &&
        (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
              text_[pos_] == '\'')) {
        ++pos_;
      }
    }
    if (start == pos_) fail("expected a variable, constant or '('");
    const auto name = text_.substr(start, pos_ - start);
    if (name == "TRUE") return Formula::constant(true);
    if (name == "FALSE") return Formula::constant(false);
    auto v = cover_.find_variable(name);
    if (!v) fail("unknown variable '" + std::string(name) + "'");
    return Formula::variable(*v);
  }

  std::string_view text_;
  const MeasurementCover& cover_;
  std::size_t pos_ = 0;
};

// Outcome patterns of the six low-order positions within a 64-assignment block.
constexpr std::uint64_t kLowPatterns[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};

}  // namespace

std::string Formula::to_string(const MeasurementCover& cover) const {
  std::string out;
  print(*this, cover, out);
  return out;
}

Formula parse_formula(std::string_view text, const MeasurementCover& cover) {
  return Parser(text, cover).parse();
}

BlockEnumerator::BlockEnumerator(std::span<const VariableIndex> domain) : size_(domain.size()) {
  if (size_ > 40) throw LimitExceeded("enumeration domain too large");
  num_blocks_ = size_ <= 6 ? 1 : (std::size_t{1} << (size_ - 6));
  VariableIndex max_var = 0;
  for (auto v : domain) max_var = std::max(max_var, v);
  position_of_.assign(domain.empty() ? 0 : max_var + 1, 0);
  for (std::size_t j = 0; j < domain.size(); ++j) position_of_[domain[j]] = j;
}

std::uint64_t BlockEnumerator::valid_mask(std::size_t) const {
  if (size_ >= 6) return ~std::uint64_t{0};
  return (std::uint64_t{1} << (std::size_t{1} << size_)) - 1;
}

std::uint64_t BlockEnumerator::word(std::size_t block, std::size_t position) const {
  const std::size_t bit = size_ - 1 - position;
  if (bit < 6) return kLowPatterns[bit];
  return ((block >> (bit - 6)) & 1U) ? ~std::uint64_t{0} : 0;
}

}  // namespace ctxlab
