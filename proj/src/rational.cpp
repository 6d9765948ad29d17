#include "ctxlab/rational.hpp"

#include <cmath>
#include <sstream>

#include "ctxlab/errors.hpp"

namespace ctxlab {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  const auto slash = text.find('/');
  const auto numerator = text.substr(0, slash);
  const auto denominator = slash == std::string_view::npos ? std::string_view{"1"}
                                                           : text.substr(slash + 1);
  if (!is_integer_literal(numerator) || !is_integer_literal(denominator) ||
      denominator.front() == '-') {
    throw DomainError("malformed rational '" + std::string(text) + "'");
  }
  Integer p(std::string(numerator.front() == '+' ? numerator.substr(1) : numerator));
  Integer q(std::string(denominator.front() == '+' ? denominator.substr(1) : denominator));
  if (q == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
  return Rational(p, q);
}

std::string to_fraction_string(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::string to_report_string(const Rational& value) {
  std::ostringstream out;
  out << to_fraction_string(value) << " (" << to_double(value) << ")";
  return out.str();
}

Rational best_rational_approximation(double x, std::uint64_t max_denominator) {
  if (!std::isfinite(x)) throw DomainError("cannot rationalize a non-finite value");
  if (max_denominator == 0) throw DomainError("max_denominator must be positive");
  // Convergents h/k of the continued fraction of x, plus the best semiconvergent.
  const bool negative = x < 0;
  double rest = std::fabs(x);
  Integer h_prev = 1, h = static_cast<std::uint64_t>(std::floor(rest));
  Integer k_prev = 0, k = 1;
  double frac = rest - std::floor(rest);
  const Rational target(rest);
  while (frac > 1e-300) {
    rest = 1.0 / frac;
    const double a_real = std::floor(rest);
    if (a_real > 1e18) break;
    const Integer a = static_cast<std::uint64_t>(a_real);
    frac = rest - a_real;
    const Integer k_next = a * k + k_prev;
    if (k_next > max_denominator) {
      // Largest semiconvergent that fits; keep it only if it beats the convergent.
      const Integer m = (Integer(max_denominator) - k_prev) / k;
      const Rational semi(m * h + h_prev, m * k + k_prev);
      const Rational conv(h, k);
      Rational best = conv;
      if (m > 0 && abs(semi - target) < abs(conv - target)) best = semi;
      return negative ? Rational(-best) : best;
    }
    const Integer h_next = a * h + h_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  Rational result(h, k);
  return negative ? Rational(-result) : result;
}

Integer lcm_of_denominators(std::span<const Rational> values) {
  Integer result = 1;
  for (const auto& v : values) {
    result = boost::multiprecision::lcm(result, boost::multiprecision::denominator(v));
  }
  return result;
}

Integer to_integer(const Rational& value) {
  if (boost::multiprecision::denominator(value) != 1) {
    throw DomainError("expected an integer, got " + value.str());
  }
  return boost::multiprecision::numerator(value);
}

}  // namespace ctxlab
