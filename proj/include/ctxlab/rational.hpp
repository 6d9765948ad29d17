#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace ctxlab {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorQ = Vector<Rational>;
using MatrixQ = Matrix<Rational>;

/// Parses "p/q", "p", or "-p/q". Throws DomainError on malformed text or zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; the denominator is always written, including "/1".
std::string to_fraction_string(const Rational& value);

/// Human form: "p/q (0.25)" or "3 (3)".
std::string to_report_string(const Rational& value);

double to_double(const Rational& value);

/// Closest rational to x with denominator at most max_denominator (continued fractions).
Rational best_rational_approximation(double x, std::uint64_t max_denominator);

Integer lcm_of_denominators(std::span<const Rational> values);

/// Exact conversion; throws DomainError when the value is not an integer.
Integer to_integer(const Rational& value);

}  // namespace ctxlab
