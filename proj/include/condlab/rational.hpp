#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace condlab {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;
using RealVector = std::vector<double>;

/// Parses "p/q" or "p" (optional sign, decimal digits only). The result is
/// canonical: lowest terms with a positive denominator.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p/q" in lowest terms, or "p" when q == 1.
std::string format_rational(const Rational& value);

inline Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

/// Exact square root when both numerator and denominator are perfect
/// squares; returns false otherwise.
bool exact_sqrt(const Rational& x, Rational& root);

/// Best rational approximation with denominator bounded by max_den.
Rational rationalize(double x, long max_den);

RealVector to_real(const RationalVector& v);

}  // namespace condlab
