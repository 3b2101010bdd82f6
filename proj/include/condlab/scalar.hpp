#pragma once

#include <string>
#include <variant>

#include "condlab/rational.hpp"

namespace condlab {

inline constexpr double kDefaultTolerance = 1e-9;

/// How a reported number was obtained.
enum class Certification {
  CertifiedExact,       ///< exhaustive or closed-form; the value is the constant
  WitnessLowerBound,    ///< a re-validated (f, A) certificate from a structured search
  HeuristicLowerBound,  ///< best value found by randomized search
};

/// Computation mode requested by callers.
enum class Mode { Exact, Witness, Heuristic };

std::string to_string(Certification c);
std::string to_string(Mode m);
Mode parse_mode(const std::string& text);

/// A real number that is either an exact rational or a binary float with a
/// comparison tolerance. Arithmetic stays exact while both sides are exact.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  Scalar(Rational value) : value_(std::move(value)) {}  // NOLINT
  Scalar(int value) : value_(Rational(value)) {}        // NOLINT
  explicit Scalar(double value, double tolerance = kDefaultTolerance)
      : value_(value), tolerance_(tolerance) {}

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  const Rational& exact() const;
  double to_double() const;
  double tolerance() const { return is_exact() ? 0.0 : tolerance_; }

  /// Decimal rendering with 12 significant digits.
  std::string decimal() const;
  /// "p/q" when exact, empty otherwise.
  std::string exact_text() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);

  /// Three-way comparison; float operands compare equal within the larger
  /// of the two tolerances (relative to magnitude when above one).
  friend int compare(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, const Scalar& b) { return compare(a, b) == 0; }
  friend bool operator<(const Scalar& a, const Scalar& b) { return compare(a, b) < 0; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return compare(a, b) > 0; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return compare(a, b) >= 0; }

 private:
  std::variant<Rational, double> value_;
  double tolerance_ = kDefaultTolerance;
};

/// Larger of the two; ties keep the first.
Scalar max(const Scalar& a, const Scalar& b);

}  // namespace condlab
