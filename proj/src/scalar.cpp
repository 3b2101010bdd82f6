#include "condlab/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "condlab/errors.hpp"

namespace condlab {

std::string to_string(Certification c) {
  switch (c) {
    case Certification::CertifiedExact: return "certified-exact";
    case Certification::WitnessLowerBound: return "witness-lower-bound";
    case Certification::HeuristicLowerBound: return "heuristic-lower-bound";
  }
  return "unknown";
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Exact: return "exact";
    case Mode::Witness: return "witness";
    case Mode::Heuristic: return "heuristic";
  }
  return "unknown";
}

Mode parse_mode(const std::string& text) {
  if (text == "exact") return Mode::Exact;
  if (text == "witness") return Mode::Witness;
  if (text == "heuristic") return Mode::Heuristic;
  throw InvalidArgument("unknown mode '" + text + "'");
}

const Rational& Scalar::exact() const {
  if (!is_exact()) throw InvalidArgument("scalar is not exact");
  return std::get<Rational>(value_);
}

double Scalar::to_double() const {
  if (is_exact()) return std::get<Rational>(value_).get_d();
  return std::get<double>(value_);
}

std::string Scalar::decimal() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", to_double());
  return buf;
}

std::string Scalar::exact_text() const {
  return is_exact() ? format_rational(exact()) : std::string();
}

namespace {

double joint_tolerance(const Scalar& a, const Scalar& b) {
  return std::max(a.tolerance(), b.tolerance());
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() + b.exact()));
  return Scalar(a.to_double() + b.to_double(), joint_tolerance(a, b));
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() - b.exact()));
  return Scalar(a.to_double() - b.to_double(), joint_tolerance(a, b));
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() * b.exact()));
  return Scalar(a.to_double() * b.to_double(), joint_tolerance(a, b));
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) {
    if (b.exact() == 0) throw InvalidArgument("division by zero");
    return Scalar(Rational(a.exact() / b.exact()));
  }
  return Scalar(a.to_double() / b.to_double(), joint_tolerance(a, b));
}

int compare(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return cmp(a.exact(), b.exact()) < 0 ? -1 : (a.exact() == b.exact() ? 0 : 1);
  const double x = a.to_double(), y = b.to_double();
  const double tol = joint_tolerance(a, b) * std::max({1.0, std::fabs(x), std::fabs(y)});
  if (std::fabs(x - y) <= tol) return 0;
  return x < y ? -1 : 1;
}

Scalar max(const Scalar& a, const Scalar& b) { return b > a ? b : a; }

}  // namespace condlab
