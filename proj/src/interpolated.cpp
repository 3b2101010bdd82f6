#include <array>
#include <cmath>
#include <map>

#include "condlab/errors.hpp"
#include "condlab/spaces.hpp"

namespace condlab {

namespace {

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 8> kNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

struct Line {
  double intercept;
  double slope;
  double at(double t) const { return intercept + slope * t; }
};

struct Piece {
  double from, to;
  Line line;
};

class Integrator {
 public:
  Integrator(const RealVector& f, const NormSpec& spec)
      : f_(f), spec0_(spec.base0()), spec1_(spec.base1()),
        theta_(spec.theta().get_d()), q_(spec.q().get_d()) {}

  Line line_at(double t) {
    auto it = cache_.find(t);
    if (it == cache_.end()) {
      const KSplit k = k_functional_split(f_, t, spec0_, spec1_);
      it = cache_.emplace(t, Line{k.norm0, k.norm1}).first;
    }
    return it->second;
  }

  /// Splits [t1, t2] into pieces on which K is linear, using the fact
  /// that K is the lower envelope of its supporting lines.
  void refine(double t1, Line l1, double t2, Line l2, int depth, std::vector<Piece>& out) {
    if (depth > 200) throw QuadratureFailure("breakpoint search did not terminate", t1, t2, 0, 0);
    const double scale = std::max({1.0, std::abs(l1.at(t2)), std::abs(l2.at(t1))});
    if (std::abs(l1.slope - l2.slope) * t2 <= 1e-11 * scale) {
      out.push_back({t1, t2, l1});
      return;
    }
    const double t = (l2.intercept - l1.intercept) / (l1.slope - l2.slope);
    if (!(t > t1) || !(t < t2)) {
      // Rounding put the crossing outside the cell; use the chord.
      const double k1 = l1.at(t1), k2 = l2.at(t2);
      const double slope = (k2 - k1) / (t2 - t1);
      out.push_back({t1, t2, Line{k1 - slope * t1, slope}});
      return;
    }
    const Line mid = line_at(t);
    const double corner = l1.at(t);
    if (mid.at(t) >= corner - 1e-10 * std::max(1.0, corner)) {
      out.push_back({t1, t, l1});
      out.push_back({t, t2, l2});
      return;
    }
    refine(t1, l1, t, mid, depth + 1, out);
    refine(t, mid, t2, l2, depth + 1, out);
  }

  /// Integral of line(t)^q t^(-1-theta q) over a piece, in log t with
  /// panels no wider than `h`.
  double integrate(const Piece& p, double h) const {
    const double s0 = std::log(p.from), s1 = std::log(p.to);
    const int panels = std::max(1, static_cast<int>(std::ceil((s1 - s0) / h)));
    const double width = (s1 - s0) / panels;
    double total = 0;
    for (int k = 0; k < panels; ++k) {
      const double mid = s0 + (k + 0.5) * width;
      for (std::size_t i = 0; i < kNodes.size(); ++i) {
        const double s = mid + 0.5 * width * kNodes[i];
        const double t = std::exp(s);
        const double value = std::max(0.0, p.line.at(t));
        total += kWeights[i] * 0.5 * width * std::pow(value, q_) * std::exp(-theta_ * q_ * s);
      }
    }
    return total;
  }

  /// The same integral in closed form for integer q, by expanding
  /// (a + b t)^q. All terms are nonnegative, so nothing cancels.
  double integrate_exact(const Piece& p, int q) const {
    const double a = std::max(0.0, p.line.intercept), b = std::max(0.0, p.line.slope);
    const double ratio = std::log(p.to / p.from);
    double total = 0, binom = 1;
    for (int j = 0; j <= q; ++j) {
      const double e = j - theta_ * q;
      const double moment = std::abs(e) < 1e-14
                                ? ratio
                                : std::pow(p.from, e) * std::expm1(e * ratio) / e;
      total += binom * std::pow(a, q - j) * std::pow(b, j) * moment;
      binom = binom * (q - j) / (j + 1);
    }
    return total;
  }

  double theta() const { return theta_; }
  double q() const { return q_; }

 private:
  const RealVector& f_;
  const NormSpec& spec0_;
  const NormSpec& spec1_;
  double theta_, q_;
  std::map<double, Line> cache_;
};

}  // namespace

double interpolated_norm(const RealVector& f, const NormSpec& spec) {
  if (spec.kind() != NormSpec::Kind::Interpolated)
    throw InvalidArgument("interpolated_norm needs an interpolated norm spec");
  if (f.size() != spec.dim()) throw DimensionMismatch("vector length differs from norm dimension");
  const double n0 = norm(f, spec.base0()), n1 = norm(f, spec.base1());
  if (n0 == 0 || n1 == 0) return 0;

  const QuadratureParams& params = spec.quadrature();
  Integrator in(f, spec);
  const double theta = in.theta(), q = in.q();
  double t_min = params.t_min ? params.t_min->get_d() : n0 / (1000 * n1);
  double t_max = params.t_max ? params.t_max->get_d() : 1000 * n0 / n1;

  // K(t) = t n1 below t_min and K(t) = n0 above t_max once these hold at
  // the bracket ends (K is concave, nondecreasing and below both bounds).
  int expansions = 0;
  while (in.line_at(t_min).at(t_min) < t_min * n1 * (1 - 1e-10)) {
    if (++expansions > params.refinement_limit)
      throw QuadratureFailure("lower tail never became linear", t_min, t_max, 0, 0);
    t_min /= 1000;
  }
  while (in.line_at(t_max).at(t_max) < n0 * (1 - 1e-10)) {
    if (++expansions > params.refinement_limit)
      throw QuadratureFailure("upper tail never became constant", t_min, t_max, 0, 0);
    t_max *= 1000;
  }
  const double tails = std::pow(n1, q) * std::pow(t_min, q * (1 - theta)) / (q * (1 - theta)) +
                       std::pow(n0, q) * std::pow(t_max, -theta * q) / (theta * q);

  const double span = std::log(t_max / t_min);
  if (spec.q().get_den() == 1 && spec.q() <= 64) {
    // The pieces are exact, so one pass suffices.
    const int qi = static_cast<int>(spec.q().get_num().get_si());
    std::vector<Piece> pieces;
    const int cells = 1;
    double left = t_min;
    Line left_line = in.line_at(left);
    for (int c = 1; c <= cells; ++c) {
      const double right = c == cells ? t_max : t_min * std::exp(span * c / cells);
      const Line right_line = in.line_at(right);
      in.refine(left, left_line, right, right_line, 0, pieces);
      left = right;
      left_line = right_line;
    }
    double total = tails;
    for (const auto& p : pieces) total += in.integrate_exact(p, qi);
    return std::pow(total, 1.0 / q);
  }

  double previous = NAN;
  for (int level = 0, cells = 8; level <= params.refinement_limit; ++level, cells *= 2) {
    std::vector<Piece> pieces;
    double left = t_min;
    Line left_line = in.line_at(left);
    for (int c = 1; c <= cells; ++c) {
      const double right = c == cells ? t_max : t_min * std::exp(span * c / cells);
      const Line right_line = in.line_at(right);
      in.refine(left, left_line, right, right_line, 0, pieces);
      left = right;
      left_line = right_line;
    }
    double total = tails;
    const double h = span / cells;
    for (const auto& p : pieces) total += in.integrate(p, h);
    const double value = std::pow(total, 1.0 / q);
    if (level > 0 && std::abs(value - previous) <= params.relative_tolerance * value) return value;
    if (level == params.refinement_limit)
      throw QuadratureFailure("interpolation quadrature did not converge", t_min, t_max, value,
                              previous);
    previous = value;
  }
  return previous;
}

Scalar interpolated_norm(const RationalVector& f, const NormSpec& spec) {
  const double tol = spec.kind() == NormSpec::Kind::Interpolated
                         ? std::max(kDefaultTolerance, spec.quadrature().relative_tolerance)
                         : kDefaultTolerance;
  return Scalar(interpolated_norm(to_real(f), spec), tol);
}

}  // namespace condlab
