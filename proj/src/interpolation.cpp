#include "condlab/interpolation.hpp"

#include <random>

#include "condlab/errors.hpp"
#include "condlab/parallel.hpp"
#include "condlab/spaces.hpp"

namespace condlab {

std::string to_string(MapName name) {
  switch (name) {
    case MapName::Q: return "Q";
    case MapName::R: return "R";
    case MapName::T: return "T";
    case MapName::T0: return "T0";
    case MapName::L: return "L";
  }
  return "?";
}

SequenceMap sequence_map(MapName name, std::size_t n) {
  if (n == 0) throw InvalidArgument("sequence maps need dim >= 1");
  if ((name == MapName::R || name == MapName::L) && n < 2)
    throw InvalidArgument("R and L need dim >= 2");
  RationalMatrix m;
  switch (name) {
    case MapName::Q:
      m = RationalMatrix(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k <= i; ++k) m(i, k) = 1;
      break;
    case MapName::R:
      m = RationalMatrix(n - 1, n);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        m(i, i + 1) += 1;
        m(i, 0) -= 1;
      }
      break;
    case MapName::T:
      m = RationalMatrix(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) m(i, i - 1) += 1;
        m(i, n - 1) -= 1;
      }
      break;
    case MapName::T0:
      m = RationalMatrix(n + 1, n);
      for (std::size_t i = 0; i < n; ++i) m(i + 1, i) = 1;
      break;
    case MapName::L:
      m = RationalMatrix(n - 1, n);
      for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = 1;
      break;
  }
  return {name, n, std::move(m)};
}

RationalVector apply_map(const SequenceMap& map, const RationalVector& f) {
  if (f.size() != map.dim)
    throw DimensionMismatch("map " + to_string(map.name) + " expects length " +
                            std::to_string(map.dim));
  return map.matrix.apply(f);
}

Rational v1_norm_no_drop(const RationalVector& a) {
  Rational s = 0, prev = 0;
  for (const auto& x : a) {
    s += abs(Rational(x - prev));
    prev = x;
  }
  return s;
}

IsometryReport isometry_check_Q(std::size_t samples, std::uint64_t seed, std::size_t max_dim) {
  if (max_dim == 0) throw InvalidArgument("max_dim must be positive");
  IsometryReport report;
  report.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    std::mt19937_64 rng(substream_seed(seed, s));
    std::uniform_int_distribution<std::size_t> len(1, max_dim);
    std::uniform_int_distribution<int> num(-20, 20), den(1, 12);
    const std::size_t n = len(rng);
    RationalVector f(n);
    Rational l1 = 0, total = 0;
    for (auto& x : f) {
      x = Rational(num(rng), den(rng));
      x.canonicalize();
      l1 += abs(x);
      total += x;
    }
    if (v1_norm_no_drop(apply_map(sequence_map(MapName::Q, n), f)) == l1) ++report.passed_plain;

    RationalVector g = f;
    g.push_back(-total);
    const Rational g1 = l1 + abs(total);
    const Scalar v = norm(apply_map(sequence_map(MapName::Q, n + 1), g), NormSpec::v1(n + 1));
    if (v.is_exact() && v.exact() == g1) ++report.passed_paired;
  }
  return report;
}

NormSpec pisier_xu_space(const Rational& theta, const Rational& q, std::size_t dim,
                         const QuadratureParams& quadrature) {
  if (theta <= 0 || theta >= 1) throw InvalidArgument("theta must lie in (0,1)");
  if (q < 1) throw InvalidArgument("q must be at least 1");
  if (dim == 0) throw InvalidArgument("dim must be positive");
  return NormSpec::interpolated(NormSpec::v1(dim), NormSpec::sup(dim), theta, q, quadrature);
}

}  // namespace condlab
