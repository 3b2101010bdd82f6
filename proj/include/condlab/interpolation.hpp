#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "condlab/matrix.hpp"
#include "condlab/norm_spec.hpp"

namespace condlab {

/// Sequence maps on truncations of F^N.
///   Q  partial sums, R^n -> R^n
///   R  a -> (a_{k+1} - a_1)_k, R^n -> R^(n-1)
///   T  a -> (a_{k-1} - a_n)_k with a_0 = 0, R^n -> R^n; the last
///      coordinate stands in for the limit
///   T0 a -> (0, a), R^n -> R^(n+1); the same map on c_0 truncations,
///      where the limit is 0
///   L  left shift, R^n -> R^(n-1)
enum class MapName { Q, R, T, T0, L };

std::string to_string(MapName name);

struct SequenceMap {
  MapName name;
  std::size_t dim;        ///< input length
  RationalMatrix matrix;  ///< output length x dim
};

SequenceMap sequence_map(MapName name, std::size_t dim);

/// Throws DimensionMismatch unless f.size() == map.dim.
RationalVector apply_map(const SequenceMap& map, const RationalVector& f);

/// |a_1| + sum |a_{k+1} - a_k|, without the final drop to zero. This is the
/// v1 norm of the eventually constant sequence (a_1, ..., a_n, a_n, ...).
Rational v1_norm_no_drop(const RationalVector& a);

struct IsometryReport {
  std::size_t samples = 0;
  /// ||Q f||_{v1, no drop} == ||f||_1
  std::size_t passed_plain = 0;
  /// ||Q g||_{V1} == ||g||_1 for g = (f, -sum f), whose partial sums end at 0
  std::size_t passed_paired = 0;
  bool all_passed() const { return passed_plain == samples && passed_paired == samples; }
};

/// Random exact-rational vectors of length 1..max_dim.
IsometryReport isometry_check_Q(std::size_t samples, std::uint64_t seed, std::size_t max_dim = 16);

/// (V1, Sup)_{theta,q} on R^dim.
NormSpec pisier_xu_space(const Rational& theta, const Rational& q, std::size_t dim,
                         const QuadratureParams& quadrature = {});

}  // namespace condlab
