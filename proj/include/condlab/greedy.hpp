#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "condlab/bases.hpp"
#include "condlab/conditionality.hpp"

namespace condlab {

/// The permutation rho (0-based): decreasing modulus, ties by ascending
/// index. Zero coefficients take part.
std::vector<std::size_t> greedy_ordering(const RationalVector& coeffs);
std::vector<std::size_t> greedy_ordering(const RealVector& coeffs);

/// {rho(1), ..., rho(m)} for the coefficients of f, sorted.
std::vector<std::size_t> greedy_set(const Basis& b, const RationalVector& f, std::size_t m);

/// G_m(f) = S_A(f) with A the greedy set of size m.
RationalVector greedy_sum(const Basis& b, const RationalVector& f, std::size_t m);

struct QuasiGreedyOptions {
  Mode mode = Mode::Heuristic;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t samples = 64;
  /// Largest dimension for the exhaustive region search.
  std::size_t exact_limit = 8;
};

struct QuasiGreedyEstimate {
  /// Certified lower bound: norm(G_m f) / norm(f) for the stored witness.
  Scalar value;
  Certification flag = Certification::HeuristicLowerBound;
  /// The witness (quantity Gamma, subset = greedy set of size m).
  WitnessCertificate witness;
  Mode mode = Mode::Heuristic;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  /// In exact mode, the supremum over all greedy regions. It equals value
  /// when the supremum is attained; otherwise value is the best witness.
  std::optional<Scalar> certified_sup;
};

/// Lower bound for Gamma = sup_m ||G_m||. Sampled mode searches random
/// coefficient vectors, ball vertices and basis vectors with modulus
/// ascent. Exact mode first tries the sandwich witness = k_n, then
/// maximizes over every greedy region by linear programming.
QuasiGreedyEstimate quasi_greedy_estimate(const Basis& b, const QuasiGreedyOptions& options = {});

}  // namespace condlab
