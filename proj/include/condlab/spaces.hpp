#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "condlab/matrix.hpp"
#include "condlab/norm_spec.hpp"
#include "condlab/rational.hpp"
#include "condlab/scalar.hpp"

namespace condlab {

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

/// Norm of f. Exact for polyhedral specs, and for l_2 when the square
/// root is rational; floating point otherwise.
Scalar norm(const RationalVector& f, const NormSpec& spec);
double norm(const RealVector& f, const NormSpec& spec);

/// sup{ <phi, f> : norm(f) <= 1 }. Not available for interpolated specs.
Scalar dual_norm(const RationalVector& phi, const NormSpec& spec);
double dual_norm(const RealVector& phi, const NormSpec& spec);

/// A nonzero v with <phi, v> = dual_norm(phi) * norm(v). For polyhedral
/// specs v is a unit-ball vertex; for l_p it is the (unnormalized) Hoelder
/// extremal direction, exact for p = 2.
RationalVector dual_norm_maximizer(const RationalVector& phi, const NormSpec& spec);

/// Number of unit-ball vertices, counting +v and -v once.
double vertex_count_up_to_sign(const NormSpec& spec);
/// Number of linear functionals w with norm(f) = max_w |<w, f>|.
double dual_generator_count_up_to_sign(const NormSpec& spec);

/// Extreme points of the unit ball (both signs). Throws BudgetExceeded when
/// the count exceeds `budget` and NotSupported for non-polyhedral specs.
std::vector<RationalVector> unit_ball_vertices(const NormSpec& spec,
                                               std::uint64_t budget = 1u << 22);
/// Vertices with one representative per +/- pair.
std::vector<RationalVector> unit_ball_vertices_up_to_sign(const NormSpec& spec,
                                                          std::uint64_t budget = 1u << 22);
/// Functionals w (one per sign pair) with norm(f) = max_w |<w, f>|.
std::vector<RationalVector> dual_generators(const NormSpec& spec,
                                            std::uint64_t budget = 1u << 22);

struct OperatorNormOptions {
  Mode mode = Mode::Exact;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 0;
  std::size_t samples = 256;
  unsigned workers = 1;
};

struct OperatorNormResult {
  Scalar value;
  Certification flag = Certification::CertifiedExact;
  /// A nonzero domain vector whose image attains `value` (ratio
  /// norm(M v) / norm(v) equals value).
  RationalVector witness;
};

/// Operator norm of M: dom -> cod. Exact mode takes the cheaper of the
/// vertex route (max over domain vertices) and the dual route (max over
/// codomain dual generators of the dual norm of M^T w); l_2 -> l_2 is
/// certified through an exact eigenvalue check. Heuristic mode samples.
OperatorNormResult operator_norm(const RationalMatrix& m, const NormSpec& dom,
                                 const NormSpec& cod, const OperatorNormOptions& options = {});

/// Estimated elementary work for exact mode, or infinity when unsupported.
double exact_operator_norm_cost(const RationalMatrix& m, const NormSpec& dom, const NormSpec& cod);

/// Optimal split f = g + (f - g) of the K-functional at t.
struct KSplit {
  double value;  ///< norm0(g) + t * norm1(f - g)
  double norm0;  ///< norm(g, spec0): intercept of the supporting line
  double norm1;  ///< norm(f - g, spec1): slope of the supporting line
};

/// K(f, t) = min_g norm(g, spec0) + t norm(f - g, spec1), solved as a
/// linear program (exact when t is exact). Both specs must be polyhedral.
Scalar k_functional(const RationalVector& f, const Scalar& t, const NormSpec& spec0,
                    const NormSpec& spec1);
KSplit k_functional_split(const RealVector& f, double t, const NormSpec& spec0,
                          const NormSpec& spec1);
/// The same quantity from the dual program
/// max <phi, f> s.t. dual0(phi) <= 1, dual1(phi) <= t.
Scalar k_functional_dual(const RationalVector& f, const Scalar& t, const NormSpec& spec0,
                         const NormSpec& spec1);
double k_functional_dual(const RealVector& f, double t, const NormSpec& spec0,
                         const NormSpec& spec1);

/// c(theta, q) = (1/(q(1-theta)) + 1/(theta q))^(1/q).
double interpolation_constant(double theta, double q);

/// Real interpolation norm (integral of K^q against dt / t^(1 + theta q))^(1/q).
/// Throws QuadratureFailure when the refinement limit is reached.
double interpolated_norm(const RealVector& f, const NormSpec& spec);
Scalar interpolated_norm(const RationalVector& f, const NormSpec& spec);

}  // namespace condlab
