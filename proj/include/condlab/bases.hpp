#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "condlab/matrix.hpp"
#include "condlab/norm_spec.hpp"
#include "condlab/scalar.hpp"
#include "condlab/spaces.hpp"

namespace condlab {

/// A square, invertible family x_1..x_n in a normed coordinate space.
/// Indices are 0-based in the API; x_k is column k of vectors().
class Basis {
 public:
  const NormSpec& space() const { return space_; }
  std::size_t dim() const { return vectors_.cols(); }

  /// Columns are the basis vectors.
  const RationalMatrix& vectors() const { return vectors_; }
  /// Rows are the biorthogonal functionals.
  const RationalMatrix& biorthogonals() const { return dual_; }

  RationalVector vector(std::size_t k) const { return vectors_.column(k); }
  RationalVector functional(std::size_t k) const { return dual_.row(k); }

  /// Coefficients (x_k^*(f))_k.
  RationalVector coefficients(const RationalVector& f) const { return dual_.apply(f); }
  /// sum_k c_k x_k.
  RationalVector synthesize(const RationalVector& c) const { return vectors_.apply(c); }

  friend Basis make_basis(const NormSpec& space, const RationalMatrix& vectors);

 private:
  Basis(NormSpec space, RationalMatrix vectors, RationalMatrix dual)
      : space_(std::move(space)), vectors_(std::move(vectors)), dual_(std::move(dual)) {}

  NormSpec space_;
  RationalMatrix vectors_;
  RationalMatrix dual_;
};

/// Validates shape and invertibility. Throws NotABasis when singular.
Basis make_basis(const NormSpec& space, const RationalMatrix& vectors);

Basis canonical_basis(const NormSpec& space);
/// s_n = e_1 + ... + e_n.
Basis summing_basis(const NormSpec& space);

/// Matrix of S_A = sum_{a in A} x_a x_a^*.
RationalMatrix projection_matrix(const Basis& b, const std::vector<std::size_t>& subset);
/// Matrix of S_m, the projection onto the first m vectors.
RationalMatrix partial_sum_matrix(const Basis& b, std::size_t m);

RationalVector coordinate_projection(const Basis& b, const std::vector<std::size_t>& subset,
                                     const RationalVector& f);

/// sup_m ||S_m||, with a witness from the maximizing projection.
OperatorNormResult basis_constant(const Basis& b, const OperatorNormOptions& options = {});

/// Norm of a linear functional on the basis space (exact where the dual
/// norm is available, otherwise a sampled lower bound).
OperatorNormResult functional_norm(const RationalVector& phi, const NormSpec& space,
                                   const OperatorNormOptions& options = {});

struct SeminormBounds {
  Scalar lower;          ///< min_n ||x_n||
  Scalar upper;          ///< max_n ||x_n||
  Scalar dual_upper;     ///< max_n ||x_n^*||
  Certification dual_flag = Certification::CertifiedExact;
};

SeminormBounds seminorm_bounds(const Basis& b, const OperatorNormOptions& options = {});

/// max_m ||x_1 + ... + x_m||.
Scalar type_p_constant(const Basis& b);

/// Norm of the summing functional sum_n x_n^*.
OperatorNormResult type_p_star_constant(const Basis& b, const OperatorNormOptions& options = {});

struct BasisReport {
  OperatorNormResult basis_constant;
  SeminormBounds seminorm;
  Scalar type_p;
  OperatorNormResult type_p_star;
};

BasisReport basis_report(const Basis& b, const OperatorNormOptions& options = {});

/// (x_1 + ... + x_n)_n.
Basis transform_partial_sums(const Basis& b);
/// (x_n - x_{n-1})_n with x_0 = 0.
Basis transform_differences(const Basis& b);

/// Pairs x_{2n-1}, x_{2n} into their sum and difference. Needs even dim.
Basis twist(const Basis& b);

/// z_{2n-1} = (x_n, y_n), z_{2n} = (x_n, -y_n) in the max direct sum.
Basis diamond(const Basis& x, const Basis& y);

/// Position of a 1-based index inside the dyadic block structure
/// [2^j - 1, 2^(j+1) - 2]: n = 2^j + 2k - 3 (odd) or 2^j + 2k - 2 (even).
struct BlockIndex {
  unsigned j;
  std::size_t k;
  bool odd;
};
BlockIndex block_index(std::size_t n);

/// Number of complete blocks J for dim = 2^(J+1) - 2; throws otherwise.
unsigned block_count(std::size_t dim);

struct BlockConstruction {
  Basis intermediate;  ///< y_n: first half of each block kept, second half summed
  Basis conditional;   ///< z_n: block halves paired by sum and difference
  unsigned blocks;
};

BlockConstruction block_construction(const Basis& b);

/// Basis file: {format_version, dim, space, vectors}, vectors written as
/// one row per line of "p/q" strings.
std::string basis_to_text(const Basis& b);
/// Parses a basis file. Errors name the offending cell with its line and
/// column in the text.
Basis basis_from_text(const std::string& text);

Basis read_basis_file(const std::string& path);
void write_basis_file(const std::string& path, const Basis& b);

}  // namespace condlab
