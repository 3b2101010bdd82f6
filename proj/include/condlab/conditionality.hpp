#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "condlab/bases.hpp"
#include "condlab/scalar.hpp"

namespace condlab {

/// Which constant a certificate bounds from below.
enum class Quantity { K, L, Gamma };

std::string to_string(Quantity q);

/// A vector f and index set A (0-based) proving
/// constant >= norm(S_A f) / norm(f).
struct WitnessCertificate {
  Quantity quantity = Quantity::K;
  std::size_t m = 0;
  RationalVector f;
  std::vector<std::size_t> subset;
  Scalar norm_f;
  Scalar norm_projection;
  Scalar bound;
};

/// Evaluates both norms directly and fills in the bound.
WitnessCertificate make_certificate(const Basis& b, Quantity quantity, std::size_t m,
                                    RationalVector f, std::vector<std::size_t> subset);

/// Recomputes everything from scratch and checks the structural
/// constraints (|A| <= m for K, A and supp f inside the first m basis
/// coordinates for L, A the greedy set of size m for Gamma).
bool revalidate(const Basis& b, const WitnessCertificate& c);

struct ConditionalityOptions {
  Mode mode = Mode::Exact;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  /// Samples per operator-norm estimate outside exact mode.
  std::size_t samples = 64;
  /// Random subsets per size in heuristic mode.
  std::size_t random_subsets = 32;
};

struct ConstantValue {
  Scalar value;
  Certification flag = Certification::CertifiedExact;
  WitnessCertificate witness;
};

/// k_1..k_{m_max}; entry m-1 is k_m = max over |A| <= m of ||S_A||.
/// Exact mode falls back to structured witnesses for subset sizes whose
/// enumeration would exceed the budget.
std::vector<ConstantValue> k_table(const Basis& b, std::size_t m_max,
                                   const ConditionalityOptions& options = {});

/// L_1..L_{m_max}: projections restricted to the span of the first m
/// vectors. When `k` holds certified values, a witness reaching k_m
/// certifies L_m = k_m without enumeration.
std::vector<ConstantValue> L_table(const Basis& b, std::size_t m_max,
                                   const ConditionalityOptions& options = {},
                                   const std::vector<ConstantValue>* k = nullptr);

ConstantValue k_m(const Basis& b, std::size_t m, const ConditionalityOptions& options = {});
ConstantValue L_m(const Basis& b, std::size_t m, const ConditionalityOptions& options = {});

/// The norm of the space restricted to vectors supported on `coords`
/// (sorted), when that restriction is again a NormSpec: any coordinate set
/// for l_p and sup, an interval for v_1, componentwise for direct sums.
std::optional<NormSpec> restrict_space(const NormSpec& spec, const std::vector<std::size_t>& coords);

/// f = z_1 + ... + z_{2j} with A the odd positions, for a diamond basis.
WitnessCertificate paper_witness_diamond(const Basis& diamond_basis, std::size_t j);

/// f = sum of the z_n in block j with A its odd positions
/// {2^j + 2k - 3}; m is the last index of the block.
WitnessCertificate paper_witness_block(const Basis& block_basis, unsigned j);

enum class GrowthModel { Power, PolyLog, Log };

std::string to_string(GrowthModel m);

/// Least squares in transformed coordinates:
/// Power   log k = log a + alpha log m
/// PolyLog log k = log a + alpha log log m
/// Log     k = a log m (alpha reported as 1).
struct GrowthFit {
  GrowthModel model;
  double a = 0;
  double alpha = 0;
  double r2 = 0;
  std::size_t m_lo = 0;
  std::size_t m_hi = 0;
  std::size_t points = 0;
};

GrowthFit growth_fit(const std::vector<std::pair<std::size_t, double>>& data, GrowthModel model);

/// Fits table entries with m in [m_lo, m_hi].
GrowthFit growth_fit(const std::vector<ConstantValue>& table, GrowthModel model,
                     std::size_t m_lo = 4, std::size_t m_hi = SIZE_MAX);

/// Smallest m at which the table reaches its final value. Finite
/// truncations saturate; growth is only visible before this point.
std::size_t saturation_point(const std::vector<ConstantValue>& table);

/// One CSV line of a report.
struct ReportRow {
  std::string basis_id;
  std::size_t m;
  Quantity quantity;
  Scalar value;
  Certification flag;
  std::string witness_file;
};

/// Header plus rows: basis_id,m,quantity,value,value_exact,flag,witness_file.
std::string report_csv(const std::vector<ReportRow>& rows);

/// Witness file text (JSON, rationals as "p/q" strings).
std::string witness_to_text(const WitnessCertificate& c);

}  // namespace condlab
