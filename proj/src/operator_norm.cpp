#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <random>

#include "condlab/errors.hpp"
#include "condlab/parallel.hpp"
#include "condlab/spaces.hpp"

namespace condlab {

namespace {

/// Nonzero pattern of a rational matrix, by column and by row.
struct Sparse {
  struct Entry {
    std::size_t index;
    Rational value;
  };
  std::size_t rows = 0, cols = 0, nnz = 0;
  std::vector<std::vector<Entry>> by_col, by_row;

  explicit Sparse(const RationalMatrix& m)
      : rows(m.rows()), cols(m.cols()), by_col(m.cols()), by_row(m.rows()) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (sgn(m(i, j)) != 0) {
          by_col[j].push_back({i, m(i, j)});
          by_row[i].push_back({j, m(i, j)});
          ++nnz;
        }
  }

  RationalVector apply(const RationalVector& v) const {
    RationalVector out(rows, Rational(0));
    for (std::size_t j = 0; j < cols; ++j) {
      if (sgn(v[j]) == 0) continue;
      for (const auto& e : by_col[j]) out[e.index] += e.value * v[j];
    }
    return out;
  }
  RationalVector apply_transpose(const RationalVector& w) const {
    RationalVector out(cols, Rational(0));
    for (std::size_t i = 0; i < rows; ++i) {
      if (sgn(w[i]) == 0) continue;
      for (const auto& e : by_row[i]) out[e.index] += e.value * w[i];
    }
    return out;
  }
};

struct Candidate {
  Scalar value;
  std::size_t index = SIZE_MAX;
};

/// Keeps the larger value; ties go to the smaller index.
void offer(Candidate& best, const Scalar& value, std::size_t index) {
  if (best.index == SIZE_MAX || value > best.value ||
      (!(value < best.value) && index < best.index)) {
    best.value = value;
    best.index = index;
  }
}

Candidate reduce(const std::vector<Candidate>& parts) {
  Candidate best;
  for (const auto& c : parts)
    if (c.index != SIZE_MAX) offer(best, c.value, c.index);
  return best;
}

bool is_l2(const NormSpec& s) { return s.kind() == NormSpec::Kind::Lp && s.p() == 2; }

bool dual_available(const NormSpec& s) {
  switch (s.kind()) {
    case NormSpec::Kind::Interpolated: return false;
    case NormSpec::Kind::DirectSumMax: return dual_available(s.left()) && dual_available(s.right());
    default: return true;
  }
}

double primal_cost(const Sparse& m, const NormSpec& dom, const NormSpec& cod) {
  if (!dom.polyhedral()) return INFINITY;
  const double per = dom.kind() == NormSpec::Kind::Sup
                         ? static_cast<double>(m.rows + m.rows)
                         : static_cast<double>(m.nnz + m.rows);
  (void)cod;
  return vertex_count_up_to_sign(dom) * per;
}

/// The functionals M^T w for w ranging over the dual generators of the
/// codomain, restricted to what M can see: a sup leaf contributes its
/// nonzero rows of M, an l1 leaf the sign combinations of those rows, and a
/// v1 leaf the sign combinations of the nonzero rows of D M, where D is the
/// difference map with ||a||_v1 = ||D a||_1. One functional per sign pair.
class DualPlan {
 public:
  /// With materialize = false only count() and cost() are usable.
  DualPlan(const Sparse& m, const NormSpec& cod, bool materialize = true)
      : cols_(m.cols), materialize_(materialize) {
    ok_ = add(m, cod, 0);
  }

  bool ok() const { return ok_; }
  double count() const {
    double c = 0;
    for (const auto& b : blocks_) c += b.count;
    return c;
  }
  /// Elementary work: every functional is assembled from its rows and then
  /// measured in the domain dual norm.
  double cost() const {
    double c = 0;
    for (const auto& b : blocks_)
      c += b.count * static_cast<double>(cols_ * (b.width + 1));
    return c;
  }

  RationalVector functional(std::uint64_t k) const {
    for (const auto& b : blocks_) {
      if (static_cast<double>(k) >= b.count) {
        k -= static_cast<std::uint64_t>(b.count);
        continue;
      }
      if (!b.signs) return b.rows[k];
      RationalVector u = b.rows[0];
      for (std::size_t r = 1; r < b.rows.size(); ++r) {
        const bool minus = k >> (r - 1) & 1;
        for (std::size_t j = 0; j < cols_; ++j)
          if (sgn(b.rows[r][j]) != 0) u[j] += minus ? Rational(-b.rows[r][j]) : b.rows[r][j];
      }
      return u;
    }
    throw InvalidArgument("dual generator index out of range");
  }

 private:
  struct Block {
    bool signs;
    std::vector<RationalVector> rows;
    double count;
    std::size_t width;  ///< rows combined per functional
  };

  RationalVector dense_row(const Sparse& m, std::size_t i) const {
    RationalVector r(cols_, Rational(0));
    for (const auto& e : m.by_row[i]) r[e.index] = e.value;
    return r;
  }

  void add_signs(std::vector<RationalVector> rows, std::size_t count) {
    if (count == 0) return;
    if (count > 62) {
      blocks_.push_back({true, {}, INFINITY, count});
      return;
    }
    blocks_.push_back({true, std::move(rows), std::ldexp(1.0, static_cast<int>(count) - 1), count});
  }

  static bool same_row(const std::vector<Sparse::Entry>& a, const std::vector<Sparse::Entry>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a[k].index != b[k].index || a[k].value != b[k].value) return false;
    return true;
  }

  bool add(const Sparse& m, const NormSpec& cod, std::size_t offset) {
    const std::size_t n = cod.dim();
    switch (cod.kind()) {
      case NormSpec::Kind::Sup:
      case NormSpec::Kind::Lp: {
        const bool sup = cod.kind() == NormSpec::Kind::Sup;
        if (!sup && cod.p() != 1) return false;
        std::vector<RationalVector> rows;
        std::size_t count = 0;
        for (std::size_t i = offset; i < offset + n; ++i)
          if (!m.by_row[i].empty()) {
            ++count;
            if (materialize_) rows.push_back(dense_row(m, i));
          }
        if (!sup) add_signs(std::move(rows), count);
        else if (count > 0) blocks_.push_back({false, std::move(rows), static_cast<double>(count), 1});
        return true;
      }
      case NormSpec::Kind::V1: {
        // Row i of D M is M_i - M_{i-1}, with zero rows outside the block.
        static const std::vector<Sparse::Entry> kEmpty;
        std::vector<RationalVector> rows;
        std::size_t count = 0;
        for (std::size_t i = 0; i <= n; ++i) {
          const auto& cur = i < n ? m.by_row[offset + i] : kEmpty;
          const auto& prev = i > 0 ? m.by_row[offset + i - 1] : kEmpty;
          if (same_row(cur, prev)) continue;
          ++count;
          if (!materialize_) continue;
          RationalVector d(cols_, Rational(0));
          for (const auto& e : cur) d[e.index] += e.value;
          for (const auto& e : prev) d[e.index] -= e.value;
          rows.push_back(std::move(d));
        }
        add_signs(std::move(rows), count);
        return true;
      }
      case NormSpec::Kind::DirectSumMax:
        return add(m, cod.left(), offset) && add(m, cod.right(), offset + cod.left().dim());
      case NormSpec::Kind::Interpolated: return false;
    }
    return false;
  }

  std::size_t cols_;
  bool materialize_;
  bool ok_ = false;
  std::vector<Block> blocks_;
};

double dual_cost(const Sparse& m, const NormSpec& dom, const NormSpec& cod) {
  if (!cod.polyhedral() || !dual_available(dom)) return INFINITY;
  const DualPlan plan(m, cod, false);
  return plan.ok() ? plan.cost() : INFINITY;
}

/// Parallel arg-max of eval(k) over k < count. The merge rule is order
/// independent, so the result does not depend on the worker count.
template <class Eval>
Candidate parallel_argmax(std::size_t count, unsigned workers, Eval&& eval) {
  Candidate best;
  std::mutex lock;
  parallel_for(count, workers, [&](std::size_t b, std::size_t e) {
    Candidate local;
    for (std::size_t k = b; k < e; ++k) offer(local, eval(k), k);
    std::lock_guard<std::mutex> guard(lock);
    if (local.index != SIZE_MAX) offer(best, local.value, local.index);
  });
  return best;
}

/// Max over domain vertices; Gray-code updates when the domain is a cube.
OperatorNormResult primal_route(const Sparse& sm, const NormSpec& dom, const NormSpec& cod,
                                const OperatorNormOptions& opt) {
  if (dom.kind() == NormSpec::Kind::Sup) {
    std::vector<Candidate> parts(std::max(1u, opt.workers));
    const std::size_t n = dom.dim();
    const std::uint64_t total = std::uint64_t{1} << (n - 1);
    const std::size_t chunks = std::min<std::uint64_t>(parts.size(), total);
    parts.resize(chunks);
    parallel_for(chunks, static_cast<unsigned>(chunks), [&](std::size_t c0, std::size_t c1) {
      for (std::size_t c = c0; c < c1; ++c) {
        const std::uint64_t begin = total * c / chunks, end = total * (c + 1) / chunks;
        std::uint64_t code = begin ^ (begin >> 1);
        RationalVector v(n, Rational(1));
        for (std::size_t i = 1; i < n; ++i)
          if (code >> (i - 1) & 1) v[i] = -1;
        RationalVector image = sm.apply(v);
        for (std::uint64_t g = begin; g < end; ++g) {
          if (g != begin) {
            const std::size_t bit = static_cast<std::size_t>(std::countr_zero(g)) + 1;
            for (const auto& e : sm.by_col[bit]) {
              if (sgn(v[bit]) > 0) image[e.index] -= 2 * e.value;
              else image[e.index] += 2 * e.value;
            }
            v[bit] = -v[bit];
          }
          offer(parts[c], norm(image, cod), g);
        }
      }
    });
    const Candidate best = reduce(parts);
    const std::uint64_t code = best.index ^ (best.index >> 1);
    RationalVector v(n, Rational(1));
    for (std::size_t i = 1; i < n; ++i)
      if (code >> (i - 1) & 1) v[i] = -1;
    return {best.value, Certification::CertifiedExact, v};
  }
  if (dom.kind() == NormSpec::Kind::Lp && dom.p() == 1) {
    // The vertices are the unit vectors, so the images are the columns.
    const Candidate best = parallel_argmax(sm.cols, opt.workers, [&](std::size_t j) {
      RationalVector col(sm.rows, Rational(0));
      for (const auto& e : sm.by_col[j]) col[e.index] = e.value;
      return norm(col, cod);
    });
    RationalVector e(sm.cols, Rational(0));
    e[best.index] = 1;
    return {best.value, Certification::CertifiedExact, e};
  }
  const auto vertices = unit_ball_vertices_up_to_sign(dom, opt.budget);
  const Candidate best = parallel_argmax(vertices.size(), opt.workers,
                                         [&](std::size_t k) { return norm(sm.apply(vertices[k]), cod); });
  return {best.value, Certification::CertifiedExact, vertices[best.index]};
}

/// Max over codomain dual generators w of dual_norm(M^T w).
OperatorNormResult dual_route(const Sparse& sm, const NormSpec& dom, const NormSpec& cod,
                              const OperatorNormOptions& opt) {
  const DualPlan plan(sm, cod);
  const auto count = static_cast<std::size_t>(plan.count());
  if (count == 0) {  // M = 0
    RationalVector e(sm.cols, Rational(0));
    e[0] = 1;
    return {Scalar(0), Certification::CertifiedExact, e};
  }
  const Candidate best = parallel_argmax(count, opt.workers, [&](std::size_t k) {
    return dual_norm(plan.functional(k), dom);
  });
  const RationalVector witness = dual_norm_maximizer(plan.functional(best.index), dom);
  return {best.value, Certification::CertifiedExact, witness};
}

bool symmetric_idempotent(const RationalMatrix& m) {
  if (m.rows() != m.cols()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m(i, j) != m(j, i)) return false;
  // M^2 == M, multiplying only nonzero entries.
  const std::size_t n = m.rows();
  std::vector<std::vector<std::size_t>> support(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (sgn(m(i, j)) != 0) support[i].push_back(j);
  RationalVector row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : row) x = 0;
    for (std::size_t k : support[i])
      for (std::size_t j : support[k]) row[j] += m(i, k) * m(k, j);
    for (std::size_t j = 0; j < n; ++j)
      if (row[j] != m(i, j)) return false;
  }
  return true;
}

/// Spectral norm. Projections are recognised directly; otherwise the top
/// eigenvalue of M^T M is guessed in floating point, snapped to a rational
/// and certified by a semidefiniteness test plus an exact kernel vector.
OperatorNormResult l2_route(const RationalMatrix& m) {
  const std::size_t n = m.cols();
  if (symmetric_idempotent(m)) {
    for (std::size_t j = 0; j < n; ++j) {
      RationalVector col = m.column(j);
      for (const auto& x : col)
        if (sgn(x) != 0) return {Scalar(1), Certification::CertifiedExact, col};
    }
    RationalVector e(n, Rational(0));
    e[0] = 1;
    return {Scalar(0), Certification::CertifiedExact, e};
  }
  const RationalMatrix gram = m.transpose() * m;
  Eigen::MatrixXd g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = gram(i, j).get_d();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
  const double top = eig.eigenvalues()(n - 1);
  for (long den : {1L, 2L, 3L, 4L, 6L, 8L, 12L, 16L, 1000L, 1L << 20}) {
    const Rational lambda = rationalize(top, den);
    RationalMatrix shifted = gram;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lambda;
    auto kernel = kernel_vector(shifted);
    if (!kernel) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) shifted(i, j) = -shifted(i, j);
    if (!is_positive_semidefinite(shifted)) continue;
    Rational root;
    Scalar value = exact_sqrt(lambda, root) ? Scalar(root) : Scalar(std::sqrt(lambda.get_d()));
    return {value, Certification::CertifiedExact, *kernel};
  }
  // Fall back to the floating eigenvector as a lower-bound witness.
  RationalVector v(n);
  const auto vec = eig.eigenvectors().col(static_cast<Eigen::Index>(n - 1));
  for (std::size_t i = 0; i < n; ++i) v[i] = rationalize(vec(static_cast<Eigen::Index>(i)), 1L << 30);
  const NormSpec l2 = NormSpec::lp(2, n);
  const Scalar value = norm(m.apply(v), NormSpec::lp(2, m.rows())) / norm(v, l2);
  return {value, Certification::HeuristicLowerBound, v};
}

RealVector random_start(const NormSpec& dom, std::mt19937_64& rng) {
  const std::size_t n = dom.dim();
  RealVector v(n);
  std::uniform_int_distribution<int> coin(0, 1);
  switch (dom.kind()) {
    case NormSpec::Kind::Sup:
      for (auto& x : v) x = coin(rng) ? 1.0 : -1.0;
      return v;
    case NormSpec::Kind::V1: {
      std::uniform_int_distribution<std::size_t> pick(0, n);
      std::size_t a = pick(rng), b = pick(rng);
      if (a == b) b = (a + 1) % (n + 1);
      if (a > b) std::swap(a, b);
      for (std::size_t k = a; k < b; ++k) v[k] = coin(rng) ? 0.5 : -0.5;
      return v;
    }
    case NormSpec::Kind::DirectSumMax: {
      RealVector a = random_start(dom.left(), rng), b = random_start(dom.right(), rng);
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
    default: {
      std::uniform_int_distribution<int> grid(-1024, 1024);
      for (auto& x : v) x = grid(rng) / 1024.0;
      bool zero = true;
      for (double x : v) zero = zero && x == 0;
      if (zero) v[0] = 1;
      return v;
    }
  }
}

/// Random starts followed by coordinate ascent on dyadic values.
OperatorNormResult heuristic_route(const RationalMatrix& m, const NormSpec& dom,
                                   const NormSpec& cod, const OperatorNormOptions& opt) {
  const RealMatrix mr = to_real(m);
  auto ratio = [&](const RealVector& v) {
    const double d = norm(v, dom);
    return d > 0 ? norm(mr.apply(v), cod) / d : 0.0;
  };
  const std::size_t samples = std::max<std::size_t>(1, opt.samples);
  std::vector<RealVector> found(samples);
  std::vector<double> score(samples);
  parallel_for(samples, opt.workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) {
      std::mt19937_64 rng(substream_seed(opt.seed, s));
      RealVector v = random_start(dom, rng);
      double best = ratio(v);
      for (double step = 0.5; step >= 1.0 / 4096;) {
        bool improved = false;
        for (std::size_t i = 0; i < v.size(); ++i) {
          for (double trial : {-v[i], v[i] + step, v[i] - step}) {
            if (std::abs(trial) > 1) continue;
            const double old = v[i];
            v[i] = trial;
            const double r = ratio(v);
            if (r > best * (1 + 1e-12)) {
              best = r;
              improved = true;
            } else {
              v[i] = old;
            }
          }
        }
        if (!improved) step /= 2;
      }
      found[s] = v;
      score[s] = best;
    }
  });
  std::size_t arg = 0;
  for (std::size_t s = 1; s < samples; ++s)
    if (score[s] > score[arg]) arg = s;
  RationalVector w(found[arg].size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = Rational(found[arg][i]);
  const Scalar denom = norm(w, dom);
  const Scalar value = denom.to_double() > 0 ? norm(m.apply(w), cod) / denom : Scalar(0);
  return {value, Certification::HeuristicLowerBound, w};
}

}  // namespace

double exact_operator_norm_cost(const RationalMatrix& m, const NormSpec& dom, const NormSpec& cod) {
  const Sparse sm(m);
  double cost = std::min(primal_cost(sm, dom, cod), dual_cost(sm, dom, cod));
  if (is_l2(dom) && is_l2(cod)) {
    const double n = static_cast<double>(std::max(m.rows(), m.cols()));
    cost = std::min(cost, symmetric_idempotent(m) ? n * n : n * n * n);
  }
  return cost;
}

OperatorNormResult operator_norm(const RationalMatrix& m, const NormSpec& dom, const NormSpec& cod,
                                 const OperatorNormOptions& options) {
  if (m.cols() != dom.dim() || m.rows() != cod.dim())
    throw DimensionMismatch("operator shape does not match domain and codomain");
  if (options.mode != Mode::Exact) return heuristic_route(m, dom, cod, options);

  const Sparse sm(m);
  const double primal = primal_cost(sm, dom, cod);
  const double dual = dual_cost(sm, dom, cod);
  if (std::isinf(primal) && std::isinf(dual)) {
    if (is_l2(dom) && is_l2(cod)) return l2_route(m);
    throw NotSupported("exact operator norm from " + dom.describe() + " to " + cod.describe());
  }
  const double cost = std::min(primal, dual);
  if (cost > static_cast<double>(options.budget))
    throw BudgetExceeded("exact operator norm needs about " + std::to_string(cost) +
                         " updates, above the budget");
  return dual <= primal ? dual_route(sm, dom, cod, options) : primal_route(sm, dom, cod, options);
}

}  // namespace condlab
