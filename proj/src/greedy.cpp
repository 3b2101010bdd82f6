#include "condlab/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "condlab/errors.hpp"
#include "condlab/parallel.hpp"
#include "projection_lp.hpp"

namespace condlab {

namespace {

template <class T>
std::vector<std::size_t> ordering(const std::vector<T>& c) {
  std::vector<std::size_t> rho(c.size());
  std::iota(rho.begin(), rho.end(), std::size_t{0});
  std::stable_sort(rho.begin(), rho.end(), [&](std::size_t a, std::size_t b) {
    return abs(c[a]) > abs(c[b]);
  });
  return rho;
}

}  // namespace

std::vector<std::size_t> greedy_ordering(const RationalVector& coeffs) { return ordering(coeffs); }

std::vector<std::size_t> greedy_ordering(const RealVector& coeffs) {
  std::vector<std::size_t> rho(coeffs.size());
  std::iota(rho.begin(), rho.end(), std::size_t{0});
  std::stable_sort(rho.begin(), rho.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(coeffs[a]) > std::abs(coeffs[b]);
  });
  return rho;
}

std::vector<std::size_t> greedy_set(const Basis& b, const RationalVector& f, std::size_t m) {
  if (m > b.dim()) throw InvalidArgument("greedy step m exceeds the dimension");
  const auto rho = greedy_ordering(b.coefficients(f));
  std::vector<std::size_t> a(rho.begin(), rho.begin() + static_cast<std::ptrdiff_t>(m));
  std::sort(a.begin(), a.end());
  return a;
}

RationalVector greedy_sum(const Basis& b, const RationalVector& f, std::size_t m) {
  if (f.size() != b.dim()) throw DimensionMismatch("vector length differs from basis dimension");
  return coordinate_projection(b, greedy_set(b, f, m), f);
}

namespace {

/// Best exact greedy ratio of f over all m; returns the certificate.
WitnessCertificate best_greedy_certificate(const Basis& b, const RationalVector& f) {
  WitnessCertificate best;
  bool have = false;
  const auto rho = greedy_ordering(b.coefficients(f));
  for (std::size_t m = 1; m <= b.dim(); ++m) {
    std::vector<std::size_t> a(rho.begin(), rho.begin() + static_cast<std::ptrdiff_t>(m));
    auto c = make_certificate(b, Quantity::Gamma, m, f, a);
    if (!have || c.bound > best.bound) {
      best = std::move(c);
      have = true;
    }
  }
  return best;
}

struct RealBasis {
  RealMatrix x;
  const NormSpec& space;

  /// max_m norm(G_m f) / norm(f) for f = X c, in floating point.
  double ratio(const RealVector& c) const {
    const double d = norm(x.apply(c), space);
    if (!(d > 0)) return 0;
    const auto rho = greedy_ordering(c);
    RealVector kept(c.size(), 0.0);
    double best = 0;
    for (std::size_t m = 0; m < rho.size(); ++m) {
      kept[rho[m]] = c[rho[m]];
      best = std::max(best, norm(x.apply(kept), space) / d);
    }
    return best;
  }
};

RationalVector rationalized(const RealVector& c) {
  RationalVector r(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) r[i] = rationalize(c[i], 1L << 20);
  return r;
}

bool has_interpolation(const NormSpec& s) {
  switch (s.kind()) {
    case NormSpec::Kind::Interpolated: return true;
    case NormSpec::Kind::DirectSumMax: return has_interpolation(s.left()) || has_interpolation(s.right());
    default: return false;
  }
}

QuasiGreedyEstimate sampled(const Basis& b, const QuasiGreedyOptions& opt) {
  const std::size_t n = b.dim();
  const RealBasis rb{to_real(b.vectors()), b.space()};
  const RealMatrix inv = to_real(b.biorthogonals());

  // Structured starts: basis vectors and (when few) ambient ball vertices.
  std::vector<RealVector> starts;
  for (std::size_t k = 0; k < n; ++k) {
    RealVector e(n, 0.0);
    e[k] = 1;
    starts.push_back(e);
  }
  if (b.space().polyhedral() && vertex_count_up_to_sign(b.space()) <= 4096)
    for (const auto& v : unit_ball_vertices_up_to_sign(b.space(), 4096))
      starts.push_back(inv.apply(to_real(v)));

  const std::size_t total = starts.size() + opt.samples;
  std::vector<RealVector> found(total);
  std::vector<double> score(total);
  parallel_for(total, opt.workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t s = lo; s < hi; ++s) {
      RealVector c;
      if (s < starts.size()) {
        c = starts[s];
        score[s] = rb.ratio(c);
      } else {
        std::mt19937_64 rng(substream_seed(opt.seed, s));
        std::uniform_int_distribution<int> grid(-256, 256);
        c.resize(n);
        for (auto& v : c) v = grid(rng) / 256.0;
        score[s] = detail::ascend(c, [&](const RealVector& v) { return rb.ratio(v); }, 1.0 / 1024);
      }
      found[s] = c;
    }
  });

  // Exact re-evaluation of the best few, in index order.
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return score[x] > score[y]; });
  QuasiGreedyEstimate out;
  bool have = false;
  for (std::size_t r = 0; r < std::min<std::size_t>(8, total); ++r) {
    const RationalVector c = rationalized(found[order[r]]);
    if (std::all_of(c.begin(), c.end(), [](const Rational& v) { return sgn(v) == 0; })) continue;
    auto cert = best_greedy_certificate(b, b.synthesize(c));
    if (!have || cert.bound > out.witness.bound) {
      out.witness = std::move(cert);
      have = true;
    }
  }
  out.value = out.witness.bound;
  out.flag = Certification::HeuristicLowerBound;
  out.mode = Mode::Heuristic;
  out.samples = opt.samples;
  out.seed = opt.seed;
  return out;
}

}  // namespace

QuasiGreedyEstimate quasi_greedy_estimate(const Basis& b, const QuasiGreedyOptions& options) {
  if (options.mode == Mode::Exact) {
    if (b.dim() > options.exact_limit)
      throw InvalidArgument("exact quasi-greedy search is limited to dimension " +
                            std::to_string(options.exact_limit));
    // No k_n can be certified through a quadrature, so neither the
    // sandwich nor the region search applies.
    if (has_interpolation(b.space()))
      throw NotSupported("exact quasi-greedy search needs a polyhedral space");
  }
  QuasiGreedyEstimate est = sampled(b, options);
  if (options.mode != Mode::Exact) {
    est.mode = options.mode;
    return est;
  }
  const std::size_t n = b.dim();
  est.mode = Mode::Exact;

  // Gamma <= k_n, since every G_m is some S_A.
  ConditionalityOptions copt;
  copt.mode = Mode::Exact;
  copt.budget = options.budget;
  copt.seed = options.seed;
  copt.workers = options.workers;
  const ConstantValue kn = k_table(b, n, copt).back();
  if (kn.flag == Certification::CertifiedExact && est.value.is_exact() && kn.value.is_exact() &&
      est.value.exact() >= kn.value.exact()) {
    est.flag = Certification::CertifiedExact;
    est.certified_sup = kn.value;
    return est;
  }
  if (!b.space().polyhedral())
    throw NotSupported("exact quasi-greedy search needs a polyhedral space");

  // Every region: greedy set A (proper, nonempty), signs on A, and a
  // dual generator of the norm.
  const auto gens = dual_generators(b.space(), options.budget);
  struct Region {
    std::vector<bool> in_a;
    std::vector<int> signs;
  };
  std::vector<Region> regions;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    const int size = std::popcount(mask);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << size); ++s) {
      Region r{std::vector<bool>(n, false), std::vector<int>(n, 0)};
      int bit = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) {
          r.in_a[i] = true;
          r.signs[i] = (s >> bit++ & 1) ? -1 : 1;
        }
      regions.push_back(std::move(r));
    }
  }
  const double width = static_cast<double>(2 * n + 1);
  const double cost = static_cast<double>(regions.size()) * static_cast<double>(gens.size()) * width * width * 4;
  if (cost > static_cast<double>(options.budget))
    throw BudgetExceeded("exact quasi-greedy search exceeds the budget");

  struct Best {
    bool ok = false;
    Rational value;
    RationalVector c;
  };
  std::vector<Best> per_region(regions.size());
  parallel_for(regions.size(), options.workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k)
      for (const auto& w : gens) {
        auto r = detail::max_projected_functional(b.vectors(), b.space(), regions[k].in_a, w,
                                                  &regions[k].signs);
        if (r.ok && (!per_region[k].ok || r.value > per_region[k].value))
          per_region[k] = {true, r.value, r.c};
      }
  });
  Rational sup = 1;
  for (const auto& r : per_region)
    if (r.ok && r.value > sup) sup = r.value;
  // Closures of regions may put the optimum on a tie boundary, where the
  // actual greedy set differs; re-evaluate and keep the best certificate.
  for (const auto& r : per_region) {
    if (!r.ok || !(r.value > est.value.exact())) continue;
    auto cert = best_greedy_certificate(b, b.synthesize(r.c));
    if (cert.bound > est.witness.bound) {
      est.witness = std::move(cert);
      est.value = est.witness.bound;
    }
  }
  est.certified_sup = Scalar(sup);
  est.flag = est.value.is_exact() && est.value.exact() == sup ? Certification::CertifiedExact
                                                               : Certification::WitnessLowerBound;
  return est;
}

}  // namespace condlab
