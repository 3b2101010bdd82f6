#include "condlab/conditionality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include <json.hpp>

#include "condlab/errors.hpp"
#include "condlab/greedy.hpp"
#include "condlab/parallel.hpp"
#include "projection_lp.hpp"

namespace condlab {

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::K: return "k";
    case Quantity::L: return "L";
    case Quantity::Gamma: return "Gamma";
  }
  return "unknown";
}

std::string to_string(GrowthModel m) {
  switch (m) {
    case GrowthModel::Power: return "power";
    case GrowthModel::PolyLog: return "polylog";
    case GrowthModel::Log: return "log";
  }
  return "unknown";
}

WitnessCertificate make_certificate(const Basis& b, Quantity quantity, std::size_t m,
                                    RationalVector f, std::vector<std::size_t> subset) {
  std::sort(subset.begin(), subset.end());
  WitnessCertificate c;
  c.quantity = quantity;
  c.m = m;
  c.norm_f = norm(f, b.space());
  c.norm_projection = norm(coordinate_projection(b, subset, f), b.space());
  c.bound = c.norm_f > Scalar(0) ? c.norm_projection / c.norm_f : Scalar(0);
  c.f = std::move(f);
  c.subset = std::move(subset);
  return c;
}

bool revalidate(const Basis& b, const WitnessCertificate& c) {
  if (c.f.size() != b.dim()) return false;
  for (std::size_t a : c.subset)
    if (a >= b.dim()) return false;
  switch (c.quantity) {
    case Quantity::K:
      if (c.subset.size() > c.m) return false;
      break;
    case Quantity::L: {
      if (!c.subset.empty() && c.subset.back() >= c.m) return false;
      const RationalVector coef = b.coefficients(c.f);
      for (std::size_t k = c.m; k < coef.size(); ++k)
        if (sgn(coef[k]) != 0) return false;
      break;
    }
    case Quantity::Gamma:
      if (c.subset != greedy_set(b, c.f, c.m)) return false;
      break;
  }
  const WitnessCertificate fresh = make_certificate(b, c.quantity, c.m, c.f, c.subset);
  auto same = [](const Scalar& x, const Scalar& y) {
    if (x.is_exact() && y.is_exact()) return x.exact() == y.exact();
    return std::abs(x.to_double() - y.to_double()) <= 1e-9 * std::max(1.0, std::abs(x.to_double()));
  };
  return same(fresh.norm_f, c.norm_f) && same(fresh.norm_projection, c.norm_projection) &&
         same(fresh.bound, c.bound);
}

std::optional<NormSpec> restrict_space(const NormSpec& spec, const std::vector<std::size_t>& coords) {
  if (coords.empty()) return std::nullopt;
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] >= spec.dim() || (i > 0 && coords[i] <= coords[i - 1]))
      throw InvalidArgument("restriction coordinates must be sorted and in range");
  const std::size_t r = coords.size();
  switch (spec.kind()) {
    case NormSpec::Kind::Lp: return NormSpec::lp(spec.p(), r);
    case NormSpec::Kind::Sup: return NormSpec::sup(r);
    case NormSpec::Kind::V1:
      if (coords.back() - coords.front() + 1 != r) return std::nullopt;
      return NormSpec::v1(r);
    case NormSpec::Kind::DirectSumMax: {
      const std::size_t split = spec.left().dim();
      std::vector<std::size_t> left, right;
      for (std::size_t c : coords) (c < split ? left : right).push_back(c < split ? c : c - split);
      if (left.empty()) return restrict_space(spec.right(), right);
      if (right.empty()) return restrict_space(spec.left(), left);
      auto l = restrict_space(spec.left(), left);
      auto rr = restrict_space(spec.right(), right);
      if (!l || !rr) return std::nullopt;
      return NormSpec::direct_sum_max(*l, *rr);
    }
    case NormSpec::Kind::Interpolated: return std::nullopt;
  }
  return std::nullopt;
}

namespace {

using Subset = std::vector<std::size_t>;

constexpr double kPerEvaluationBudget = 1e6;

double binomial(std::size_t n, std::size_t k) {
  double r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

/// All s-subsets of {0..u-1} in lexicographic order.
std::vector<Subset> subsets_of_size(std::size_t u, std::size_t s) {
  std::vector<Subset> out;
  if (s > u) return out;
  Subset idx(s);
  for (std::size_t i = 0; i < s; ++i) idx[i] = i;
  for (;;) {
    out.push_back(idx);
    std::size_t i = s;
    while (i > 0 && idx[i - 1] == u - s + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t k = i; k < s; ++k) idx[k] = idx[k - 1] + 1;
  }
  return out;
}

struct Eval {
  bool valid = false;
  Scalar value;
  RationalVector f;  // ambient coordinates
  bool exact = false;
};

/// Keeps the larger value; ties keep the earlier candidate.
bool improves(const Eval& e, const Eval& best) {
  return e.valid && (!best.valid || e.value > best.value);
}

/// Computes ||S_A|| restricted to the span of the first m basis vectors.
/// With m = dim this is the plain projection norm used for k_m.
class ProjectionProblem {
 public:
  ProjectionProblem(const Basis& b, std::size_t m) : ambient_(b), m_(m) {
    std::set<std::size_t> support;
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < b.dim(); ++i)
        if (sgn(b.vectors()(i, k)) != 0) support.insert(i);
    coords_.assign(support.begin(), support.end());
    if (m == b.dim()) {
      square_.emplace(b);
      coords_.resize(b.dim());
      for (std::size_t i = 0; i < b.dim(); ++i) coords_[i] = i;
      space_ = b.space();
      return;
    }
    auto restricted = restrict_space(b.space(), coords_);
    if (!restricted) {
      coords_.resize(b.dim());
      for (std::size_t i = 0; i < b.dim(); ++i) coords_[i] = i;
      space_ = b.space();
    } else {
      space_ = *restricted;
    }
    x_ = RationalMatrix(coords_.size(), m);
    for (std::size_t r = 0; r < coords_.size(); ++r)
      for (std::size_t k = 0; k < m; ++k) x_(r, k) = b.vectors()(coords_[r], k);
    if (coords_.size() == m) {
      square_.emplace(make_basis(space_, x_));
    } else if (space_.polyhedral() && dual_generator_count_up_to_sign(space_) <= 1 << 20) {
      gens_ = dual_generators(space_, 1 << 20);
    }
  }

  std::size_t size() const { return m_; }

  /// Work estimate for an exact evaluation of every nonempty subset of
  /// size at most `s_max`, or infinity when exact evaluation is unavailable.
  double exact_cost(std::size_t s_max) const {
    if (square_) {
      double total = 0;
      for (std::size_t s = 1; s <= s_max; ++s) {
        Subset first(s);
        for (std::size_t k = 0; k < s; ++k) first[k] = k;
        total += binomial(m_, s) *
                 exact_operator_norm_cost(projection_matrix(*square_, first), space_, space_);
      }
      return total;
    }
    if (gens_.empty()) return INFINITY;
    double sets = 0;
    for (std::size_t s = 1; s <= s_max; ++s) sets += binomial(m_, s);
    const double width = static_cast<double>(coords_.size() + m_);
    return sets * static_cast<double>(gens_.size()) * 4 * width * width;
  }

  Eval evaluate(const Subset& a, Mode mode, const ConditionalityOptions& opt,
                std::uint64_t stream) const {
    if (square_) return evaluate_square(a, mode, opt, stream);
    if (!gens_.empty()) return evaluate_lp(a, mode);
    return evaluate_ascent(a, opt, stream);
  }

 private:
  RationalVector embed(const RationalVector& local) const {
    RationalVector f(ambient_.dim(), Rational(0));
    for (std::size_t r = 0; r < coords_.size(); ++r) f[coords_[r]] = local[r];
    return f;
  }

  Eval evaluate_square(const Subset& a, Mode mode, const ConditionalityOptions& opt,
                       std::uint64_t stream) const {
    const RationalMatrix p = projection_matrix(*square_, a);
    OperatorNormOptions o;
    o.budget = opt.budget;
    o.seed = substream_seed(opt.seed, stream);
    o.samples = opt.samples;
    o.mode = Mode::Exact;
    if (mode != Mode::Exact) {
      // Searches carry their own per-evaluation allowance.
      o.budget = static_cast<std::uint64_t>(kPerEvaluationBudget);
      if (!(exact_operator_norm_cost(p, space_, space_) <= kPerEvaluationBudget)) {
        o.mode = Mode::Heuristic;
        o.samples = std::max<std::size_t>(1, opt.samples / 8);
      }
    }
    const auto r = operator_norm(p, space_, space_, o);
    return {true, r.value, embed(r.witness), r.flag == Certification::CertifiedExact};
  }

  Eval evaluate_lp(const Subset& a, Mode mode) const {
    std::vector<bool> in_a(m_, false);
    for (std::size_t k : a) in_a[k] = true;
    if (mode == Mode::Exact) {
      detail::ProjectionLp<Rational> best;
      for (const auto& w : gens_) {
        auto r = detail::max_projected_functional(x_, space_, in_a, w);
        if (!r.ok) throw NumericFailure("projection program failed");
        if (!best.ok || r.value > best.value) best = std::move(r);
      }
      return {true, Scalar(best.value), embed(x_.apply(best.c)), true};
    }
    const RealMatrix xr = to_real(x_);
    detail::ProjectionLp<double> best;
    for (const auto& w : gens_) {
      auto r = detail::max_projected_functional(xr, space_, in_a, to_real(w));
      if (r.ok && (!best.ok || r.value > best.value)) best = std::move(r);
    }
    if (!best.ok) return {};
    RationalVector c(m_);
    for (std::size_t k = 0; k < m_; ++k) c[k] = rationalize(best.c[k], 1L << 20);
    return certified(a, c);
  }

  Eval evaluate_ascent(const Subset& a, const ConditionalityOptions& opt,
                       std::uint64_t stream) const {
    const RealMatrix xr = to_real(x_);
    const NormSpec& s = space_;
    auto ratio = [&](const RealVector& c) {
      RealVector kept(m_, 0.0);
      for (std::size_t k : a) kept[k] = c[k];
      const double d = norm(xr.apply(c), s);
      return d > 0 ? norm(xr.apply(kept), s) / d : 0.0;
    };
    RealVector best_c;
    double best = -1;
    for (std::size_t sample = 0; sample < std::max<std::size_t>(1, opt.samples / 8); ++sample) {
      std::mt19937_64 rng(substream_seed(substream_seed(opt.seed, stream), sample));
      std::uniform_int_distribution<int> grid(-64, 64);
      RealVector c(m_);
      for (auto& v : c) v = grid(rng) / 64.0;
      if (sample == 0)
        for (std::size_t k = 0; k < m_; ++k) c[k] = std::find(a.begin(), a.end(), k) != a.end();
      const double r = detail::ascend(c, ratio, 1.0 / 1024);
      if (r > best) {
        best = r;
        best_c = c;
      }
    }
    RationalVector c(m_);
    for (std::size_t k = 0; k < m_; ++k) c[k] = rationalize(best_c[k], 1L << 20);
    return certified(a, c);
  }

  /// Exact re-evaluation of a coefficient vector.
  Eval certified(const Subset& a, const RationalVector& c) const {
    const RationalVector f = embed(x_.apply(c));
    const Scalar d = norm(f, ambient_.space());
    if (!(d > Scalar(0))) return {};
    const Scalar num = norm(coordinate_projection(ambient_, a, f), ambient_.space());
    return {true, num / d, f, false};
  }

  const Basis& ambient_;
  std::size_t m_;
  std::vector<std::size_t> coords_;
  NormSpec space_ = NormSpec::sup(1);
  RationalMatrix x_;
  std::optional<Basis> square_;
  std::vector<RationalVector> gens_;
};

/// Evaluates a list of subsets in parallel; the reduction runs in list
/// order so the winner does not depend on the worker count.
std::pair<Eval, std::size_t> best_of(const ProjectionProblem& p, const std::vector<Subset>& sets,
                                     Mode mode, const ConditionalityOptions& opt,
                                     std::uint64_t stream_base) {
  std::vector<Eval> results(sets.size());
  parallel_for(sets.size(), opt.workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) results[k] = p.evaluate(sets[k], mode, opt, stream_base + k);
  });
  Eval best;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < results.size(); ++k)
    if (improves(results[k], best)) {
      best = std::move(results[k]);
      arg = k;
    }
  return {best, arg};
}

/// Structured candidate sets of size s inside {0..u-1}: intervals,
/// step-2 progressions (odd or even positions of a window), and the
/// one-element extensions of the previous agglomerated set.
class FamilySearch {
 public:
  FamilySearch(const ProjectionProblem& p, const ConditionalityOptions& opt, Mode eval_mode,
               std::uint64_t stream)
      : p_(p), opt_(opt), mode_(eval_mode), stream_(stream) {}

  /// Continues agglomeration from a set found by other means.
  void seed(const Subset& a) { grown_ = a; }

  std::pair<Eval, Subset> search(std::size_t s) {
    const std::size_t u = p_.size();
    std::vector<Subset> sets;
    std::set<Subset> seen;
    auto add = [&](Subset a) {
      std::sort(a.begin(), a.end());
      if (seen.insert(a).second) sets.push_back(std::move(a));
    };
    // agglomeration candidates first, so the growth set can be read off
    std::vector<std::size_t> grown_index;
    for (std::size_t b = 0; b < u; ++b) {
      if (std::find(grown_.begin(), grown_.end(), b) != grown_.end()) continue;
      Subset a = grown_;
      a.push_back(b);
      std::sort(a.begin(), a.end());
      if (seen.insert(a).second) {
        grown_index.push_back(sets.size());
        sets.push_back(std::move(a));
      }
    }
    for (std::size_t i = 0; i + s <= u; ++i) {
      Subset a(s);
      for (std::size_t k = 0; k < s; ++k) a[k] = i + k;
      add(std::move(a));
    }
    if (s >= 2)
      for (std::size_t i = 0; i + 2 * (s - 1) < u; ++i) {
        Subset a(s);
        for (std::size_t k = 0; k < s; ++k) a[k] = i + 2 * k;
        add(std::move(a));
      }
    if (mode_ == Mode::Heuristic) {
      for (std::size_t r = 0; r < opt_.random_subsets; ++r) {
        std::mt19937_64 rng(substream_seed(opt_.seed, stream_ * 7919 + s * 1031 + r));
        Subset a;
        for (std::size_t j = u - s; j < u; ++j) {  // Floyd's sampling
          std::uniform_int_distribution<std::size_t> pick(0, j);
          const std::size_t t = pick(rng);
          if (std::find(a.begin(), a.end(), t) == a.end()) a.push_back(t);
          else a.push_back(j);
        }
        add(std::move(a));
      }
    }
    std::vector<Eval> results(sets.size());
    parallel_for(sets.size(), opt_.workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k)
        results[k] = p_.evaluate(sets[k], mode_, opt_, stream_ * 1000003 + s * 10007 + k);
    });
    Eval best;
    Subset best_set;
    Eval grown_best;
    Subset grown_next;
    for (std::size_t k = 0; k < sets.size(); ++k) {
      const bool grown = std::find(grown_index.begin(), grown_index.end(), k) != grown_index.end();
      if (grown && improves(results[k], grown_best)) {
        grown_best = results[k];
        grown_next = sets[k];
      }
      if (improves(results[k], best)) {
        best = results[k];
        best_set = sets[k];
      }
    }
    grown_ = grown_next;
    return {best, best_set};
  }

 private:
  const ProjectionProblem& p_;
  const ConditionalityOptions& opt_;
  Mode mode_;
  std::uint64_t stream_;
  Subset grown_;
};

Certification search_flag(Mode mode) {
  return mode == Mode::Heuristic ? Certification::HeuristicLowerBound
                                 : Certification::WitnessLowerBound;
}

Certification weaker(Certification a, Certification b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

struct SizeBest {
  Eval eval;
  Subset subset;
  Certification flag;
};

/// Best projection norm over subsets of each size 1..s_max.
std::vector<SizeBest> per_size(const ProjectionProblem& p, std::size_t s_max,
                               const ConditionalityOptions& opt, std::uint64_t stream) {
  std::vector<SizeBest> out;
  FamilySearch families(p, opt, opt.mode == Mode::Exact ? Mode::Witness : opt.mode, stream);
  double spent = 0;
  bool exhausted = opt.mode != Mode::Exact;
  for (std::size_t s = 1; s <= s_max; ++s) {
    if (!exhausted) {
      const double cost = p.exact_cost(s) - p.exact_cost(s - 1);
      spent += cost;
      if (std::isfinite(spent) && spent <= static_cast<double>(opt.budget)) {
        const auto sets = subsets_of_size(p.size(), s);
        auto [e, arg] = best_of(p, sets, Mode::Exact, opt, stream * 1000003 + s * 10007);
        out.push_back({e, sets[arg], Certification::CertifiedExact});
        families.seed(sets[arg]);
        continue;
      }
      exhausted = true;
    }
    auto [e, a] = families.search(s);
    out.push_back({e, a, search_flag(opt.mode)});
  }
  return out;
}

ConstantValue finish(const Basis& b, Quantity q, std::size_t m, const SizeBest& best,
                     Certification flag) {
  ConstantValue v;
  v.witness = make_certificate(b, q, m, best.eval.f, best.subset);
  v.flag = flag;
  v.value = flag == Certification::CertifiedExact ? best.eval.value : v.witness.bound;
  return v;
}

void check_range(const Basis& b, std::size_t m) {
  if (m == 0 || m > b.dim())
    throw InvalidArgument("m must lie in 1.." + std::to_string(b.dim()));
}

ConstantValue l_single(const Basis& b, std::size_t m, const ConditionalityOptions& opt,
                       const ConstantValue* k) {
  const ProjectionProblem p(b, m);
  const std::uint64_t stream = 500 + m;
  if (k && k->flag == Certification::CertifiedExact) {
    // A witness that reaches k_m pins L_m, since L_m <= k_m.
    ConditionalityOptions quick = opt;
    quick.mode = opt.mode == Mode::Exact ? Mode::Witness : opt.mode;
    const auto sizes = per_size(p, m, quick, stream);
    std::size_t arg = 0;
    for (std::size_t s = 1; s < sizes.size(); ++s)
      if (improves(sizes[s].eval, sizes[arg].eval)) arg = s;
    const ConstantValue w = finish(b, Quantity::L, m, sizes[arg], Certification::WitnessLowerBound);
    if (w.witness.bound.is_exact() && k->value.is_exact() &&
        w.witness.bound.exact() >= k->value.exact()) {
      ConstantValue out = w;
      out.flag = Certification::CertifiedExact;
      out.value = k->value;
      return out;
    }
    if (opt.mode != Mode::Exact) return w;
  }
  const auto sizes = per_size(p, m, opt, stream);
  std::size_t arg = 0;
  Certification flag = sizes[0].flag;
  for (std::size_t s = 1; s < sizes.size(); ++s) {
    flag = weaker(flag, sizes[s].flag);
    if (improves(sizes[s].eval, sizes[arg].eval)) arg = s;
  }
  return finish(b, Quantity::L, m, sizes[arg], flag);
}

}  // namespace

std::vector<ConstantValue> k_table(const Basis& b, std::size_t m_max,
                                   const ConditionalityOptions& options) {
  check_range(b, m_max);
  const ProjectionProblem p(b, b.dim());
  const auto sizes = per_size(p, m_max, options, 1);
  std::vector<ConstantValue> out;
  std::size_t arg = 0;
  Certification flag = sizes[0].flag;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    flag = weaker(flag, sizes[s].flag);
    if (improves(sizes[s].eval, sizes[arg].eval)) arg = s;
    out.push_back(finish(b, Quantity::K, s + 1, sizes[arg], flag));
  }
  return out;
}

std::vector<ConstantValue> L_table(const Basis& b, std::size_t m_max,
                                   const ConditionalityOptions& options,
                                   const std::vector<ConstantValue>* k) {
  check_range(b, m_max);
  std::vector<ConstantValue> out;
  for (std::size_t m = 1; m <= m_max; ++m)
    out.push_back(l_single(b, m, options, k && k->size() >= m ? &(*k)[m - 1] : nullptr));
  return out;
}

ConstantValue k_m(const Basis& b, std::size_t m, const ConditionalityOptions& options) {
  return k_table(b, m, options).back();
}

ConstantValue L_m(const Basis& b, std::size_t m, const ConditionalityOptions& options) {
  check_range(b, m);
  return l_single(b, m, options, nullptr);
}

WitnessCertificate paper_witness_diamond(const Basis& d, std::size_t j) {
  if (d.space().kind() != NormSpec::Kind::DirectSumMax || d.dim() % 2 != 0)
    throw InvalidArgument("paper_witness_diamond needs a diamond basis");
  if (j == 0 || 2 * j > d.dim()) throw InvalidArgument("witness index j out of range");
  RationalVector f(d.dim(), Rational(0));
  Subset a;
  for (std::size_t k = 0; k < 2 * j; ++k) {
    const RationalVector z = d.vector(k);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += z[i];
    if (k % 2 == 0) a.push_back(k);
  }
  return make_certificate(d, Quantity::L, 2 * j, f, a);
}

WitnessCertificate paper_witness_block(const Basis& z, unsigned j) {
  const unsigned blocks = block_count(z.dim());
  if (j == 0 || j > blocks) throw InvalidArgument("block index j out of range");
  const std::size_t start = (std::size_t{1} << j) - 1, end = (std::size_t{2} << j) - 2;
  RationalVector f(z.dim(), Rational(0));
  for (std::size_t n = start; n <= end; ++n) {
    const RationalVector v = z.vector(n - 1);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += v[i];
  }
  Subset a;
  for (std::size_t k = 1; k <= (std::size_t{1} << (j - 1)); ++k)
    a.push_back((std::size_t{1} << j) + 2 * k - 3 - 1);
  return make_certificate(z, Quantity::L, end, f, a);
}

GrowthFit growth_fit(const std::vector<std::pair<std::size_t, double>>& data, GrowthModel model) {
  if (data.size() < 4) throw InvalidArgument("growth fit needs at least 4 points");
  std::vector<double> xs, ys;
  for (auto [m, k] : data) {
    if (m < 2) throw InvalidArgument("growth fit needs m >= 2");
    if (!(k > 0)) throw InvalidArgument("growth fit needs positive values");
    const double lm = std::log(static_cast<double>(m));
    switch (model) {
      case GrowthModel::Power: xs.push_back(lm); ys.push_back(std::log(k)); break;
      case GrowthModel::PolyLog: xs.push_back(std::log(lm)); ys.push_back(std::log(k)); break;
      case GrowthModel::Log: xs.push_back(lm); ys.push_back(k); break;
    }
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  GrowthFit fit{model};
  fit.points = data.size();
  fit.m_lo = data.front().first;
  fit.m_hi = data.front().first;
  for (auto [m, k] : data) {
    fit.m_lo = std::min(fit.m_lo, m);
    fit.m_hi = std::max(fit.m_hi, m);
  }
  std::vector<double> predicted(xs.size());
  if (model == GrowthModel::Log) {
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += xs[i] * ys[i];
      sxx += xs[i] * xs[i];
    }
    fit.a = sxy / sxx;
    fit.alpha = 1;
    for (std::size_t i = 0; i < xs.size(); ++i) predicted[i] = fit.a * xs[i];
  } else {
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0) throw InvalidArgument("growth fit needs distinct m values");
    fit.alpha = sxy / sxx;
    const double intercept = my - fit.alpha * mx;
    fit.a = std::exp(intercept);
    for (std::size_t i = 0; i < xs.size(); ++i) predicted[i] = intercept + fit.alpha * xs[i];
  }
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    ss_res += (ys[i] - predicted[i]) * (ys[i] - predicted[i]);
    ss_tot += (ys[i] - my) * (ys[i] - my);
  }
  fit.r2 = ss_tot > 0 ? std::clamp(1 - ss_res / ss_tot, 0.0, 1.0) : (ss_res < 1e-24 ? 1.0 : 0.0);
  return fit;
}

GrowthFit growth_fit(const std::vector<ConstantValue>& table, GrowthModel model, std::size_t m_lo,
                     std::size_t m_hi) {
  std::vector<std::pair<std::size_t, double>> data;
  for (std::size_t m = std::max<std::size_t>(m_lo, 1); m <= std::min(m_hi, table.size()); ++m)
    data.emplace_back(m, table[m - 1].value.to_double());
  return growth_fit(data, model);
}

std::size_t saturation_point(const std::vector<ConstantValue>& table) {
  if (table.empty()) return 0;
  const Scalar last = table.back().value;
  for (std::size_t m = 1; m <= table.size(); ++m)
    if (table[m - 1].value >= last) return m;
  return table.size();
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string out = "basis_id,m,quantity,value,value_exact,flag,witness_file\n";
  for (const auto& r : rows) {
    out += r.basis_id + "," + std::to_string(r.m) + "," + to_string(r.quantity) + "," +
           r.value.decimal() + "," + r.value.exact_text() + "," + to_string(r.flag) + "," +
           r.witness_file + "\n";
  }
  return out;
}

namespace {

nlohmann::ordered_json scalar_json(const Scalar& s) {
  nlohmann::ordered_json j;
  j["decimal"] = s.decimal();
  if (s.is_exact()) j["exact"] = s.exact_text();
  else j["exact"] = nullptr;
  return j;
}

}  // namespace

std::string witness_to_text(const WitnessCertificate& c) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["quantity"] = to_string(c.quantity);
  j["m"] = c.m;
  std::vector<std::size_t> one_based;
  for (std::size_t a : c.subset) one_based.push_back(a + 1);
  j["subset"] = one_based;
  std::vector<std::string> f;
  for (const auto& x : c.f) f.push_back(format_rational(x));
  j["f"] = f;
  j["norm_f"] = scalar_json(c.norm_f);
  j["norm_projection"] = scalar_json(c.norm_projection);
  j["bound"] = scalar_json(c.bound);
  return j.dump(2) + "\n";
}

}  // namespace condlab
