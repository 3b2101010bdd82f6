#include <algorithm>
#include <cmath>

#include "condlab/errors.hpp"
#include "condlab/spaces.hpp"

namespace condlab {

namespace {

void check_dim(std::size_t n, const NormSpec& spec) {
  if (n != spec.dim())
    throw DimensionMismatch("vector of length " + std::to_string(n) + " for norm " +
                            spec.describe());
}

template <class T>
std::pair<std::vector<T>, std::vector<T>> split(const std::vector<T>& f, const NormSpec& spec) {
  const std::size_t k = spec.left().dim();
  return {std::vector<T>(f.begin(), f.begin() + k), std::vector<T>(f.begin() + k, f.end())};
}

/// Exact integer root of a nonnegative rational when it exists.
bool exact_root(const Rational& x, unsigned long k, Rational& out) {
  mpz_class num, den;
  if (mpz_root(num.get_mpz_t(), x.get_num_mpz_t(), k) == 0) return false;
  if (mpz_root(den.get_mpz_t(), x.get_den_mpz_t(), k) == 0) return false;
  out = Rational(num, den);
  out.canonicalize();
  return true;
}

Scalar lp_norm(const RationalVector& f, const Rational& p) {
  if (p.get_den() == 1 && p.get_num().fits_ulong_p()) {
    const unsigned long k = p.get_num().get_ui();
    Rational sum = 0;
    mpq_class power;
    for (const auto& x : f) {
      if (sgn(x) == 0) continue;
      mpz_class num, den;
      mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), k);
      mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), k);
      power = Rational(abs(num), den);
      sum += power;
    }
    Rational root;
    if (exact_root(sum, k, root)) return root;
    return Scalar(std::pow(sum.get_d(), 1.0 / static_cast<double>(k)));
  }
  return Scalar(norm(to_real(f), NormSpec::lp(p, f.size())));
}

}  // namespace

Scalar norm(const RationalVector& f, const NormSpec& spec) {
  check_dim(f.size(), spec);
  switch (spec.kind()) {
    case NormSpec::Kind::Sup: {
      Rational m = 0;
      for (const auto& x : f) {
        const int sign = sgn(x);
        if (sign > 0 && x > m) m = x;
        else if (sign < 0 && m + x < 0) m = -x;
      }
      return m;
    }
    case NormSpec::Kind::Lp: {
      if (spec.p() == 1) {
        Rational s = 0;
        for (const auto& x : f) {
          const int sign = sgn(x);
          if (sign > 0) s += x;
          else if (sign < 0) s -= x;
        }
        return s;
      }
      return lp_norm(f, spec.p());
    }
    case NormSpec::Kind::V1: {
      Rational s = 0, prev = 0;
      for (const auto& x : f) {
        s += abs(Rational(x - prev));
        prev = x;
      }
      return Rational(s + abs(prev));
    }
    case NormSpec::Kind::DirectSumMax: {
      const auto [a, b] = split(f, spec);
      return max(norm(a, spec.left()), norm(b, spec.right()));
    }
    case NormSpec::Kind::Interpolated:
      return interpolated_norm(f, spec);
  }
  throw NotSupported("unknown norm");
}

double norm(const RealVector& f, const NormSpec& spec) {
  check_dim(f.size(), spec);
  switch (spec.kind()) {
    case NormSpec::Kind::Sup: {
      double m = 0;
      for (double x : f) m = std::max(m, std::abs(x));
      return m;
    }
    case NormSpec::Kind::Lp: {
      const double p = spec.p().get_d();
      double s = 0;
      if (p == 1) {
        for (double x : f) s += std::abs(x);
        return s;
      }
      double scale = 0;
      for (double x : f) scale = std::max(scale, std::abs(x));
      if (scale == 0) return 0;
      for (double x : f) s += std::pow(std::abs(x) / scale, p);
      return scale * std::pow(s, 1.0 / p);
    }
    case NormSpec::Kind::V1: {
      double s = 0, prev = 0;
      for (double x : f) {
        s += std::abs(x - prev);
        prev = x;
      }
      return s + std::abs(prev);
    }
    case NormSpec::Kind::DirectSumMax: {
      const auto [a, b] = split(f, spec);
      return std::max(norm(a, spec.left()), norm(b, spec.right()));
    }
    case NormSpec::Kind::Interpolated:
      return interpolated_norm(f, spec);
  }
  throw NotSupported("unknown norm");
}

Scalar dual_norm(const RationalVector& phi, const NormSpec& spec) {
  check_dim(phi.size(), spec);
  switch (spec.kind()) {
    case NormSpec::Kind::Sup:
      return norm(phi, NormSpec::lp(1, phi.size()));
    case NormSpec::Kind::Lp: {
      if (spec.p() == 1) return norm(phi, NormSpec::sup(phi.size()));
      const Rational conj = spec.p() / (spec.p() - 1);
      return norm(phi, NormSpec::lp(conj, phi.size()));
    }
    case NormSpec::Kind::V1: {
      Rational prefix = 0, lo = 0, hi = 0;
      for (const auto& x : phi) {
        prefix += x;
        lo = std::min(lo, prefix);
        hi = std::max(hi, prefix);
      }
      return Rational((hi - lo) / 2);
    }
    case NormSpec::Kind::DirectSumMax: {
      const auto [a, b] = split(phi, spec);
      return dual_norm(a, spec.left()) + dual_norm(b, spec.right());
    }
    case NormSpec::Kind::Interpolated: break;
  }
  throw NotSupported("dual norm of an interpolated space has no closed form");
}

double dual_norm(const RealVector& phi, const NormSpec& spec) {
  check_dim(phi.size(), spec);
  switch (spec.kind()) {
    case NormSpec::Kind::Sup:
      return norm(phi, NormSpec::lp(1, phi.size()));
    case NormSpec::Kind::Lp: {
      if (spec.p() == 1) return norm(phi, NormSpec::sup(phi.size()));
      const Rational conj = spec.p() / (spec.p() - 1);
      return norm(phi, NormSpec::lp(conj, phi.size()));
    }
    case NormSpec::Kind::V1: {
      double prefix = 0, lo = 0, hi = 0;
      for (double x : phi) {
        prefix += x;
        lo = std::min(lo, prefix);
        hi = std::max(hi, prefix);
      }
      return (hi - lo) / 2;
    }
    case NormSpec::Kind::DirectSumMax: {
      const auto [a, b] = split(phi, spec);
      return dual_norm(a, spec.left()) + dual_norm(b, spec.right());
    }
    case NormSpec::Kind::Interpolated: break;
  }
  throw NotSupported("dual norm of an interpolated space has no closed form");
}

RationalVector dual_norm_maximizer(const RationalVector& phi, const NormSpec& spec) {
  check_dim(phi.size(), spec);
  const std::size_t n = phi.size();
  RationalVector v(n, Rational(0));
  switch (spec.kind()) {
    case NormSpec::Kind::Sup:
      for (std::size_t i = 0; i < n; ++i) v[i] = sgn(phi[i]) < 0 ? -1 : 1;
      return v;
    case NormSpec::Kind::Lp: {
      if (spec.p() == 1) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i)
          if (abs(phi[i]) > abs(phi[best])) best = i;
        if (n > 0) v[best] = sgn(phi[best]) < 0 ? -1 : 1;
        return v;
      }
      if (spec.p() == 2) {
        bool zero = true;
        for (const auto& x : phi) zero = zero && sgn(x) == 0;
        if (zero && n > 0) v[0] = 1;
        else v = phi;
        return v;
      }
      // v_i = sign(phi_i) |phi_i|^(p'-1), rounded to a rational.
      const double conj = spec.p().get_d() / (spec.p().get_d() - 1);
      bool zero = true;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = phi[i].get_d();
        v[i] = rationalize(std::copysign(std::pow(std::abs(x), conj - 1), x), 1L << 30);
        zero = zero && sgn(v[i]) == 0;
      }
      if (zero && n > 0) v[0] = 1;
      return v;
    }
    case NormSpec::Kind::V1: {
      // Vertex +-(1/2) 1_{(a, b]} spanning the extreme prefix sums.
      Rational prefix = 0, lo = 0, hi = 0;
      std::size_t arg_lo = 0, arg_hi = 0;
      for (std::size_t k = 0; k < n; ++k) {
        prefix += phi[k];
        if (prefix < lo) lo = prefix, arg_lo = k + 1;
        if (prefix > hi) hi = prefix, arg_hi = k + 1;
      }
      if (arg_lo == arg_hi) {
        if (n > 0) v[0] = Rational(1, 2);
        return v;
      }
      const Rational half = arg_lo < arg_hi ? Rational(1, 2) : Rational(-1, 2);
      for (std::size_t k = std::min(arg_lo, arg_hi); k < std::max(arg_lo, arg_hi); ++k) v[k] = half;
      return v;
    }
    case NormSpec::Kind::DirectSumMax: {
      const auto [a, b] = split(phi, spec);
      RationalVector va = dual_norm_maximizer(a, spec.left());
      const RationalVector vb = dual_norm_maximizer(b, spec.right());
      va.insert(va.end(), vb.begin(), vb.end());
      return va;
    }
    case NormSpec::Kind::Interpolated: break;
  }
  throw NotSupported("dual maximizer of an interpolated space");
}

double vertex_count_up_to_sign(const NormSpec& spec) {
  const double n = static_cast<double>(spec.dim());
  switch (spec.kind()) {
    case NormSpec::Kind::Sup: return std::ldexp(1.0, static_cast<int>(spec.dim()) - 1);
    case NormSpec::Kind::Lp:
      if (spec.p() == 1) return n;
      break;
    case NormSpec::Kind::V1: return n * (n + 1) / 2;
    case NormSpec::Kind::DirectSumMax:
      return 2 * vertex_count_up_to_sign(spec.left()) * vertex_count_up_to_sign(spec.right());
    case NormSpec::Kind::Interpolated: break;
  }
  return INFINITY;
}

double dual_generator_count_up_to_sign(const NormSpec& spec) {
  const int n = static_cast<int>(spec.dim());
  switch (spec.kind()) {
    case NormSpec::Kind::Sup: return n;
    case NormSpec::Kind::Lp:
      if (spec.p() == 1) return std::ldexp(1.0, n - 1);
      break;
    case NormSpec::Kind::V1: return std::ldexp(1.0, n) - 1;
    case NormSpec::Kind::DirectSumMax:
      return dual_generator_count_up_to_sign(spec.left()) +
             dual_generator_count_up_to_sign(spec.right());
    case NormSpec::Kind::Interpolated: break;
  }
  return INFINITY;
}

namespace {

void require_budget(double count, std::uint64_t budget, const NormSpec& spec) {
  if (!(count <= static_cast<double>(budget)))
    throw BudgetExceeded("enumerating " + spec.describe() + " exceeds the budget");
}

bool first_nonzero_positive(const RationalVector& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return sgn(x) > 0;
  return true;
}

RationalVector negate(RationalVector v) {
  for (auto& x : v) x = -x;
  return v;
}

}  // namespace

std::vector<RationalVector> unit_ball_vertices_up_to_sign(const NormSpec& spec,
                                                          std::uint64_t budget) {
  if (!spec.polyhedral()) throw NotSupported(spec.describe() + " has no finite vertex set");
  require_budget(vertex_count_up_to_sign(spec), budget, spec);
  const std::size_t n = spec.dim();
  std::vector<RationalVector> out;
  switch (spec.kind()) {
    case NormSpec::Kind::Lp:
      for (std::size_t i = 0; i < n; ++i) {
        RationalVector v(n, Rational(0));
        v[i] = 1;
        out.push_back(std::move(v));
      }
      break;
    case NormSpec::Kind::Sup:
      // Sign vectors with a leading +1, in binary order of the remainder.
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
        RationalVector v(n, Rational(1));
        for (std::size_t i = 1; i < n; ++i)
          if (mask >> (i - 1) & 1) v[i] = -1;
        out.push_back(std::move(v));
      }
      break;
    case NormSpec::Kind::V1:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j) {
          RationalVector v(n, Rational(0));
          for (std::size_t k = i; k < j; ++k) v[k] = Rational(1, 2);
          out.push_back(std::move(v));
        }
      break;
    case NormSpec::Kind::DirectSumMax: {
      const auto left = unit_ball_vertices(spec.left(), budget);
      const auto right = unit_ball_vertices(spec.right(), budget);
      for (const auto& a : left)
        for (const auto& b : right) {
          RationalVector v = a;
          v.insert(v.end(), b.begin(), b.end());
          if (first_nonzero_positive(v)) out.push_back(std::move(v));
        }
      break;
    }
    case NormSpec::Kind::Interpolated: break;
  }
  return out;
}

std::vector<RationalVector> unit_ball_vertices(const NormSpec& spec, std::uint64_t budget) {
  auto half = unit_ball_vertices_up_to_sign(spec, budget / 2 + 1);
  std::vector<RationalVector> out;
  out.reserve(2 * half.size());
  for (auto& v : half) {
    out.push_back(v);
    out.push_back(negate(std::move(v)));
  }
  return out;
}

std::vector<RationalVector> dual_generators(const NormSpec& spec, std::uint64_t budget) {
  if (!spec.polyhedral()) throw NotSupported(spec.describe() + " has no finite dual generator set");
  require_budget(dual_generator_count_up_to_sign(spec), budget, spec);
  const std::size_t n = spec.dim();
  std::vector<RationalVector> out;
  switch (spec.kind()) {
    case NormSpec::Kind::Sup:
      out = unit_ball_vertices_up_to_sign(NormSpec::lp(1, n), budget);
      break;
    case NormSpec::Kind::Lp:
      out = unit_ball_vertices_up_to_sign(NormSpec::sup(n), budget);
      break;
    case NormSpec::Kind::V1:
      // D^T sigma for sign vectors sigma of length n + 1 (leading +1),
      // skipping the constant vector, which maps to zero.
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<int> sigma(n + 1, 1);
        for (std::size_t i = 1; i <= n; ++i)
          if (mask >> (i - 1) & 1) sigma[i] = -1;
        RationalVector w(n);
        for (std::size_t k = 0; k < n; ++k) w[k] = sigma[k] - sigma[k + 1];
        out.push_back(std::move(w));
      }
      break;
    case NormSpec::Kind::DirectSumMax: {
      const std::size_t k = spec.left().dim();
      for (auto& w : dual_generators(spec.left(), budget)) {
        w.resize(n, Rational(0));
        out.push_back(std::move(w));
      }
      for (auto& w : dual_generators(spec.right(), budget)) {
        RationalVector full(k, Rational(0));
        full.insert(full.end(), w.begin(), w.end());
        out.push_back(std::move(full));
      }
      break;
    }
    case NormSpec::Kind::Interpolated: break;
  }
  return out;
}

double interpolation_constant(double theta, double q) {
  return std::pow(1.0 / (q * (1 - theta)) + 1.0 / (theta * q), 1.0 / q);
}

}  // namespace condlab
