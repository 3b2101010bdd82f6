#include "condlab/epigraph.hpp"
#include "condlab/errors.hpp"
#include "condlab/spaces.hpp"

namespace condlab {

namespace {

template <class T>
T convert(const Rational& x) {
  if constexpr (std::is_same_v<T, double>) return x.get_d();
  else return x;
}

void check_pair(std::size_t n, const NormSpec& spec0, const NormSpec& spec1) {
  if (spec0.dim() != n || spec1.dim() != n)
    throw DimensionMismatch("K-functional operands have different dimensions");
  if (!spec0.polyhedral() || !spec1.polyhedral())
    throw NotSupported("K-functional requires polyhedral norms");
}

template <class T>
lp::Solution<T> checked(const lp::Problem<T>& problem) {
  const auto sol = lp::solve(problem);
  if (sol.status != lp::Status::Optimal)
    throw NumericFailure("K-functional program did not reach an optimum");
  return sol;
}

/// min norm0(g) + t norm1(f - g). For a v1 first space, g = Q h so that the
/// first term becomes the l1 norm of (h, -sum h).
template <class T>
std::vector<T> primal_split(const std::vector<T>& f, const T& t, const NormSpec& spec0,
                            const NormSpec& spec1) {
  using Expr = lp::LinearExpr<T>;
  const std::size_t n = f.size();
  lp::Problem<T> p;
  EpigraphBuilder<T> b(p);
  std::vector<std::size_t> h(n);
  for (auto& v : h) v = p.add_variable(true);
  const std::size_t r0 = p.add_variable(), r1 = p.add_variable();
  p.set_objective(r0, T(-1));
  p.set_objective(r1, -t);

  std::vector<Expr> g(n);
  if (spec0.kind() == NormSpec::Kind::V1) {
    Expr prefix;
    std::vector<Expr> coeffs;
    for (std::size_t k = 0; k < n; ++k) {
      prefix.add(Expr::variable(h[k]));
      g[k] = prefix;
      coeffs.push_back(Expr::variable(h[k]));
    }
    Expr total;
    total.add(prefix, T(-1));
    coeffs.push_back(total);
    b.l1_at_most(coeffs, Expr::variable(r0));
  } else {
    for (std::size_t k = 0; k < n; ++k) g[k] = Expr::variable(h[k]);
    b.norm_at_most(spec0, g, Expr::variable(r0));
  }
  std::vector<Expr> rest(n);
  for (std::size_t k = 0; k < n; ++k) {
    rest[k] = Expr::constant_value(f[k]);
    rest[k].add(g[k], T(-1));
  }
  b.norm_at_most(spec1, rest, Expr::variable(r1));

  const auto sol = checked(p);
  std::vector<T> out(n, T(0));
  T prefix = T(0);
  for (std::size_t k = 0; k < n; ++k) {
    if (spec0.kind() == NormSpec::Kind::V1) {
      prefix += sol.x[h[k]];
      out[k] = prefix;
    } else {
      out[k] = sol.x[h[k]];
    }
  }
  return out;
}

template <class T>
T dual_value(const std::vector<T>& f, const T& t, const NormSpec& spec0, const NormSpec& spec1) {
  using Expr = lp::LinearExpr<T>;
  const std::size_t n = f.size();
  lp::Problem<T> p;
  EpigraphBuilder<T> b(p);
  std::vector<Expr> phi(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t v = p.add_variable(true);
    phi[k] = Expr::variable(v);
    p.set_objective(v, f[k]);
  }
  b.dual_norm_at_most(spec0, phi, Expr::constant_value(T(1)));
  b.dual_norm_at_most(spec1, phi, Expr::constant_value(t));
  return checked(p).value;
}

}  // namespace

Scalar k_functional(const RationalVector& f, const Scalar& t, const NormSpec& spec0,
                    const NormSpec& spec1) {
  check_pair(f.size(), spec0, spec1);
  if (!(t > Scalar(0))) throw InvalidArgument("K-functional needs t > 0");
  if (!t.is_exact()) return Scalar(k_functional_split(to_real(f), t.to_double(), spec0, spec1).value);
  const RationalVector g = primal_split<Rational>(f, t.exact(), spec0, spec1);
  RationalVector rest(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) rest[k] = f[k] - g[k];
  return norm(g, spec0) + t * norm(rest, spec1);
}

KSplit k_functional_split(const RealVector& f, double t, const NormSpec& spec0,
                          const NormSpec& spec1) {
  check_pair(f.size(), spec0, spec1);
  if (!(t > 0)) throw InvalidArgument("K-functional needs t > 0");
  const RealVector g = primal_split<double>(f, t, spec0, spec1);
  RealVector rest(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) rest[k] = f[k] - g[k];
  const double a = norm(g, spec0), b = norm(rest, spec1);
  return {a + t * b, a, b};
}

Scalar k_functional_dual(const RationalVector& f, const Scalar& t, const NormSpec& spec0,
                         const NormSpec& spec1) {
  check_pair(f.size(), spec0, spec1);
  if (!(t > Scalar(0))) throw InvalidArgument("K-functional needs t > 0");
  if (!t.is_exact()) return Scalar(k_functional_dual(to_real(f), t.to_double(), spec0, spec1));
  return dual_value<Rational>(f, t.exact(), spec0, spec1);
}

double k_functional_dual(const RealVector& f, double t, const NormSpec& spec0,
                         const NormSpec& spec1) {
  check_pair(f.size(), spec0, spec1);
  if (!(t > 0)) throw InvalidArgument("K-functional needs t > 0");
  return dual_value<double>(f, t, spec0, spec1);
}

}  // namespace condlab
