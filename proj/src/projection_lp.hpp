#pragma once

// Linear programs over coefficient space shared by the conditionality and
// greedy searches.

#include <algorithm>
#include <cmath>
#include <vector>

#include "condlab/epigraph.hpp"
#include "condlab/lp.hpp"
#include "condlab/matrix.hpp"
#include "condlab/norm_spec.hpp"

namespace condlab::detail {

template <class T>
struct ProjectionLp {
  bool ok = false;
  T value = T(0);
  std::vector<T> c;
};

/// max <w, X_A c_A> subject to norm(X c, space) <= 1, where X has one
/// column per coefficient. With `signs`, c is further confined to the
/// closure of a greedy region: signs[a] * c_a >= tau for a in A and
/// |c_b| <= tau otherwise.
template <class T>
ProjectionLp<T> max_projected_functional(const Matrix<T>& x, const NormSpec& space,
                                         const std::vector<bool>& in_a, const std::vector<T>& w,
                                         const std::vector<int>* signs = nullptr) {
  using Expr = lp::LinearExpr<T>;
  const std::size_t rows = x.rows(), m = x.cols();
  lp::Problem<T> p;
  std::vector<std::size_t> c(m);
  for (auto& v : c) v = p.add_variable(true);
  for (std::size_t a = 0; a < m; ++a) {
    if (!in_a[a]) continue;
    T g = T(0);
    for (std::size_t i = 0; i < rows; ++i)
      if (w[i] != 0 && x(i, a) != 0) g += w[i] * x(i, a);
    p.set_objective(c[a], g);
  }
  std::vector<Expr> image(rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t a = 0; a < m; ++a)
      if (x(i, a) != 0) image[i].add(Expr::variable(c[a], x(i, a)));
  EpigraphBuilder<T> b(p);
  b.norm_at_most(space, image, Expr::constant_value(T(1)));
  if (signs) {
    const std::size_t tau = p.add_variable();
    const Expr t = Expr::variable(tau);
    for (std::size_t a = 0; a < m; ++a) {
      const Expr v = Expr::variable(c[a]);
      if (in_a[a]) {
        p.add_constraint(t, lp::Relation::LessEqual, Expr::variable(c[a], T((*signs)[a])));
      } else {
        p.add_constraint(v, lp::Relation::LessEqual, t);
        p.add_constraint(Expr::variable(c[a], T(-1)), lp::Relation::LessEqual, t);
      }
    }
  }
  const auto sol = lp::solve(p);
  ProjectionLp<T> out;
  if (sol.status != lp::Status::Optimal) return out;
  out.ok = true;
  out.value = sol.value;
  out.c.resize(m);
  for (std::size_t a = 0; a < m; ++a) out.c[a] = sol.x[c[a]];
  return out;
}

/// Coordinate ascent of ratio(c) with halving steps relative to max |c|.
template <class Ratio>
double ascend(std::vector<double>& c, Ratio&& ratio, double min_step = 1.0 / 4096) {
  double best = ratio(c);
  for (double step = 0.5; step >= min_step;) {
    double scale = 0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    if (scale == 0) scale = 1;
    bool improved = false;
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (double trial : {-c[i], c[i] + step * scale, c[i] - step * scale, 0.0}) {
        const double old = c[i];
        c[i] = trial;
        const double r = ratio(c);
        if (r > best * (1 + 1e-12) + 1e-15) {
          best = r;
          improved = true;
        } else {
          c[i] = old;
        }
      }
    }
    if (!improved) step /= 2;
  }
  return best;
}

}  // namespace condlab::detail
