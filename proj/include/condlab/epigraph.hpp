#pragma once

#include <cstddef>
#include <vector>

#include "condlab/errors.hpp"
#include "condlab/lp.hpp"
#include "condlab/norm_spec.hpp"

namespace condlab {

/// Linear-programming encodings of polyhedral norm balls and their duals.
/// `y` lists one affine expression per ambient coordinate; `r` is the bound.
template <class T>
class EpigraphBuilder {
 public:
  using Expr = lp::LinearExpr<T>;
  using Exprs = std::vector<Expr>;

  explicit EpigraphBuilder(lp::Problem<T>& problem) : p_(problem) {}

  /// Adds constraints forcing norm(y, spec) <= r.
  void norm_at_most(const NormSpec& spec, const Exprs& y, const Expr& r) {
    check_dim(spec, y);
    switch (spec.kind()) {
      case NormSpec::Kind::Sup:
        for (const auto& yi : y) abs_at_most(yi, r);
        return;
      case NormSpec::Kind::Lp:
        if (spec.p() != 1) break;
        l1_at_most(y, r);
        return;
      case NormSpec::Kind::V1:
        l1_at_most(differences(y), r);
        return;
      case NormSpec::Kind::DirectSumMax: {
        const auto [a, b] = split(spec, y);
        norm_at_most(spec.left(), a, r);
        norm_at_most(spec.right(), b, r);
        return;
      }
      case NormSpec::Kind::Interpolated: break;
    }
    throw NotSupported("no linear encoding for " + spec.describe());
  }

  /// Adds constraints forcing dual_norm(y, spec) <= r.
  void dual_norm_at_most(const NormSpec& spec, const Exprs& y, const Expr& r) {
    check_dim(spec, y);
    switch (spec.kind()) {
      case NormSpec::Kind::Sup:
        l1_at_most(y, r);
        return;
      case NormSpec::Kind::Lp:
        if (spec.p() != 1) break;
        for (const auto& yi : y) abs_at_most(yi, r);
        return;
      case NormSpec::Kind::V1: {
        // Half the oscillation of the prefix sums (including the empty sum).
        const std::size_t lo = p_.add_variable(true);
        const std::size_t hi = p_.add_variable(true);
        const Expr l = Expr::variable(lo), u = Expr::variable(hi);
        const Expr zero;
        p_.add_constraint(l, lp::Relation::LessEqual, zero);
        p_.add_constraint(zero, lp::Relation::LessEqual, u);
        Expr prefix;
        for (const auto& yi : y) {
          prefix.add(yi);
          p_.add_constraint(l, lp::Relation::LessEqual, prefix);
          p_.add_constraint(prefix, lp::Relation::LessEqual, u);
        }
        Expr width = u;
        width.add(l, T(-1));
        Expr bound;
        bound.add(r, T(2));
        p_.add_constraint(width, lp::Relation::LessEqual, bound);
        return;
      }
      case NormSpec::Kind::DirectSumMax: {
        const auto [a, b] = split(spec, y);
        const std::size_t ra = p_.add_variable(), rb = p_.add_variable();
        dual_norm_at_most(spec.left(), a, Expr::variable(ra));
        dual_norm_at_most(spec.right(), b, Expr::variable(rb));
        Expr total = Expr::variable(ra);
        total.add(Expr::variable(rb));
        p_.add_constraint(total, lp::Relation::LessEqual, r);
        return;
      }
      case NormSpec::Kind::Interpolated: break;
    }
    throw NotSupported("no linear encoding for the dual of " + spec.describe());
  }

  /// -r <= e <= r.
  void abs_at_most(const Expr& e, const Expr& r) {
    Expr neg;
    neg.add(r, T(-1));
    p_.add_constraint(e, lp::Relation::LessEqual, r);
    p_.add_constraint(neg, lp::Relation::LessEqual, e);
  }

  /// sum |y_i| <= r using one auxiliary variable per coordinate.
  void l1_at_most(const Exprs& y, const Expr& r) {
    Expr total;
    for (const auto& yi : y) {
      const std::size_t u = p_.add_variable();
      abs_at_most(yi, Expr::variable(u));
      total.add(Expr::variable(u));
    }
    p_.add_constraint(total, lp::Relation::LessEqual, r);
  }

  /// (y_1, y_2 - y_1, ..., y_n - y_{n-1}, -y_n).
  static Exprs differences(const Exprs& y) {
    Exprs d(y.size() + 1);
    for (std::size_t k = 0; k <= y.size(); ++k) {
      if (k < y.size()) d[k].add(y[k]);
      if (k > 0) d[k].add(y[k - 1], T(-1));
    }
    return d;
  }

 private:
  static void check_dim(const NormSpec& spec, const Exprs& y) {
    if (y.size() != spec.dim()) throw DimensionMismatch("expression count differs from norm dimension");
  }
  static std::pair<Exprs, Exprs> split(const NormSpec& spec, const Exprs& y) {
    const std::size_t k = spec.left().dim();
    return {Exprs(y.begin(), y.begin() + k), Exprs(y.begin() + k, y.end())};
  }

  lp::Problem<T>& p_;
};

}  // namespace condlab
