#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <type_traits>
#include <utility>
#include <vector>

#include "condlab/errors.hpp"
#include "condlab/rational.hpp"

namespace condlab::lp {

enum class Relation { LessEqual, GreaterEqual, Equal };
enum class Status { Optimal, Infeasible, Unbounded };

template <class T>
struct Term {
  std::size_t var;
  T coef;
};

/// Affine expression sum(coef * var) + constant.
template <class T>
struct LinearExpr {
  std::vector<Term<T>> terms;
  T constant = T(0);

  static LinearExpr variable(std::size_t v, T coef = T(1)) {
    LinearExpr e;
    e.terms.push_back({v, std::move(coef)});
    return e;
  }
  static LinearExpr constant_value(T c) {
    LinearExpr e;
    e.constant = std::move(c);
    return e;
  }
  void add(const LinearExpr& o, const T& scale = T(1)) {
    for (const auto& t : o.terms) terms.push_back({t.var, t.coef * scale});
    constant += o.constant * scale;
  }
};

/// maximize c^T x subject to linear rows; variables are nonnegative unless
/// declared free.
template <class T>
class Problem {
 public:
  std::size_t add_variable(bool free = false) {
    free_.push_back(free);
    objective_.push_back(T(0));
    return free_.size() - 1;
  }
  std::size_t num_variables() const { return free_.size(); }
  bool is_free(std::size_t v) const { return free_[v]; }

  void set_objective(std::size_t v, T coef) { objective_.at(v) = std::move(coef); }
  const std::vector<T>& objective() const { return objective_; }

  void add_constraint(std::vector<Term<T>> terms, Relation rel, T rhs) {
    for (const auto& t : terms)
      if (t.var >= free_.size()) throw InvalidArgument("constraint refers to an unknown variable");
    rows_.push_back({std::move(terms), rel, std::move(rhs)});
  }
  /// lhs rel rhs with affine expressions on both sides.
  void add_constraint(const LinearExpr<T>& lhs, Relation rel, const LinearExpr<T>& rhs) {
    std::vector<Term<T>> terms = lhs.terms;
    for (const auto& t : rhs.terms) terms.push_back({t.var, -t.coef});
    add_constraint(std::move(terms), rel, rhs.constant - lhs.constant);
  }

  struct Row {
    std::vector<Term<T>> terms;
    Relation rel;
    T rhs;
  };
  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::vector<bool> free_;
  std::vector<T> objective_;
  std::vector<Row> rows_;
};

template <class T>
struct Solution {
  Status status = Status::Infeasible;
  T value = T(0);
  std::vector<T> x;
};

namespace detail {

template <class T>
constexpr bool kExact = !std::is_floating_point_v<T>;

template <class T>
bool positive(const T& v) {
  if constexpr (kExact<T>) return sgn(v) > 0;
  else return v > 1e-10;
}
template <class T>
bool nonzero(const T& v) {
  if constexpr (kExact<T>) return sgn(v) != 0;
  else return std::abs(v) > 1e-12;
}

/// Dense tableau. Column `width` holds the right-hand side; the last row
/// is the reduced-cost row with the negated objective value in its rhs.
template <class T>
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), a_((rows + 1) * (cols + 1), T(0)), basis_(rows, 0) {}

  T& at(std::size_t i, std::size_t j) { return a_[i * (n_ + 1) + j]; }
  const T& at(std::size_t i, std::size_t j) const { return a_[i * (n_ + 1) + j]; }
  T& rhs(std::size_t i) { return at(i, n_); }
  T& cost(std::size_t j) { return at(m_, j); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const T inv = T(1) / at(r, c);
    for (std::size_t j = 0; j <= n_; ++j)
      if (nonzero(at(r, j))) at(r, j) *= inv;
    at(r, c) = T(1);
    nz_.clear();
    for (std::size_t j = 0; j <= n_; ++j)
      if (nonzero(at(r, j))) nz_.push_back(j);
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const T f = at(i, c);
      if (!nonzero(f)) continue;
      for (std::size_t j : nz_) at(i, j) -= f * at(r, j);
      at(i, c) = T(0);
    }
    basis_[r] = c;
  }

  /// Runs primal simplex on the current cost row over columns < limit.
  /// Returns false when unbounded.
  bool optimize(std::size_t limit, std::size_t max_iterations) {
    std::size_t degenerate = 0;
    for (std::size_t it = 0;; ++it) {
      if (it > max_iterations) throw NumericFailure("simplex iteration limit reached");
      const bool bland = kExact<T> || degenerate > 50;
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (!positive(cost(j))) continue;
        if (enter == limit) {
          enter = j;
          if (bland) break;
        } else if (cost(j) > cost(enter)) {
          enter = j;
        }
      }
      if (enter == limit) return true;
      std::size_t leave = m_;
      T best_ratio = T(0);
      for (std::size_t i = 0; i < m_; ++i) {
        if (!positive(at(i, enter))) continue;
        T ratio = rhs(i) / at(i, enter);
        if (leave == m_ || ratio < best_ratio ||
            (!(best_ratio < ratio) && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = std::move(ratio);
        }
      }
      if (leave == m_) return false;
      if (nonzero(best_ratio)) degenerate = 0;
      else ++degenerate;
      pivot(leave, enter);
    }
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<T> a_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nz_;
};

}  // namespace detail

/// Two-phase dense simplex. Exact types use Bland's rule throughout;
/// floating point uses Dantzig pricing with a Bland fallback on stalls.
template <class T>
Solution<T> solve(const Problem<T>& problem, std::size_t max_iterations = 200000) {
  using detail::nonzero;
  using detail::positive;
  const std::size_t nv = problem.num_variables();
  // Column layout: split structural columns, then slacks, then artificials.
  std::vector<std::size_t> pos_col(nv), neg_col(nv, SIZE_MAX);
  std::size_t col = 0;
  for (std::size_t v = 0; v < nv; ++v) {
    pos_col[v] = col++;
    if (problem.is_free(v)) neg_col[v] = col++;
  }
  const std::size_t structural = col;
  const auto& rows = problem.rows();
  const std::size_t m = rows.size();

  std::vector<int> sign(m, 1);
  std::vector<Relation> rel(m);
  std::size_t slacks = 0, artificials = 0;
  for (std::size_t i = 0; i < m; ++i) {
    rel[i] = rows[i].rel;
    if (rows[i].rhs < 0) {
      sign[i] = -1;
      if (rel[i] == Relation::LessEqual) rel[i] = Relation::GreaterEqual;
      else if (rel[i] == Relation::GreaterEqual) rel[i] = Relation::LessEqual;
    }
    if (rel[i] != Relation::Equal) ++slacks;
    if (rel[i] != Relation::LessEqual) ++artificials;
  }
  const std::size_t art_begin = structural + slacks;
  const std::size_t width = art_begin + artificials;
  detail::Tableau<T> tab(m, width);

  std::size_t next_slack = structural, next_art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    const T s(sign[i]);
    for (const auto& t : rows[i].terms) {
      tab.at(i, pos_col[t.var]) += s * t.coef;
      if (neg_col[t.var] != SIZE_MAX) tab.at(i, neg_col[t.var]) -= s * t.coef;
    }
    tab.rhs(i) = s * rows[i].rhs;
    if (rel[i] == Relation::LessEqual) {
      tab.at(i, next_slack) = T(1);
      tab.basis()[i] = next_slack++;
    } else {
      if (rel[i] == Relation::GreaterEqual) tab.at(i, next_slack++) = T(-1);
      tab.at(i, next_art) = T(1);
      tab.basis()[i] = next_art++;
    }
  }

  if (artificials > 0) {
    // Phase one: maximize minus the sum of artificials.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis()[i] < art_begin) continue;
      for (std::size_t j = 0; j < art_begin; ++j)
        if (nonzero(tab.at(i, j))) tab.cost(j) += tab.at(i, j);
      tab.cost(width) += tab.rhs(i);
    }
    tab.optimize(art_begin, max_iterations);
    if (positive(tab.cost(width))) return {Status::Infeasible, T(0), {}};
    // Pivot remaining zero-level artificials out where possible; rows
    // without a usable pivot are redundant and stay inert.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis()[i] < art_begin) continue;
      for (std::size_t j = 0; j < art_begin; ++j) {
        if (nonzero(tab.at(i, j))) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase two cost row.
  std::vector<T> c(width + 1, T(0));
  for (std::size_t v = 0; v < nv; ++v) {
    c[pos_col[v]] = problem.objective()[v];
    if (neg_col[v] != SIZE_MAX) c[neg_col[v]] = -problem.objective()[v];
  }
  for (std::size_t j = 0; j <= width; ++j) tab.cost(j) = j < width ? c[j] : T(0);
  for (std::size_t i = 0; i < m; ++i) {
    const T cb = c[tab.basis()[i]];
    if (!nonzero(cb)) continue;
    for (std::size_t j = 0; j <= width; ++j)
      if (nonzero(tab.at(i, j))) tab.cost(j) -= cb * tab.at(i, j);
  }
  if (!tab.optimize(art_begin, max_iterations)) return {Status::Unbounded, T(0), {}};

  std::vector<T> colval(width, T(0));
  for (std::size_t i = 0; i < m; ++i) colval[tab.basis()[i]] = tab.rhs(i);
  Solution<T> sol;
  sol.status = Status::Optimal;
  sol.value = -tab.cost(width);
  sol.x.assign(nv, T(0));
  for (std::size_t v = 0; v < nv; ++v) {
    sol.x[v] = colval[pos_col[v]];
    if (neg_col[v] != SIZE_MAX) sol.x[v] -= colval[neg_col[v]];
  }
  return sol;
}

}  // namespace condlab::lp
