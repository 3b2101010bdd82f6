#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "condlab/errors.hpp"
#include "condlab/spaces.hpp"
#include "oracles.hpp"

using namespace condlab;

namespace {

RationalVector rv(std::initializer_list<Rational> xs) { return RationalVector(xs); }

std::vector<NormSpec> polyhedral_specs(std::size_t n) {
  std::vector<NormSpec> out = {NormSpec::lp(1, n), NormSpec::sup(n), NormSpec::v1(n)};
  if (n >= 2) {
    const std::size_t k = n / 2;
    out.push_back(NormSpec::direct_sum_max(NormSpec::sup(k), NormSpec::lp(1, n - k)));
    out.push_back(NormSpec::direct_sum_max(NormSpec::v1(k), NormSpec::sup(n - k)));
  }
  return out;
}

Rational brute_dual(const RationalVector& phi, const NormSpec& spec) {
  Rational best = 0;
  for (const auto& v : unit_ball_vertices(spec)) {
    Rational s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += phi[i] * v[i];
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

TEST_CASE("norm: worked values") {
  CHECK(norm(rv({1, 0, 1}), NormSpec::v1(3)) == Scalar(4));
  const Scalar l2 = norm(rv({3, -4}), NormSpec::lp(2, 2));
  CHECK(l2.is_exact());
  CHECK(l2 == Scalar(5));
  const NormSpec sum = NormSpec::direct_sum_max(NormSpec::sup(2), NormSpec::lp(1, 1));
  CHECK(norm(rv({1, -1, 2}), sum) == Scalar(2));
  CHECK_THROWS_AS(norm(rv({1, 2}), NormSpec::sup(3)), DimensionMismatch);
}

TEST_CASE("norm: irrational l2 falls back to floating point") {
  const Scalar v = norm(rv({1, 1}), NormSpec::lp(2, 2));
  CHECK_FALSE(v.is_exact());
  CHECK(v.to_double() == doctest::Approx(std::sqrt(2.0)));
  CHECK(norm(rv({1, 2, 2}), NormSpec::lp(3, 3)).to_double() == doctest::Approx(std::cbrt(17.0)));
}

TEST_CASE("norm: triangle inequality and homogeneity hold exactly") {
  std::mt19937_64 rng(7);
  for (std::size_t n = 1; n <= 7; ++n)
    for (const auto& spec : polyhedral_specs(n))
      for (int trial = 0; trial < 20; ++trial) {
        const auto f = oracle::random_rational_vector(rng, n);
        const auto g = oracle::random_rational_vector(rng, n);
        RationalVector sum(n), scaled(n);
        const Rational c(-7, 3);
        for (std::size_t i = 0; i < n; ++i) {
          sum[i] = f[i] + g[i];
          scaled[i] = c * f[i];
        }
        CHECK(norm(sum, spec) <= norm(f, spec) + norm(g, spec));
        CHECK(norm(scaled, spec) == Scalar(Rational(7, 3)) * norm(f, spec));
        CHECK(norm(f, NormSpec::sup(n)) <= norm(f, NormSpec::v1(n)));
      }
}

TEST_CASE("dual_norm: worked values") {
  CHECK(dual_norm(rv({1, 1}), NormSpec::sup(2)) == Scalar(2));
  CHECK(dual_norm(rv({0, 1}), NormSpec::lp(1, 2)) == Scalar(1));
  const RationalVector phi = rv({1, -1, 0});
  CHECK(dual_norm(phi, NormSpec::v1(3)) == Scalar(brute_dual(phi, NormSpec::v1(3))));
  CHECK(dual_norm(phi, NormSpec::v1(3)) == Scalar(Rational(1, 2)));
  const NormSpec interp = NormSpec::interpolated(NormSpec::v1(2), NormSpec::sup(2), Rational(1, 2), 2);
  CHECK_THROWS_AS(dual_norm(rv({1, 1}), interp), NotSupported);
}

TEST_CASE("dual_norm agrees with the vertex sup on every polyhedral spec up to dim 10") {
  std::mt19937_64 rng(11);
  for (std::size_t n = 1; n <= 10; ++n)
    for (const auto& spec : polyhedral_specs(n))
      for (int trial = 0; trial < 3; ++trial) {
        const auto phi = oracle::random_rational_vector(rng, n);
        CHECK(dual_norm(phi, spec) == Scalar(brute_dual(phi, spec)));
        // The maximizer attains the dual norm.
        const auto v = dual_norm_maximizer(phi, spec);
        Rational pairing = 0;
        for (std::size_t i = 0; i < n; ++i) pairing += phi[i] * v[i];
        CHECK(Scalar(pairing) == dual_norm(phi, spec) * norm(v, spec));
      }
}

TEST_CASE("unit_ball_vertices: cross-polytope and cube") {
  const auto l1 = unit_ball_vertices(NormSpec::lp(1, 2));
  const std::set<RationalVector> l1_set(l1.begin(), l1.end());
  CHECK(l1_set == std::set<RationalVector>{rv({1, 0}), rv({-1, 0}), rv({0, 1}), rv({0, -1})});
  const auto cube = unit_ball_vertices(NormSpec::sup(2));
  const std::set<RationalVector> cube_set(cube.begin(), cube.end());
  CHECK(cube_set == std::set<RationalVector>{rv({1, 1}), rv({1, -1}), rv({-1, 1}), rv({-1, -1})});
}

TEST_CASE("unit_ball_vertices: v1 matches the facet description") {
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto got = unit_ball_vertices(NormSpec::v1(n));
    const std::set<RationalVector> got_set(got.begin(), got.end());
    CHECK(got_set.size() == got.size());
    CHECK(got_set == oracle::v1_vertices_from_facets(n));
    for (const auto& v : got) CHECK(norm(v, NormSpec::v1(n)) == Scalar(1));
  }
  const auto two = unit_ball_vertices(NormSpec::v1(2));
  const std::set<RationalVector> two_set(two.begin(), two.end());
  CHECK(two_set.count(rv({Rational(1, 2), Rational(1, 2)})) == 1);
  CHECK(two_set.count(rv({0, Rational(1, 2)})) == 1);
  CHECK(two.size() == 6);
}

TEST_CASE("unit_ball_vertices: errors") {
  CHECK_THROWS_AS(unit_ball_vertices(NormSpec::lp(2, 3)), NotSupported);
  CHECK_THROWS_AS(unit_ball_vertices(NormSpec::sup(30), 1000), BudgetExceeded);
}

TEST_CASE("dual generators reproduce the norm") {
  std::mt19937_64 rng(5);
  for (std::size_t n = 1; n <= 8; ++n)
    for (const auto& spec : polyhedral_specs(n)) {
      const auto gens = dual_generators(spec);
      CHECK(static_cast<double>(gens.size()) == dual_generator_count_up_to_sign(spec));
      const auto f = oracle::random_rational_vector(rng, n);
      Rational best = 0;
      for (const auto& w : gens) {
        Rational s = 0;
        for (std::size_t i = 0; i < n; ++i) s += w[i] * f[i];
        best = std::max(best, abs(s));
      }
      CHECK(Scalar(best) == norm(f, spec));
    }
}

TEST_CASE("operator_norm: worked values") {
  for (const auto& spec : polyhedral_specs(4)) {
    const auto r = operator_norm(RationalMatrix::identity(4), spec, spec);
    CHECK(r.value == Scalar(1));
    CHECK(r.flag == Certification::CertifiedExact);
  }
  RationalMatrix diag(2, 2);
  diag(0, 0) = 2;
  CHECK(operator_norm(diag, NormSpec::sup(2), NormSpec::sup(2)).value == Scalar(2));

  // s_1^* (x) s_1 for the summing basis of sup^3: f -> (f_1 - f_2) e_1.
  RationalMatrix proj(3, 3);
  proj(0, 0) = 1;
  proj(0, 1) = -1;
  const auto r = operator_norm(proj, NormSpec::sup(3), NormSpec::sup(3));
  CHECK(r.value == Scalar(2));
  // Independent check: brute force over all 8 sign vectors.
  Rational brute = 0;
  for (const auto& v : unit_ball_vertices(NormSpec::sup(3)))
    brute = std::max(brute, norm(proj.apply(v), NormSpec::sup(3)).exact());
  CHECK(Scalar(brute) == r.value);
}

TEST_CASE("operator_norm: exact value equals vertex brute force and witness attains it") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 6, m = 1 + (trial / 6) % 5;
    const auto doms = polyhedral_specs(n);
    const auto cods = polyhedral_specs(m);
    const NormSpec& dom = doms[trial % doms.size()];
    const NormSpec& cod = cods[(trial / 3) % cods.size()];
    const auto mat = oracle::random_rational_matrix(rng, m, n);
    const auto r = operator_norm(mat, dom, cod);
    Rational brute = 0;
    for (const auto& v : unit_ball_vertices(dom))
      brute = std::max(brute, norm(mat.apply(v), cod).exact());
    CHECK(r.value == Scalar(brute));
    CHECK(norm(mat.apply(r.witness), cod) == r.value * norm(r.witness, dom));
  }
}

TEST_CASE("operator_norm: few nonzero rows into a large codomain match brute force") {
  // Most rows are zero and nonzero rows come in equal adjacent pairs, so
  // only a handful of codomain generators are visible.
  std::mt19937_64 rng(57);
  std::uniform_int_distribution<std::size_t> pick_row(0, 13);
  for (int trial = 0; trial < 24; ++trial) {
    const std::size_t n = 3 + trial % 6, m = 14;
    const NormSpec cod = std::vector<NormSpec>{
        NormSpec::v1(m), NormSpec::lp(1, m), NormSpec::sup(m),
        NormSpec::direct_sum_max(NormSpec::sup(7), NormSpec::lp(1, 7)),
        NormSpec::direct_sum_max(NormSpec::v1(6), NormSpec::lp(1, 8))}[trial % 5];
    const NormSpec dom = trial % 2 ? NormSpec::sup(n) : NormSpec::v1(n);
    RationalMatrix mat(m, n);
    const auto dense = oracle::random_rational_matrix(rng, 3, n);
    for (std::size_t r = 0; r < 3; ++r) {
      const std::size_t i = pick_row(rng);
      for (std::size_t j = 0; j < n; ++j) {
        mat(i, j) = dense(r, j);
        if (i + 1 < m && r % 2 == 0) mat(i + 1, j) = dense(r, j);
      }
    }
    const auto r = operator_norm(mat, dom, cod);
    Rational brute = 0;
    for (const auto& v : unit_ball_vertices(dom))
      brute = std::max(brute, norm(mat.apply(v), cod).exact());
    CAPTURE(trial);
    CHECK(r.flag == Certification::CertifiedExact);
    CHECK(r.value == Scalar(brute));
    CHECK(norm(mat.apply(r.witness), cod) == r.value * norm(r.witness, dom));
  }
  CHECK(operator_norm(RationalMatrix(5, 4), NormSpec::sup(4), NormSpec::lp(1, 5)).value == Scalar(0));
}

TEST_CASE("operator_norm: exact never below heuristic on 100 random matrices") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 8, m = 1 + (trial * 5) % 8;
    const auto doms = polyhedral_specs(n);
    const auto cods = polyhedral_specs(m);
    const NormSpec& dom = doms[trial % doms.size()];
    const NormSpec& cod = cods[(trial / 2) % cods.size()];
    const auto mat = oracle::random_rational_matrix(rng, m, n);
    OperatorNormOptions h;
    h.mode = Mode::Heuristic;
    h.seed = static_cast<std::uint64_t>(trial);
    h.samples = 8;
    const auto lower = operator_norm(mat, dom, cod, h);
    const auto exact = operator_norm(mat, dom, cod);
    CHECK(lower.flag == Certification::HeuristicLowerBound);
    CHECK(exact.value >= lower.value);
  }
}

TEST_CASE("operator_norm: parallel and serial exact runs agree") {
  std::mt19937_64 rng(3);
  const auto mat = oracle::random_rational_matrix(rng, 6, 9);
  OperatorNormOptions four;
  four.workers = 4;
  const NormSpec dom = NormSpec::sup(9), cod = NormSpec::v1(6);
  const auto a = operator_norm(mat, dom, cod), b = operator_norm(mat, dom, cod, four);
  CHECK(a.value == b.value);
  CHECK(a.witness == b.witness);
}

TEST_CASE("operator_norm: spectral norm is certified exactly") {
  RationalMatrix m(2, 2);
  m(0, 0) = 3;
  m(1, 0) = 4;
  auto r = operator_norm(m, NormSpec::lp(2, 2), NormSpec::lp(2, 2));
  CHECK(r.flag == Certification::CertifiedExact);
  CHECK(r.value.is_exact());
  CHECK(r.value == Scalar(5));

  RationalMatrix golden(2, 2);
  golden(0, 0) = 1;
  golden(0, 1) = 1;
  golden(1, 1) = 1;
  r = operator_norm(golden, NormSpec::lp(2, 2), NormSpec::lp(2, 2));
  // sqrt of the largest eigenvalue (3 + sqrt 5)/2 of M^T M is irrational.
  CHECK(r.value.to_double() == doctest::Approx((1 + std::sqrt(5.0)) / 2));

  RationalMatrix proj(3, 3);
  proj(0, 0) = proj(0, 1) = proj(1, 0) = proj(1, 1) = Rational(1, 2);
  r = operator_norm(proj, NormSpec::lp(2, 3), NormSpec::lp(2, 3));
  CHECK(r.value == Scalar(1));
  CHECK(r.flag == Certification::CertifiedExact);
}

TEST_CASE("operator_norm: budget and support errors") {
  const auto id = RationalMatrix::identity(20);
  OperatorNormOptions tight;
  tight.budget = 10;
  CHECK_THROWS_AS(operator_norm(id, NormSpec::sup(20), NormSpec::lp(1, 20), tight), BudgetExceeded);
  CHECK_THROWS_AS(operator_norm(RationalMatrix::identity(2), NormSpec::lp(3, 2), NormSpec::lp(3, 2)),
                  NotSupported);
  CHECK_THROWS_AS(operator_norm(id, NormSpec::sup(3), NormSpec::sup(20)), DimensionMismatch);
}

TEST_CASE("k_functional: worked values") {
  const NormSpec v1 = NormSpec::v1(4), sup = NormSpec::sup(4);
  CHECK(k_functional(RationalVector(4, 0), Scalar(3), v1, sup) == Scalar(0));
  CHECK(k_functional(rv({1, 0, 0, 0}), Scalar(10), v1, sup) == Scalar(2));
  // K(1_[1,m], t) = min(2, t).
  for (int m = 1; m <= 4; ++m) {
    RationalVector f(4, 0);
    for (int i = 0; i < m; ++i) f[i] = 1;
    for (Rational t : {Rational(1, 3), Rational(1), Rational(2), Rational(7, 2)})
      CHECK(k_functional(f, Scalar(t), v1, sup) == Scalar(std::min(Rational(2), t)));
  }
}

TEST_CASE("k_functional: both programs agree exactly; envelope and concavity") {
  std::mt19937_64 rng(17);
  const std::vector<Rational> grid = {Rational(1, 8), Rational(1, 3), Rational(1), Rational(3, 2),
                                      Rational(4), Rational(9)};
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const auto specs = polyhedral_specs(n);
    const NormSpec& x0 = specs[trial % specs.size()];
    const NormSpec& x1 = specs[(trial + 1) % specs.size()];
    const auto f = oracle::random_rational_vector(rng, n);
    std::vector<Scalar> k;
    for (const auto& t : grid) {
      const Scalar primal = k_functional(f, Scalar(t), x0, x1);
      CHECK(primal.is_exact());
      CHECK(primal == k_functional_dual(f, Scalar(t), x0, x1));
      CHECK(primal <= norm(f, x0));
      CHECK(primal <= Scalar(t) * norm(f, x1));
      k.push_back(primal);
    }
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(k[i - 1] <= k[i]);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      // Concavity: the middle value lies above the chord.
      const Rational w = (grid[i + 1] - grid[i]) / (grid[i + 1] - grid[i - 1]);
      CHECK(k[i] >= Scalar(w) * k[i - 1] + Scalar(Rational(1 - w)) * k[i + 1]);
    }
  }
}

TEST_CASE("k_functional: floating route tracks the exact one") {
  std::mt19937_64 rng(4);
  const NormSpec v1 = NormSpec::v1(5), sup = NormSpec::sup(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = oracle::random_rational_vector(rng, 5);
    const Rational t(trial + 1, 3);
    const double exact = k_functional(f, Scalar(t), v1, sup).to_double();
    const KSplit s = k_functional_split(to_real(f), t.get_d(), v1, sup);
    CHECK(s.value == doctest::Approx(exact).epsilon(1e-10));
    CHECK(s.norm0 + t.get_d() * s.norm1 == doctest::Approx(s.value));
  }
}

TEST_CASE("interpolated_norm: zero, homogeneity, dense oracle") {
  const NormSpec v1 = NormSpec::v1(3), sup = NormSpec::sup(3);
  const NormSpec x = NormSpec::interpolated(v1, sup, Rational(1, 2), 2);
  CHECK(interpolated_norm(RealVector{0, 0, 0}, x) == 0);
  const RealVector f = {1, -2, 0.5};
  const double a = interpolated_norm(f, x);
  CHECK(interpolated_norm(RealVector{2, -4, 1}, x) == doctest::Approx(2 * a).epsilon(1e-9));

  const RealVector e1 = {1, 0, 0};
  const double ref = oracle::trapezoid_interpolated_norms(e1, v1, sup, {{0.5, 2.0}})[0];
  CHECK(std::abs(interpolated_norm(e1, x) - ref) <= 1e-6 * ref);
}

TEST_CASE("interpolated_norm: closed form for indicator vectors") {
  for (auto [theta, q] : {std::pair{Rational(1, 2), Rational(2)}, std::pair{Rational(1, 3), Rational(3)},
                          std::pair{Rational(3, 4), Rational(1)}}) {
    const double th = theta.get_d(), qq = q.get_d();
    const double expected = std::pow(2.0, 1 - th) * interpolation_constant(th, qq);
    for (std::size_t n : {3u, 6u}) {
      const NormSpec x = NormSpec::interpolated(NormSpec::v1(n), NormSpec::sup(n), theta, q);
      for (std::size_t m = 1; m <= n; ++m) {
        RealVector f(n, 0);
        for (std::size_t i = 0; i < m; ++i) f[i] = 1;
        CHECK(interpolated_norm(f, x) == doctest::Approx(expected).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("interpolated_norm: inclusion constant bounds") {
  std::mt19937_64 rng(99);
  const NormSpec v1 = NormSpec::v1(5), sup = NormSpec::sup(5);
  const NormSpec x = NormSpec::interpolated(v1, sup, Rational(1, 3), 3);
  const double c = interpolation_constant(1.0 / 3, 3);
  for (int trial = 0; trial < 10; ++trial) {
    const RealVector f = to_real(oracle::random_rational_vector(rng, 5));
    const double value = interpolated_norm(f, x);
    CHECK(value <= c * std::max(norm(f, v1), norm(f, sup)) * (1 + 1e-9));
    CHECK(value >= c * norm(f, sup) * (1 - 1e-9));
  }
}

TEST_CASE("interpolated_norm: refinement limit reports a quadrature failure") {
  QuadratureParams params;
  params.t_min = Rational(1, 2);
  params.t_max = Rational(1);
  params.refinement_limit = 0;
  const NormSpec x = NormSpec::interpolated(NormSpec::v1(3), NormSpec::sup(3), Rational(1, 2), 2, params);
  try {
    (void)interpolated_norm(RealVector{1, 3, -1}, x);
    FAIL("expected a quadrature failure");
  } catch (const QuadratureFailure& e) {
    CHECK(e.t_min > 0);
    CHECK(e.t_min < e.t_max);
  }
}
