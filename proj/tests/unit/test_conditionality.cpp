#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "condlab/conditionality.hpp"
#include "condlab/errors.hpp"
#include "oracles.hpp"

using namespace condlab;

namespace {

ConditionalityOptions exact_opts() { return {}; }

/// max over |A| <= m of ||S_A|| on a polyhedral space, by brute force over
/// every A and every unit-ball vertex listed explicitly. Works in doubles;
/// the bases used here have dyadic entries, so the arithmetic is exact.
double brute_k(const std::vector<std::vector<double>>& columns, const std::vector<std::vector<double>>& coef_of_vertex,
               std::size_t m, const std::function<double(const std::vector<double>&)>& nrm) {
  const std::size_t n = columns.size();
  double best = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > m) continue;
    for (const auto& c : coef_of_vertex) {
      std::vector<double> image(columns[0].size(), 0.0);
      for (std::size_t a = 0; a < n; ++a)
        if (mask >> a & 1)
          for (std::size_t i = 0; i < image.size(); ++i) image[i] += c[a] * columns[a][i];
      best = std::max(best, nrm(image));
    }
  }
  return best;
}

double sup_norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

std::vector<std::vector<double>> sign_vectors(std::size_t n, std::size_t len) {
  std::vector<std::vector<double>> out;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    std::vector<double> v(len, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i] = (s >> i & 1) ? -1.0 : 1.0;
    out.push_back(v);
  }
  return out;
}

/// Summing basis coefficients of f: a_k = f_k - f_{k+1}, f_{n+1} = 0.
std::vector<double> summing_coefficients(const std::vector<double>& f) {
  std::vector<double> a(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) a[k] = f[k] - (k + 1 < f.size() ? f[k + 1] : 0.0);
  return a;
}

std::vector<std::vector<double>> summing_columns(std::size_t n) {
  std::vector<std::vector<double>> cols(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i) cols[j][i] = 1;
  return cols;
}

double to_d(const Scalar& s) { return s.to_double(); }

}  // namespace

TEST_CASE("canonical lp bases have k_m = L_m = 1") {
  for (const auto& space : {NormSpec::lp(2, 8), NormSpec::lp(1, 8), NormSpec::sup(6)}) {
    const Basis b = canonical_basis(space);
    const auto k = k_table(b, b.dim(), exact_opts());
    const auto l = L_table(b, b.dim(), exact_opts(), &k);
    for (std::size_t m = 0; m < b.dim(); ++m) {
      CHECK(k[m].flag == Certification::CertifiedExact);
      CHECK(k[m].value.exact() == 1);
      CHECK(l[m].flag == Certification::CertifiedExact);
      CHECK(l[m].value.exact() == 1);
      CHECK(revalidate(b, k[m].witness));
      CHECK(revalidate(b, l[m].witness));
    }
  }
}

TEST_CASE("summing basis of sup: exact k table against brute force") {
  const std::size_t n = 8;
  const Basis b = summing_basis(NormSpec::sup(n));
  const auto k = k_table(b, n, exact_opts());
  const auto cols = summing_columns(n);
  std::vector<std::vector<double>> coefs;
  for (const auto& v : sign_vectors(n, n)) coefs.push_back(summing_coefficients(v));
  for (std::size_t m = 1; m <= n; ++m) {
    CAPTURE(m);
    REQUIRE(k[m - 1].flag == Certification::CertifiedExact);
    CHECK(to_d(k[m - 1].value) == brute_k(cols, coefs, m, sup_norm));
    CHECK(revalidate(b, k[m - 1].witness));
    CHECK(k[m - 1].witness.bound.exact() == k[m - 1].value.exact());
    if (m > 1) CHECK(k[m - 1].value >= k[m - 2].value);
    CHECK(k[m - 1].value <= Scalar(static_cast<int>(m)) * k[0].value);
  }
  CHECK(k[0].value.exact() == 2);
}

TEST_CASE("summing basis of sup^12 has k_1 = 2") {
  const Basis b = summing_basis(NormSpec::sup(12));
  const auto k1 = k_m(b, 1, exact_opts());
  CHECK(k1.flag == Certification::CertifiedExact);
  CHECK(k1.value.exact() == 2);
}

TEST_CASE("summing basis of sup: exact L table against brute force") {
  const std::size_t n = 7;
  const Basis b = summing_basis(NormSpec::sup(n));
  const auto k = k_table(b, n, exact_opts());
  const auto l = L_table(b, n, exact_opts());
  const auto cols = summing_columns(n);
  for (std::size_t m = 1; m <= n; ++m) {
    CAPTURE(m);
    // span{s_1..s_m} is the set of vectors supported on the first m
    // coordinates, whose sup ball has vertices (+-1, ..., +-1, 0, ..., 0).
    std::vector<std::vector<double>> coefs;
    for (const auto& v : sign_vectors(m, n)) coefs.push_back(summing_coefficients(v));
    REQUIRE(l[m - 1].flag == Certification::CertifiedExact);
    CHECK(to_d(l[m - 1].value) == brute_k(cols, coefs, n, sup_norm));
    CHECK(l[m - 1].value <= k[m - 1].value);
    CHECK(revalidate(b, l[m - 1].witness));
    if (m > 1) CHECK(l[m - 1].value >= l[m - 2].value);
  }
}

TEST_CASE("diamond of sup^8 and l1^8: k_4 against the exhaustive vertex oracle") {
  const std::size_t n = 8;
  const Basis d = diamond(canonical_basis(NormSpec::sup(n)), canonical_basis(NormSpec::lp(1, n)));
  const auto k4 = k_m(d, 4, exact_opts());
  REQUIRE(k4.flag == Certification::CertifiedExact);

  // z_{2i} = (e_i, e_i), z_{2i+1} = (e_i, -e_i) (0-based); the domain ball
  // of max(sup^8, l1^8) has the 2^8 x 16 product vertices.
  std::vector<std::vector<double>> cols(2 * n, std::vector<double>(2 * n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    cols[2 * i][i] = 1;
    cols[2 * i][n + i] = 1;
    cols[2 * i + 1][i] = 1;
    cols[2 * i + 1][n + i] = -1;
  }
  std::vector<std::vector<double>> coefs;
  for (std::uint32_t s = 0; s < (1u << n); ++s)
    for (std::size_t e = 0; e < 2 * n; ++e) {
      std::vector<double> u(n), v(n, 0.0), c(2 * n);
      for (std::size_t i = 0; i < n; ++i) u[i] = (s >> i & 1) ? -1.0 : 1.0;
      v[e / 2] = e % 2 ? -1.0 : 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        c[2 * i] = (u[i] + v[i]) / 2;
        c[2 * i + 1] = (u[i] - v[i]) / 2;
      }
      coefs.push_back(c);
    }
  auto max_norm = [&](const std::vector<double>& x) {
    double left = 0, right = 0;
    for (std::size_t i = 0; i < n; ++i) {
      left = std::max(left, std::abs(x[i]));
      right += std::abs(x[n + i]);
    }
    return std::max(left, right);
  };
  CHECK(to_d(k4.value) == brute_k(cols, coefs, 4, max_norm));
  CHECK(revalidate(d, k4.witness));
}

TEST_CASE("k_m is invariant under a larger budget and degrades under a small one") {
  const Basis b = summing_basis(NormSpec::sup(8));
  ConditionalityOptions big;
  big.budget = 10 * kDefaultBudget;
  const auto a = k_table(b, 8, exact_opts());
  const auto c = k_table(b, 8, big);
  for (std::size_t m = 0; m < 8; ++m) CHECK(a[m].value.exact() == c[m].value.exact());

  ConditionalityOptions tiny;
  tiny.budget = 200;
  const auto t = k_table(b, 8, tiny);
  bool downgraded = false;
  for (std::size_t m = 0; m < 8; ++m) {
    CHECK(t[m].value <= a[m].value);
    CHECK(revalidate(b, t[m].witness));
    if (t[m].flag != Certification::CertifiedExact) downgraded = true;
  }
  CHECK(downgraded);
}

TEST_CASE("witness and heuristic modes never exceed exact values") {
  const std::vector<Basis> bases = {
      summing_basis(NormSpec::sup(8)),
      diamond(canonical_basis(NormSpec::sup(4)), canonical_basis(NormSpec::lp(1, 4))),
      twist(canonical_basis(NormSpec::lp(1, 6))),
  };
  for (const auto& b : bases) {
    const std::size_t n = b.dim();
    const auto exact = k_table(b, n, exact_opts());
    for (Mode mode : {Mode::Witness, Mode::Heuristic}) {
      ConditionalityOptions o;
      o.mode = mode;
      o.seed = 7;
      const auto w = k_table(b, n, o);
      const auto lw = L_table(b, n, o);
      for (std::size_t m = 0; m < n; ++m) {
        CHECK(w[m].flag == (mode == Mode::Witness ? Certification::WitnessLowerBound
                                                  : Certification::HeuristicLowerBound));
        CHECK(w[m].value <= exact[m].value);
        CHECK(lw[m].value <= exact[m].value);
        CHECK(revalidate(b, w[m].witness));
        CHECK(revalidate(b, lw[m].witness));
      }
    }
  }
}

TEST_CASE("exact L_m <= k_m on a diamond") {
  const Basis d = diamond(canonical_basis(NormSpec::sup(4)), canonical_basis(NormSpec::lp(1, 4)));
  const auto k = k_table(d, 8, exact_opts());
  const auto l = L_table(d, 8, exact_opts());
  for (std::size_t m = 0; m < 8; ++m) {
    CHECK(k[m].flag == Certification::CertifiedExact);
    CHECK(l[m].flag == Certification::CertifiedExact);
    CHECK(l[m].value <= k[m].value);
  }
}

TEST_CASE("results do not depend on the worker count") {
  const Basis b = summing_basis(NormSpec::sup(8));
  for (Mode mode : {Mode::Exact, Mode::Heuristic}) {
    ConditionalityOptions one, four;
    one.mode = four.mode = mode;
    one.seed = four.seed = 3;
    four.workers = 4;
    const auto a = k_table(b, 8, one), c = k_table(b, 8, four);
    for (std::size_t m = 0; m < 8; ++m) {
      CHECK(witness_to_text(a[m].witness) == witness_to_text(c[m].witness));
      CHECK(a[m].value == c[m].value);
    }
  }
}

TEST_CASE("diamond witness of c0 and l1") {
  const std::size_t n = 16;
  const Basis d = diamond(canonical_basis(NormSpec::sup(n)), canonical_basis(NormSpec::lp(1, n)));
  for (std::size_t j = 1; j <= n; ++j) {
    CAPTURE(j);
    const auto w = paper_witness_diamond(d, j);
    CHECK(revalidate(d, w));
    CHECK(w.m == 2 * j);
    CHECK(w.bound >= Scalar(Rational(static_cast<long>(j) - 1, 2)));
    // f = (2 * 1_[1,j], 0) and S_A f = (1_[1,j], 1_[1,j]).
    CHECK(w.norm_f.exact() == 2);
    CHECK(w.norm_projection.exact() == static_cast<long>(j));
  }
  CHECK(paper_witness_diamond(d, 4).bound >= Scalar(Rational(3, 2)));
  CHECK_THROWS_AS(paper_witness_diamond(d, 17), InvalidArgument);
  CHECK_THROWS_AS(paper_witness_diamond(canonical_basis(NormSpec::sup(4)), 1), InvalidArgument);
}

TEST_CASE("diamond witness of l2 and l2 stays small") {
  const Basis d = diamond(canonical_basis(NormSpec::lp(2, 4)), canonical_basis(NormSpec::lp(2, 4)));
  for (std::size_t j = 1; j <= 4; ++j) {
    const auto w = paper_witness_diamond(d, j);
    CHECK(revalidate(d, w));
    // f = (2 * 1_[1,j], 0), S_A f = (1_[1,j], 1_[1,j]): ratio 1/2.
    CHECK(w.bound == Scalar(Rational(1, 2)));
    // L_{2j} >= ||S_{2j}|| = ||identity on the span|| = 1.
    CHECK(w.bound < Scalar(1));
  }
}

TEST_CASE("exact L_m on the reduced diamond meets the witness") {
  const std::size_t n = 6;
  const Basis d = diamond(canonical_basis(NormSpec::sup(n)), canonical_basis(NormSpec::lp(1, n)));
  const auto l = L_table(d, 6, exact_opts());
  for (std::size_t j = 1; j <= 3; ++j) {
    REQUIRE(l[2 * j - 1].flag == Certification::CertifiedExact);
    CHECK(l[2 * j - 1].value >= paper_witness_diamond(d, j).bound);
  }
}

TEST_CASE("block witness") {
  const auto bc3 = block_construction(canonical_basis(NormSpec::sup(14)));
  const auto w3 = paper_witness_block(bc3.conditional, 3);
  CHECK(revalidate(bc3.conditional, w3));
  CHECK(w3.m == 14);
  CHECK(w3.subset == std::vector<std::size_t>{6, 8, 10, 12});
  CHECK(w3.bound >= Scalar(Rational(17, 32)));

  // Direct evaluation: f and S_A f from the basis columns.
  RationalVector f(14, Rational(0)), proj(14, Rational(0));
  for (std::size_t n = 6; n < 14; ++n) {
    const auto z = bc3.conditional.vector(n);
    for (std::size_t i = 0; i < 14; ++i) {
      f[i] += z[i];
      if (n % 2 == 0) proj[i] += z[i];
    }
  }
  auto sup = [](const RationalVector& v) {
    Rational s = 0;
    for (const auto& x : v) s = std::max(s, Rational(abs(x)));
    return s;
  };
  CHECK(w3.bound.exact() == Rational(sup(proj) / sup(f)));

  const auto w1 = paper_witness_block(bc3.conditional, 1);
  CHECK(w1.subset == std::vector<std::size_t>{0});
  CHECK(w1.m == 2);
  CHECK(revalidate(bc3.conditional, w1));

  const auto bc4 = block_construction(canonical_basis(NormSpec::sup(30)));
  const auto w4 = paper_witness_block(bc4.conditional, 4);
  CHECK(revalidate(bc4.conditional, w4));
  CHECK(w4.bound > w3.bound);
  CHECK_THROWS_AS(paper_witness_block(bc3.conditional, 4), InvalidArgument);
  CHECK_THROWS_AS(paper_witness_block(bc3.conditional, 0), InvalidArgument);
}

TEST_CASE("restricting a norm to coordinates") {
  CHECK(restrict_space(NormSpec::sup(5), {0, 3}) == NormSpec::sup(2));
  CHECK(restrict_space(NormSpec::lp(Rational(3, 2), 5), {1, 2, 4}) == NormSpec::lp(Rational(3, 2), 3));
  CHECK(restrict_space(NormSpec::v1(5), {1, 2, 3}) == NormSpec::v1(3));
  CHECK_FALSE(restrict_space(NormSpec::v1(5), {1, 3}).has_value());
  const NormSpec sum = NormSpec::direct_sum_max(NormSpec::sup(3), NormSpec::lp(1, 3));
  CHECK(restrict_space(sum, {0, 4}) == NormSpec::direct_sum_max(NormSpec::sup(1), NormSpec::lp(1, 1)));
  CHECK(restrict_space(sum, {3, 5}) == NormSpec::lp(1, 2));
  CHECK_THROWS_AS(restrict_space(NormSpec::sup(3), {2, 1}), InvalidArgument);

  // The restricted norm agrees with the ambient norm on supported vectors.
  std::mt19937_64 rng(5);
  const auto r = *restrict_space(sum, {0, 2, 3, 4});
  for (int t = 0; t < 50; ++t) {
    const auto small = oracle::random_rational_vector(rng, 4);
    RationalVector big(6, Rational(0));
    big[0] = small[0];
    big[2] = small[1];
    big[3] = small[2];
    big[4] = small[3];
    CHECK(norm(small, r).exact() == norm(big, sum).exact());
  }
}

TEST_CASE("certificates are checked structurally") {
  const Basis b = summing_basis(NormSpec::sup(4));
  RationalVector f = {1, -1, 1, 0};
  auto c = make_certificate(b, Quantity::K, 1, f, {1});
  CHECK(revalidate(b, c));
  CHECK(c.bound.exact() == 2);
  auto too_many = make_certificate(b, Quantity::K, 1, f, {0, 1});
  CHECK_FALSE(revalidate(b, too_many));
  // f = 2 s_1 - 2 s_2 + s_3 needs three coefficients, so L_2 fails.
  auto l = make_certificate(b, Quantity::L, 2, f, {0});
  CHECK_FALSE(revalidate(b, l));
  auto l3 = make_certificate(b, Quantity::L, 3, f, {1});
  CHECK(revalidate(b, l3));
  auto tampered = c;
  tampered.bound = Scalar(3);
  CHECK_FALSE(revalidate(b, tampered));
}

TEST_CASE("growth fits on synthetic data") {
  std::vector<std::pair<std::size_t, double>> linear, logarithmic, polylog;
  for (std::size_t m = 2; m <= 12; ++m) {
    const double lm = std::log(static_cast<double>(m));
    linear.emplace_back(m, static_cast<double>(m));
    logarithmic.emplace_back(m, lm);
    polylog.emplace_back(m, 3 * lm * lm);
  }
  const auto p = growth_fit(linear, GrowthModel::Power);
  CHECK(p.alpha == doctest::Approx(1).epsilon(1e-12));
  CHECK(p.a == doctest::Approx(1).epsilon(1e-12));
  CHECK(p.r2 == doctest::Approx(1).epsilon(1e-12));
  CHECK(p.m_lo == 2);
  CHECK(p.m_hi == 12);
  CHECK(p.points == 11);

  const auto l = growth_fit(logarithmic, GrowthModel::Log);
  CHECK(l.a == doctest::Approx(1).epsilon(1e-12));
  CHECK(l.r2 == doctest::Approx(1).epsilon(1e-12));

  const auto pl = growth_fit(polylog, GrowthModel::PolyLog);
  CHECK(pl.alpha == doctest::Approx(2).epsilon(1e-12));
  CHECK(pl.a == doctest::Approx(3).epsilon(1e-12));

  for (const auto& data : {linear, logarithmic})
    for (auto model : {GrowthModel::Power, GrowthModel::PolyLog, GrowthModel::Log}) {
      const auto g = growth_fit(data, model);
      CHECK(std::isfinite(g.alpha));
      CHECK(g.r2 >= 0);
      CHECK(g.r2 <= 1);
    }

  CHECK_THROWS_AS(growth_fit({{2, 1.0}, {3, 2.0}, {4, 3.0}}, GrowthModel::Power), InvalidArgument);
  CHECK_THROWS_AS(growth_fit({{2, 1.0}, {3, 0.0}, {4, 3.0}, {5, 4.0}}, GrowthModel::Power),
                  InvalidArgument);
  CHECK_THROWS_AS(growth_fit({{1, 1.0}, {3, 1.0}, {4, 3.0}, {5, 4.0}}, GrowthModel::Power),
                  InvalidArgument);
}

TEST_CASE("summing basis growth is linear before saturation") {
  const Basis b = summing_basis(NormSpec::sup(10));
  const auto k = k_table(b, 10, exact_opts());
  const std::size_t sat = saturation_point(k);
  CHECK(sat >= 5);
  const auto fit = growth_fit(k, GrowthModel::Power, 2, sat);
  CHECK(fit.alpha >= 0.9);
  CHECK(fit.r2 >= 0.98);
}

TEST_CASE("range errors") {
  const Basis b = canonical_basis(NormSpec::sup(4));
  CHECK_THROWS_AS(k_m(b, 0), InvalidArgument);
  CHECK_THROWS_AS(k_m(b, 5), InvalidArgument);
  CHECK_THROWS_AS(L_m(b, 0), InvalidArgument);
  CHECK_THROWS_AS(L_table(b, 5), InvalidArgument);
}

TEST_CASE("report csv and witness files") {
  const Basis b = summing_basis(NormSpec::sup(4));
  const auto k = k_table(b, 2);
  std::vector<ReportRow> rows = {
      {"summing", 1, Quantity::K, k[0].value, k[0].flag, "w_k_1.json"},
      {"summing", 2, Quantity::L, Scalar(Rational(3, 2)), Certification::WitnessLowerBound, ""},
      {"summing", 3, Quantity::Gamma, Scalar(0.1), Certification::HeuristicLowerBound, ""},
  };
  CHECK(report_csv(rows) ==
        "basis_id,m,quantity,value,value_exact,flag,witness_file\n"
        "summing,1,k,2,2,certified-exact,w_k_1.json\n"
        "summing,2,L,1.5,3/2,witness-lower-bound,\n"
        "summing,3,Gamma,0.1,,heuristic-lower-bound,\n");

  const auto text = witness_to_text(k[1].witness);
  const auto j = nlohmann::json::parse(text);
  CHECK(j["quantity"] == "k");
  CHECK(j["m"] == 2);
  CHECK(j["bound"]["exact"] == k[1].value.exact_text());
  std::vector<std::size_t> subset = j["subset"];
  REQUIRE(subset.size() == k[1].witness.subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i) CHECK(subset[i] == k[1].witness.subset[i] + 1);
  std::vector<std::string> f = j["f"];
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(parse_rational(f[i]) == k[1].witness.f[i]);
}
