#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "vmc/rng.hpp"
#include "vmc/sampling.hpp"
#include "vmc/synth.hpp"

using vmc::Matrix;

namespace {

// Sparse polynomial in `nv` variables: exponent vector -> coefficient.
using Poly = std::map<std::vector<int>, double>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  return out;
}

// Generic feature-space rank of the image of a random polynomial map
// R^l -> R^n of degree map_degree, lifted to degree d: the rank of the
// coefficient matrix of the composed polynomials {x^beta o map}.
int symbolic_composed_rank(int n, int l, int map_degree, int d, std::uint64_t seed) {
  vmc::Rng rng(seed);
  const auto map_basis = vmc::monomial_basis(l, map_degree);
  std::vector<Poly> coords(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    for (const auto& mi : map_basis.entries)
      coords[static_cast<std::size_t>(v)][mi.exponents] = rng.normal();

  const auto lift_basis = vmc::monomial_basis(n, d);
  const auto target_basis = vmc::monomial_basis(l, map_degree * d);
  std::map<std::vector<int>, int> column_of;
  for (std::size_t i = 0; i < target_basis.entries.size(); ++i)
    column_of[target_basis.entries[i].exponents] = static_cast<int>(i);

  Matrix coeffs = Matrix::Zero(lift_basis.size(), target_basis.size());
  for (std::size_t row = 0; row < lift_basis.entries.size(); ++row) {
    Poly prod;
    prod[std::vector<int>(static_cast<std::size_t>(l), 0)] = 1.0;
    const auto& beta = lift_basis.entries[row].exponents;
    for (int v = 0; v < n; ++v)
      for (int rep = 0; rep < beta[static_cast<std::size_t>(v)]; ++rep)
        prod = poly_mul(prod, coords[static_cast<std::size_t>(v)]);
    for (const auto& [e, c] : prod)
      coeffs(static_cast<Eigen::Index>(row), column_of.at(e)) = c;
  }
  Eigen::BDCSVD<Matrix> svd(coeffs);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * sv(0)) ++rank;
  return rank;
}

int ordinary_rank(const Matrix& X, double rel_tol = 1e-8) {
  Eigen::BDCSVD<Matrix> svd(X);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++rank;
  return rank;
}

bool bitwise_equal(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) return false;
  return std::memcmp(A.data(), B.data(),
                     sizeof(double) * static_cast<std::size_t>(A.size())) == 0;
}

}  // namespace

TEST_CASE("gen_uos shapes, labels, reproducibility") {
  vmc::UosSpec spec;
  spec.n = 15;
  spec.k = 3;
  spec.r = 3;
  spec.points_per_subspace = 100;
  const auto a = vmc::gen_uos(spec, 99);
  const auto b = vmc::gen_uos(spec, 99);
  const auto c = vmc::gen_uos(spec, 100);
  CHECK(a.X.rows() == 15);
  CHECK(a.X.cols() == 300);
  CHECK(a.labels.size() == 300);
  CHECK(a.labels.front() == 0);
  CHECK(a.labels.back() == 2);
  CHECK(bitwise_equal(a.X, b.X));
  CHECK_FALSE(bitwise_equal(a.X, c.X));

  const auto report = vmc::lifted_rank(a.X, 2);
  CHECK(report.numerical_rank <= 30);  // k*C(r+d,d)
}

TEST_CASE("gen_uos k=1 gives an exactly rank-r matrix") {
  vmc::UosSpec spec;
  spec.n = 12;
  spec.k = 1;
  spec.r = 4;
  spec.points_per_subspace = 50;
  const auto data = vmc::gen_uos(spec, 3);
  CHECK(ordinary_rank(data.X) == 4);
}

TEST_CASE("gen_uos orthogonal option hits the shared-constant rank") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    vmc::UosSpec spec;
    spec.n = 10;
    spec.k = 2;
    spec.r = 2;
    spec.points_per_subspace = 80;
    spec.orthogonal = true;
    const auto data = vmc::gen_uos(spec, seed);
    for (int d = 1; d <= 3; ++d) {
      const auto report = vmc::lifted_rank(data.X, d);
      CHECK(report.numerical_rank == 2 * vmc::subspace_rank_bound(2, d) - 1);
    }
  }
}

TEST_CASE("gen_uos Prop 2 ceiling over d") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    vmc::UosSpec spec;
    spec.n = 15;
    spec.k = 3;
    spec.r = 3;
    spec.points_per_subspace = 100;
    const auto data = vmc::gen_uos(spec, vmc::derive_seed(4242, seed));
    for (int d = 1; d <= 3; ++d)
      CHECK(vmc::lifted_rank(data.X, d).numerical_rank <=
            vmc::uos_rank_bound(3, 3, d));
  }
}

TEST_CASE("gen_uos validation") {
  vmc::UosSpec spec;
  spec.n = 5;
  spec.k = 2;
  spec.r = 5;  // r must be < n
  spec.points_per_subspace = 3;
  CHECK_THROWS_AS(vmc::gen_uos(spec, 0), std::invalid_argument);
  spec.r = 3;
  spec.orthogonal = true;  // k*r = 6 > n
  CHECK_THROWS_AS(vmc::gen_uos(spec, 0), std::invalid_argument);
}

TEST_CASE("gen_parametric: line data has rank d+1") {
  vmc::ParametricSpec spec;
  spec.n = 20;
  spec.latent_dim = 1;
  spec.map_degree = 1;
  spec.s = 300;
  const auto data = vmc::gen_parametric(spec, 17);
  CHECK(data.X.rows() == 20);
  CHECK(data.X.cols() == 300);
  for (int d = 1; d <= 3; ++d)
    CHECK(vmc::lifted_rank(data.X, d).numerical_rank == d + 1);

  const auto again = vmc::gen_parametric(spec, 17);
  CHECK(bitwise_equal(data.X, again.X));
}

TEST_CASE("gen_parametric latent_dim validation") {
  vmc::ParametricSpec spec;
  spec.n = 10;
  spec.latent_dim = 0;
  spec.s = 20;
  CHECK_THROWS_AS(vmc::gen_parametric(spec, 0), std::invalid_argument);
  spec.latent_dim = 4;
  CHECK_THROWS_AS(vmc::gen_parametric(spec, 0), std::invalid_argument);
}

TEST_CASE("gen_parametric rank matches the symbolic composition oracle") {
  // Surface (l=2) mapped with degree 2, lifted at d=2: composed polynomials
  // span a 15-dimensional space for a generic map (frozen from the oracle).
  const int oracle_rank = symbolic_composed_rank(20, 2, 2, 2, 5151);
  CHECK(oracle_rank == 15);  // C(l + d*map_degree, l)

  vmc::ParametricSpec spec;
  spec.n = 20;
  spec.latent_dim = 2;
  spec.map_degree = 2;
  spec.s = 300;
  const auto data = vmc::gen_parametric(spec, 5151);
  const auto report = vmc::lifted_rank(data.X, 2);
  CHECK(report.numerical_rank == oracle_rank);
  CHECK(report.numerical_rank <=
        vmc::binomial_checked(2 * spec.map_degree + 2, 2));
}

TEST_CASE("gen_conic presets") {
  const auto circle = vmc::gen_conic(vmc::ConicSpec::circle(20), 8);
  CHECK(circle.X.cols() == 20);
  for (int i = 0; i < 20; ++i) {
    const double x = circle.X(0, i), y = circle.X(1, i);
    CHECK(std::abs(x * x + y * y - 1.0) <= 1e-14);
  }
  CHECK(vmc::lifted_rank(circle.X, 2).numerical_rank == 5);

  const auto parabola = vmc::gen_conic(vmc::ConicSpec::parabola(20), 9);
  for (int i = 0; i < 20; ++i)
    CHECK(parabola.X(1, i) - parabola.X(0, i) * parabola.X(0, i) == 0.0);

  const auto again = vmc::gen_conic(vmc::ConicSpec::circle(20), 8);
  CHECK(bitwise_equal(circle.X, again.X));
}

TEST_CASE("gen_conic rejects degenerate and empty curves") {
  vmc::ConicSpec zero;
  zero.s = 5;
  CHECK_THROWS_AS(vmc::gen_conic(zero, 1), std::invalid_argument);

  vmc::ConicSpec empty;           // x^2 + y^2 + 1 = 0 has no real points
  empty.coeffs = {1, 0, 0, 1, 0, 1};
  empty.s = 5;
  CHECK_THROWS_AS(vmc::gen_conic(empty, 1), std::domain_error);
}

TEST_CASE("sample_mask counts and determinism") {
  const auto mask = vmc::sample_mask(15, 300, 8, 31337);
  CHECK(mask.size() == 2400);
  CHECK(mask.per_column_count == 8);
  for (const auto& col : mask.column_rows) {
    CHECK(col.size() == 8);
    CHECK(std::is_sorted(col.begin(), col.end()));
    CHECK(std::adjacent_find(col.begin(), col.end()) == col.end());
    CHECK(col.front() >= 0);
    CHECK(col.back() < 15);
  }
  const auto again = vmc::sample_mask(15, 300, 8, 31337);
  CHECK(mask.pairs() == again.pairs());

  CHECK(vmc::sample_mask(7, 11, 7, 0).is_full());
  CHECK(vmc::sample_mask(7, 11, 0, 0).size() == 0);
  CHECK_THROWS_AS(vmc::sample_mask(7, 11, 8, 0), std::invalid_argument);
}

TEST_CASE("sample_mask row inclusion is uniform") {
  const int n = 10, m = 3, s = 4, draws = 10000;
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(n, s);
  for (int t = 0; t < draws; ++t) {
    const auto mask = vmc::sample_mask(n, s, m, vmc::derive_seed(2024, static_cast<std::uint64_t>(t)));
    for (int j = 0; j < s; ++j)
      for (int i : mask.column_rows[static_cast<std::size_t>(j)]) counts(i, j)++;
  }
  const double p = static_cast<double>(m) / n;
  const double se = std::sqrt(p * (1 - p) / draws);
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < n; ++i) {
      const double freq = static_cast<double>(counts(i, j)) / draws;
      CHECK(std::abs(freq - p) <= 5.0 * se);
    }
}

TEST_CASE("apply_mask marks missing entries and round-trips") {
  vmc::Rng rng(5);
  Matrix X(4, 6);
  for (int j = 0; j < 6; ++j)
    for (int i = 0; i < 4; ++i) X(i, j) = rng.normal();

  const auto full = vmc::apply_mask(X, vmc::ObservationMask::full(4, 6));
  CHECK(bitwise_equal(full.values, X));

  const auto empty = vmc::apply_mask(X, vmc::sample_mask(4, 6, 0, 0));
  CHECK(empty.values.array().isNaN().all());

  const auto mask = vmc::sample_mask(4, 6, 2, 77);
  const auto obs = vmc::apply_mask(X, mask);
  for (int j = 0; j < 6; ++j)
    for (int i = 0; i < 4; ++i) {
      if (mask.contains(i, j)) {
        CHECK(obs.values(i, j) == X(i, j));
      } else {
        CHECK(std::isnan(obs.values(i, j)));
      }
    }

  // projection idempotence through zero-fill
  const auto refilled = vmc::apply_mask(obs.zero_filled(), mask);
  for (const auto& [i, j] : mask.pairs()) CHECK(refilled.values(i, j) == X(i, j));

  vmc::ObservationMask bad;
  bad.rows = 3;
  bad.cols = 6;
  bad.column_rows.resize(6);
  CHECK_THROWS_AS(vmc::apply_mask(X, bad), std::invalid_argument);
  CHECK_THROWS_AS(vmc::ObservationMask::from_pairs(2, 2, {{2, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(vmc::ObservationMask::from_pairs(2, 2, {{0, 0}, {0, 0}}),
                  std::invalid_argument);
}

TEST_CASE("derive_seed is collision-free over a wide index range") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 20000; ++i) seen.insert(vmc::derive_seed(123456789, i));
  CHECK(seen.size() == 20000);
  CHECK(vmc::derive_seed(1, 0) != vmc::derive_seed(2, 0));
}
