#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mmlr/errors.hpp"
#include "mmlr/factor.hpp"
#include "mmlr/matrix.hpp"
#include "mmlr/rng.hpp"
#include "test_util.hpp"

using namespace mmlr;
using testutil::random_matrix;
using testutil::random_orthonormal;
using testutil::random_rank;

namespace {

DenseMatrix diag(std::initializer_list<double> values) {
  const int n = static_cast<int>(values.size());
  DenseMatrix a(n, n);
  int i = 0;
  for (double v : values) a(i, i) = v, ++i;
  return a;
}

double orthonormality_defect(const DenseMatrix& q) {
  return max_abs_diff(multiply_ta(q, q), DenseMatrix::identity(q.cols()));
}

DenseMatrix reconstruct(const SvdFactors& f) {
  DenseMatrix us = f.u;
  for (int j = 0; j < us.cols(); ++j)
    for (int i = 0; i < us.rows(); ++i) us(i, j) *= f.sigma[static_cast<std::size_t>(j)];
  return multiply_tb(us, f.v);
}

}  // namespace

TEST_CASE("thin qr of the identity") {
  ThinQr f = thin_qr(DenseMatrix::identity(4));
  CHECK(max_abs_diff(f.q, DenseMatrix::identity(4)) == 0.0);
  CHECK(max_abs_diff(f.r, DenseMatrix::identity(4)) == 0.0);
}

TEST_CASE("thin qr sign convention makes the diagonal nonnegative") {
  DenseMatrix a = diag({2.0, -3.0});
  ThinQr f = thin_qr(a);
  CHECK(f.r(0, 0) == doctest::Approx(2.0));
  CHECK(f.r(1, 1) == doctest::Approx(3.0));
  CHECK(f.q(1, 1) == doctest::Approx(-1.0));
  CHECK(max_abs_diff(multiply(f.q, f.r), a) < 1e-14);
}

TEST_CASE("thin qr reconstruction and orthonormality") {
  Rng rng(21);
  for (auto [m, n] : {std::pair{5, 3}, std::pair{40, 40}, std::pair{300, 60}}) {
    DenseMatrix a = random_matrix(rng, m, n);
    ThinQr f = thin_qr(a);
    CHECK(f.q.rows() == m);
    CHECK(f.q.cols() == n);
    CHECK(orthonormality_defect(f.q) < 1e-13);
    CHECK(max_abs_diff(multiply(f.q, f.r), a) < 1e-12 * (1.0 + max_abs(a)));
    for (int i = 0; i < n; ++i) {
      CHECK(f.r(i, i) >= 0.0);
      for (int j = 0; j < i; ++j) CHECK(f.r(i, j) == 0.0);
    }
  }
}

TEST_CASE("full qr completes an orthogonal basis") {
  Rng rng(22);
  DenseMatrix a = random_matrix(rng, 9, 4);
  FullQr f = full_qr(a);
  CHECK(f.q_perp.cols() == 5);
  DenseMatrix full = hstack(f.q, f.q_perp);
  CHECK(orthonormality_defect(full) < 1e-13);
  CHECK(max_abs(multiply_ta(f.q_perp, a)) < 1e-13 * (1.0 + max_abs(a)));
  CHECK(max_abs_diff(multiply(f.q, f.r), a) < 1e-13 * (1.0 + max_abs(a)));
}

TEST_CASE("full qr of a square matrix has an empty q_perp") {
  Rng rng(23);
  DenseMatrix a = random_matrix(rng, 5, 5);
  FullQr f = full_qr(a);
  CHECK(f.q_perp.rows() == 5);
  CHECK(f.q_perp.cols() == 0);
}

TEST_CASE("qr input validation") {
  Rng rng(24);
  CHECK_THROWS_AS(thin_qr(random_matrix(rng, 3, 5)), DimensionError);
  DenseMatrix a = random_matrix(rng, 6, 2);
  DenseMatrix dup = hstack(a, a);
  CHECK_THROWS_AS(thin_qr(dup), RankDeficient);
  CHECK_THROWS_AS(full_qr(dup), RankDeficient);
}

TEST_CASE("svd reconstruction, orthonormality, ordering") {
  Rng rng(31);
  for (auto [m, n] : {std::pair{6, 6}, std::pair{12, 5}, std::pair{5, 12}, std::pair{80, 30}}) {
    DenseMatrix a = random_matrix(rng, m, n);
    SvdFactors f = svd(a);
    const int k = std::min(m, n);
    CHECK(f.u.cols() == k);
    CHECK(f.v.cols() == k);
    CHECK(static_cast<int>(f.sigma.size()) == k);
    CHECK(orthonormality_defect(f.u) < 1e-13);
    CHECK(orthonormality_defect(f.v) < 1e-13);
    for (int i = 1; i < k; ++i)
      CHECK(f.sigma[static_cast<std::size_t>(i - 1)] >= f.sigma[static_cast<std::size_t>(i)]);
    CHECK(max_abs_diff(reconstruct(f), a) < 1e-12 * (1.0 + max_abs(a)));
  }
}

TEST_CASE("svd of a known diagonal") {
  std::vector<double> s = svd_values(diag({3.0, -4.0}));
  CHECK(s[0] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(s[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("svd of the sampled basis from the worked sketch") {
  DenseMatrix sq = DenseMatrix::from_rows(
      {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 1.0, 0.0}});
  std::vector<double> s = svd_values(sq);
  CHECK(s[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(s[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s[2] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("svd handles rank deficiency with an orthonormal completion") {
  Rng rng(32);
  DenseMatrix a = random_rank(rng, 7, 7, 2);
  SvdFactors f = svd(a);
  CHECK(orthonormality_defect(f.u) < 1e-12);
  CHECK(orthonormality_defect(f.v) < 1e-12);
  CHECK(f.sigma[2] < 1e-12 * f.sigma[0]);
  CHECK(max_abs_diff(reconstruct(f), a) < 1e-12 * (1.0 + max_abs(a)));

  SvdFactors z = svd(DenseMatrix(3, 3));
  CHECK(z.sigma[0] == 0.0);
  CHECK(orthonormality_defect(z.u) == 0.0);
}

TEST_CASE("pinv satisfies the penrose conditions") {
  Rng rng(33);
  for (int trial = 0; trial < 8; ++trial) {
    DenseMatrix a = trial % 2 == 0 ? random_matrix(rng, 9, 5) : random_rank(rng, 8, 6, 3);
    DenseMatrix x = pinv(a);
    const double scale = 1.0 + max_abs(a) + max_abs(x);
    CHECK(max_abs_diff(multiply(multiply(a, x), a), a) < 1e-10 * scale);
    CHECK(max_abs_diff(multiply(multiply(x, a), x), x) < 1e-10 * scale);
    DenseMatrix ax = multiply(a, x);
    DenseMatrix xa = multiply(x, a);
    CHECK(max_abs_diff(ax, transpose(ax)) < 1e-10 * scale);
    CHECK(max_abs_diff(xa, transpose(xa)) < 1e-10 * scale);
  }
}

TEST_CASE("pinv of a diagonal inverts the nonzero part") {
  DenseMatrix x = pinv(diag({2.0, 0.0}));
  CHECK(x(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(x(1, 1) == 0.0);
}

TEST_CASE("pinv of orthonormal columns is the transpose") {
  Rng rng(34);
  DenseMatrix q = random_orthonormal(rng, 10, 4);
  CHECK(max_abs_diff(pinv(q), transpose(q)) < 1e-13);
}

TEST_CASE("numerical rank") {
  Rng rng(35);
  CHECK(numerical_rank(random_matrix(rng, 10, 4)) == 4);
  CHECK(numerical_rank(random_rank(rng, 10, 6, 3)) == 3);
  CHECK(numerical_rank(DenseMatrix(5, 5)) == 0);
  CHECK(numerical_rank(DenseMatrix(0, 4)) == 0);
  DenseMatrix a = diag({1.0, 1e-3});
  CHECK(numerical_rank(a) == 2);
  CHECK(numerical_rank(a, 1e-2) == 1);
}

TEST_CASE("cond2") {
  Rng rng(36);
  CHECK(cond2(diag({10.0, 2.0})) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(cond2(random_orthonormal(rng, 12, 5)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(cond2(random_rank(rng, 6, 4, 2)), RankDeficient);
}

TEST_CASE("operator norm") {
  CHECK(operator_norm2(diag({3.0, -7.0})) == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(operator_norm2(DenseMatrix(4, 0)) == 0.0);
}

TEST_CASE("sym_eig on a known matrix") {
  DenseMatrix a = DenseMatrix::from_rows({{2.0, 1.0}, {1.0, 2.0}});
  SymEig e = sym_eig(a);
  CHECK(e.values[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));
  DenseMatrix vt = transpose(e.vectors);
  DenseMatrix lv = e.vectors;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) lv(i, j) *= e.values[static_cast<std::size_t>(j)];
  CHECK(max_abs_diff(multiply(lv, vt), a) < 1e-13);
}

TEST_CASE("sym_eig reconstructs random symmetric matrices") {
  Rng rng(37);
  DenseMatrix g = random_matrix(rng, 9, 9);
  DenseMatrix a = add(g, transpose(g));
  SymEig e = sym_eig(a);
  DenseMatrix lv = e.vectors;
  for (int j = 0; j < 9; ++j)
    for (int i = 0; i < 9; ++i) lv(i, j) *= e.values[static_cast<std::size_t>(j)];
  CHECK(max_abs_diff(multiply_tb(lv, e.vectors), a) < 1e-12 * (1.0 + max_abs(a)));
  DenseMatrix vtv = multiply_ta(e.vectors, e.vectors);
  CHECK(max_abs_diff(vtv, DenseMatrix::identity(9)) < 1e-13);
}

TEST_CASE("back substitution") {
  DenseMatrix r = DenseMatrix::from_rows({{2.0, 1.0}, {0.0, 4.0}});
  DenseMatrix y = DenseMatrix::from_rows({{5.0}, {8.0}});
  DenseMatrix x = back_substitute(r, y);
  CHECK(x(1, 0) == doctest::Approx(2.0));
  CHECK(x(0, 0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(back_substitute(diag({1.0, 0.0}), y), RankDeficient);
  CHECK_THROWS_AS(back_substitute(r, DenseMatrix(3, 1)), DimensionError);
}

TEST_CASE("default rank tolerance scales with the larger dimension") {
  DenseMatrix a(100, 10);
  CHECK(default_rank_tol(a) ==
        doctest::Approx(100.0 * std::numeric_limits<double>::epsilon()));
}
