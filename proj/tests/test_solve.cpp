#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mmlr/errors.hpp"
#include "mmlr/factor.hpp"
#include "mmlr/matrix.hpp"
#include "mmlr/rng.hpp"
#include "mmlr/schatten.hpp"
#include "mmlr/sketch.hpp"
#include "mmlr/solve.hpp"
#include "test_util.hpp"

using namespace mmlr;
using testutil::random_matrix;

namespace {

const SchattenOrder kOrders[] = {SchattenOrder::finite(1.0), SchattenOrder::finite(2.0),
                                 SchattenOrder::infinity()};

}  // namespace

TEST_CASE("scalar least squares oracle") {
  DenseMatrix a = DenseMatrix::from_rows({{1.0}, {1.0}});
  DenseMatrix b = DenseMatrix::from_rows({{0.0}, {2.0}});
  MmlrSolution sol = solve_exact(make_problem(a, b));
  CHECK(sol.x_hat(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sol.r_hat(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(sol.r_hat(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(max_abs_diff(add(sol.b_hat, sol.r_hat), b) < 1e-15);
}

TEST_CASE("exact solution satisfies the normal equations") {
  Rng rng(100);
  for (int t = 0; t < 6; ++t) {
    DenseMatrix a = random_matrix(rng, 14, 5);
    DenseMatrix b = random_matrix(rng, 14, 3);
    MmlrSolution sol = solve_exact(make_problem(a, b));
    DenseMatrix atr = multiply_ta(a, sol.r_hat);
    CHECK(max_abs(atr) < 1e-12 * (1.0 + max_abs(a) * max_abs(b)));
  }
}

TEST_CASE("exact solution matches the pseudoinverse route") {
  Rng rng(101);
  DenseMatrix a = random_matrix(rng, 20, 6);
  DenseMatrix b = random_matrix(rng, 20, 4);
  MmlrSolution sol = solve_exact(make_problem(a, b));
  DenseMatrix via_pinv = multiply(pinv(a), b);
  CHECK(max_abs_diff(sol.x_hat, via_pinv) < 1e-12 * (1.0 + max_abs(via_pinv)));
}

TEST_CASE("exact solution minimizes every Schatten norm of the residual") {
  Rng rng(102);
  DenseMatrix a = random_matrix(rng, 12, 4);
  DenseMatrix b = random_matrix(rng, 12, 2);
  MmlrProblem problem = make_problem(a, b);
  MmlrSolution sol = solve_exact(problem);
  for (const SchattenOrder& p : kOrders) {
    const double base = schatten_norm(sol.r_hat, p);
    for (int t = 0; t < 40; ++t) {
      const double scale_factor = (t % 3 == 0) ? 1e-3 : (t % 3 == 1 ? 1.0 : 1e3);
      DenseMatrix delta = scale(random_matrix(rng, 4, 2), scale_factor);
      DenseMatrix r = subtract(b, multiply(a, add(sol.x_hat, delta)));
      CHECK(schatten_norm(r, p) >= base - 1e-10 * (1.0 + base));
    }
  }
}

TEST_CASE("sketched solution minimizes the sketched residual") {
  Rng rng(103);
  DenseMatrix a = random_matrix(rng, 16, 4);
  DenseMatrix b = random_matrix(rng, 16, 2);
  MmlrProblem problem = make_problem(a, b);
  SketchOperator s = SketchOperator::gaussian(8, 16, 4, 77);
  SketchedSolution sk = solve_sketched(problem, s);
  REQUIRE(sk.rank_preserved);
  DenseMatrix sa = apply(s, a);
  DenseMatrix sb = apply(s, b);
  const SchattenOrder p2 = SchattenOrder::finite(2.0);
  const double base = schatten_norm(subtract(sb, multiply(sa, sk.x_tilde)), p2);
  for (int t = 0; t < 60; ++t) {
    DenseMatrix delta = scale(random_matrix(rng, 4, 2), (t % 2 == 0) ? 1e-2 : 1.0);
    const double other = schatten_norm(subtract(sb, multiply(sa, add(sk.x_tilde, delta))), p2);
    CHECK(other >= base - 1e-10 * (1.0 + base));
  }
}

TEST_CASE("identity sketch reproduces the exact solution") {
  Rng rng(104);
  DenseMatrix a = random_matrix(rng, 10, 3);
  DenseMatrix b = random_matrix(rng, 10, 2);
  MmlrProblem problem = make_problem(a, b);
  MmlrSolution sol = solve_exact(problem);
  SketchOperator s = SketchOperator::from_matrix(DenseMatrix::identity(10), 3);
  SketchedSolution sk = solve_sketched(problem, s);
  CHECK(sk.rank_preserved);
  CHECK(max_abs_diff(sk.x_tilde, sol.x_hat) < 1e-12 * (1.0 + max_abs(sol.x_hat)));
  CHECK(max_abs_diff(sk.r_tilde, sol.r_hat) < 1e-12 * (1.0 + max_abs(sol.r_hat)));
}

TEST_CASE("full sampling without replacement reproduces the exact solution") {
  Rng rng(105);
  DenseMatrix a = random_matrix(rng, 9, 4);
  DenseMatrix b = random_matrix(rng, 9, 3);
  MmlrProblem problem = make_problem(a, b);
  MmlrSolution sol = solve_exact(problem);
  SketchOperator s = SketchOperator::sample_without_replacement(9, 9, 4, 5);
  SketchedSolution sk = solve_sketched(problem, s);
  CHECK(sk.rank_preserved);
  CHECK(max_abs_diff(sk.x_tilde, sol.x_hat) < 1e-12 * (1.0 + max_abs(sol.x_hat)));
  for (const SchattenOrder& p : kOrders) {
    CHECK(solution_error(sol, sk, p) < 1e-12 * (1.0 + max_abs(sol.x_hat)));
    CHECK(residual_error(sol, sk, p) < 1e-12 * (1.0 + max_abs(sol.r_hat)));
  }
}

TEST_CASE("orthonormal design with a structured sketch") {
  DenseMatrix q(6, 3);
  q(0, 0) = 1.0;
  q(1, 1) = 1.0;
  q(2, 2) = 1.0;
  DenseMatrix s(4, 6);
  s(0, 0) = 1.0;
  s(1, 1) = 1.0;
  s(2, 2) = 1.0;
  s(2, 5) = 1.0;
  s(3, 1) = 1.0;
  s(3, 4) = 1.0;
  DenseMatrix b(6, 1);
  b(4, 0) = 1.0;

  MmlrProblem problem = make_problem(q, b);
  MmlrSolution sol = solve_exact(problem);
  CHECK(max_abs(sol.x_hat) < 1e-15);
  CHECK(max_abs_diff(sol.r_hat, b) < 1e-15);

  SketchedSolution sk = solve_sketched(problem, SketchOperator::from_matrix(s, 3));
  REQUIRE(sk.rank_preserved);
  CHECK(sk.x_tilde(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(sk.x_tilde(1, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(sk.x_tilde(2, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(solution_error(sol, sk, SchattenOrder::finite(2.0)) ==
        doctest::Approx(0.5).epsilon(1e-13));
  CHECK(residual_error(sol, sk, SchattenOrder::finite(2.0)) ==
        doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("rank-losing sketch is flagged but still yields a finite solution") {
  Rng rng(106);
  DenseMatrix a = random_matrix(rng, 8, 3);
  DenseMatrix b = random_matrix(rng, 8, 2);
  MmlrProblem problem = make_problem(a, b);
  DenseMatrix s(4, 8);
  for (int k = 0; k < 4; ++k) s(k, 0) = 1.0;  // four identical rows: rank(SA) = 1
  SketchedSolution sk = solve_sketched(problem, SketchOperator::from_matrix(s, 3));
  CHECK_FALSE(sk.rank_preserved);
  for (double v : sk.x_tilde.data()) CHECK(std::isfinite(v));
  CHECK(max_abs_diff(add(sk.b_tilde, sk.r_tilde), b) < 1e-14);
}

TEST_CASE("problem validation") {
  Rng rng(107);
  DenseMatrix a = random_matrix(rng, 6, 3);
  CHECK_THROWS_AS(make_problem(a, random_matrix(rng, 5, 2)), DimensionError);
  CHECK_THROWS_AS(make_problem(random_matrix(rng, 2, 3), random_matrix(rng, 2, 1)),
                  DimensionError);
  DenseMatrix dup(6, 2);
  for (int i = 0; i < 6; ++i) {
    dup(i, 0) = static_cast<double>(i);
    dup(i, 1) = 2.0 * static_cast<double>(i);
  }
  CHECK_THROWS_AS(make_problem(dup, DenseMatrix(6, 1)), RankDeficient);
  // A loose explicit relative tolerance rejects a matrix with small trailing values.
  DenseMatrix spread(3, 3);
  spread(0, 0) = 1.0;
  spread(1, 1) = 1e-3;
  spread(2, 2) = 1e-3;
  CHECK_THROWS_AS(make_problem(spread, DenseMatrix(3, 1), 1e-2), RankDeficient);
  CHECK_NOTHROW(make_problem(spread, DenseMatrix(3, 1)));
}
