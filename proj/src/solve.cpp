#include "mmlr/solve.hpp"

#include "mmlr/errors.hpp"
#include "mmlr/factor.hpp"
#include "mmlr/geometry.hpp"

namespace mmlr {

MmlrProblem make_problem(DenseMatrix a, DenseMatrix b, double rank_tol) {
  if (a.rows() != b.rows()) {
    throw DimensionError("problem: a " + shape_str(a) + " and b " + shape_str(b) +
                         " row counts differ");
  }
  if (a.cols() < 1 || b.cols() < 1) {
    throw DimensionError("problem: need n >= 1 and d >= 1");
  }
  if (a.rows() < a.cols()) {
    throw DimensionError("problem: need m >= n, got a " + shape_str(a));
  }
  const double tol = rank_tol <= 0.0 ? default_rank_tol(a) : rank_tol;
  if (numerical_rank(a, tol) != a.cols()) {
    throw RankDeficient("problem: a " + shape_str(a) + " is column rank deficient");
  }
  return {std::move(a), std::move(b), tol};
}

MmlrSolution solve_exact(const MmlrProblem& problem) {
  const ThinQr f = thin_qr(problem.a);
  const DenseMatrix qtb = multiply_ta(f.q, problem.b);
  DenseMatrix x = back_substitute(f.r, qtb);
  DenseMatrix bh = multiply(problem.a, x);
  DenseMatrix rh = subtract(problem.b, bh);
  return {std::move(x), std::move(bh), std::move(rh)};
}

SketchedSolution solve_sketched(const MmlrProblem& problem, const SketchOperator& sketch) {
  const DenseMatrix sa = apply(sketch, problem.a);
  const DenseMatrix sb = apply(sketch, problem.b);
  const bool preserved = preserves_rank(sketch, thin_qr(problem.a).q, problem.rank_tol);
  DenseMatrix x = multiply(pinv(sa, problem.rank_tol), sb);
  DenseMatrix bt = multiply(problem.a, x);
  DenseMatrix rt = subtract(problem.b, bt);
  return {std::move(x), std::move(bt), std::move(rt), preserved};
}

double solution_error(const MmlrSolution& exact, const SketchedSolution& sketched,
                      const SchattenOrder& p) {
  return schatten_norm(subtract(sketched.x_tilde, exact.x_hat), p);
}

double residual_error(const MmlrSolution& exact, const SketchedSolution& sketched,
                      const SchattenOrder& p) {
  return schatten_norm(subtract(sketched.r_tilde, exact.r_hat), p);
}

}  // namespace mmlr
