#pragma once

#include "mmlr/matrix.hpp"
#include "mmlr/schatten.hpp"
#include "mmlr/sketch.hpp"

namespace mmlr {

// min_X ||A X - B|| with A m x n of full column rank, B m x d.
struct MmlrProblem {
  DenseMatrix a;
  DenseMatrix b;
  double rank_tol;
};

MmlrProblem make_problem(DenseMatrix a, DenseMatrix b, double rank_tol = -1.0);

struct MmlrSolution {
  DenseMatrix x_hat;
  DenseMatrix b_hat;  // A * x_hat
  DenseMatrix r_hat;  // B - b_hat
};

struct SketchedSolution {
  DenseMatrix x_tilde;
  DenseMatrix b_tilde;  // A * x_tilde
  DenseMatrix r_tilde;  // B - b_tilde
  bool rank_preserved;
};

// X_hat = A^dag B via QR and back substitution. The minimizer is the same
// for every Schatten order, so no order is taken here.
MmlrSolution solve_exact(const MmlrProblem& problem);

// X_tilde = (SA)^dag (SB) via the SVD pseudoinverse; works whether or not
// the sketch preserves rank, and reports which case occurred.
SketchedSolution solve_sketched(const MmlrProblem& problem, const SketchOperator& sketch);

// ||x_tilde - x_hat||_p and ||r_tilde - r_hat||_p.
double solution_error(const MmlrSolution& exact, const SketchedSolution& sketched,
                      const SchattenOrder& p);
double residual_error(const MmlrSolution& exact, const SketchedSolution& sketched,
                      const SchattenOrder& p);

}  // namespace mmlr
