#pragma once

#include <vector>

#include "mmlr/matrix.hpp"

namespace mmlr {

// a = q * r with q m x n (orthonormal columns) and r n x n upper
// triangular with nonnegative diagonal.
struct ThinQr {
  DenseMatrix q;
  DenseMatrix r;
};

// a = (q | q_perp) * (r ; 0); q_perp is m x (m - n), empty when m = n.
struct FullQr {
  DenseMatrix q;
  DenseMatrix q_perp;
  DenseMatrix r;
};

// a = u * diag(sigma) * v^T with k = min(rows, cols) columns in u and v,
// sigma sorted nonincreasing. Columns of u and v are orthonormal even
// where sigma vanishes.
struct SvdFactors {
  DenseMatrix u;
  std::vector<double> sigma;
  DenseMatrix v;
};

// a = vectors * diag(values) * vectors^T for symmetric a, values sorted
// nonincreasing.
struct SymEig {
  DenseMatrix vectors;
  std::vector<double> values;
};

// Relative rank threshold when none is supplied: max(rows, cols) * eps.
double default_rank_tol(const DenseMatrix& a);

// Householder QR. Requires rows >= cols and full column rank.
ThinQr thin_qr(const DenseMatrix& a);
FullQr full_qr(const DenseMatrix& a);

// One-sided Jacobi SVD; high relative accuracy for the small dense
// matrices this library works with.
SvdFactors svd(const DenseMatrix& a);
std::vector<double> svd_values(const DenseMatrix& a);

// Moore-Penrose pseudoinverse. Singular values at or below
// rank_tol * sigma_max are treated as zero; rank_tol <= 0 selects the
// per-matrix default.
DenseMatrix pinv(const DenseMatrix& a, double rank_tol = -1.0);

int numerical_rank(const DenseMatrix& a, double rank_tol = -1.0);

// sigma_max / sigma_min over all cols; requires full column rank.
double cond2(const DenseMatrix& a);

// Largest singular value; 0 for an empty matrix.
double operator_norm2(const DenseMatrix& a);

// Cyclic Jacobi eigendecomposition of a symmetric matrix.
SymEig sym_eig(const DenseMatrix& a);

// Solve r * x = y for upper triangular nonsingular r.
DenseMatrix back_substitute(const DenseMatrix& r, const DenseMatrix& y);

}  // namespace mmlr
