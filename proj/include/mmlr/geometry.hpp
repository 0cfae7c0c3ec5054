#pragma once

#include <vector>

#include "mmlr/factor.hpp"
#include "mmlr/matrix.hpp"
#include "mmlr/sketch.hpp"

namespace mmlr {

// Orthonormal basis of a subspace, stored column-wise. A matrix with zero
// columns represents the trivial subspace {0} of the ambient space.
struct SubspaceBasis {
  DenseMatrix basis;

  int ambient_dim() const { return basis.rows(); }
  int dim() const { return basis.cols(); }
};

// Orthogonal split of range(S^T) induced by range(A):
//   s1  — directions lying inside range(Q),
//   s0  — directions orthogonal to range(Q) that carry no oblique image,
//   s10 — the remaining (mixed) directions,
//   sq  — s1 ⊕ s10, the part of the sketch space that acts on range(A),
//   z   — the oblique image subspace (zero columns when the sketch loses rank).
struct SubspaceDecomposition {
  SubspaceBasis s1;
  SubspaceBasis s0;
  SubspaceBasis s10;
  SubspaceBasis sq;
  SubspaceBasis z;
  double angle_tol = 0.0;
};

// Principal angles between two subspaces, index-aligned across all four
// arrays. NOTE: angles are sorted NONINCREASING — index 0 is the largest
// principal angle (the quantity the perturbation identities are stated in),
// which is the opposite of the common ascending convention.
struct PrincipalAngleSet {
  std::vector<double> angles;    // in [0, pi/2], nonincreasing
  std::vector<double> cosines;   // cos(angles[k]), nondecreasing
  std::vector<double> sines;     // sin(angles[k]), nonincreasing
  std::vector<double> tangents;  // tan(angles[k]); +infinity at pi/2
};

inline constexpr double default_angle_tol = 1e-8;  // radians

// Orthogonal projector onto range(a) for full-column-rank a, built as QQ^T
// from the thin QR factorization. Throws RankDeficient otherwise.
DenseMatrix orthogonal_projector(const DenseMatrix& a);

// Oblique projector A·pinv(SA)·S. Idempotent for any sketch; its range equals
// range(A) exactly when the sketch preserves rank.
DenseMatrix oblique_projector(const DenseMatrix& a, const SketchOperator& s,
                              double rank_tol = -1.0);

// 2-norm of the projector difference  A·pinv(SA)·S − QQ^T,  evaluated without
// forming either m×m projector: both terms share the left factor Q, so the
// norm equals the largest singular value of the n×m matrix R·pinv(SA)·S − Q^T.
double projector_difference_norm2(const DenseMatrix& a, const SketchOperator& s,
                                  double rank_tol = -1.0);

// The tangent matrix pinv(SQ)·(SQ⊥), an n×(m−n) matrix. Well-defined (via the
// pseudoinverse) whether or not the sketch preserves rank.
DenseMatrix tangent_matrix(const FullQr& fq, const SketchOperator& s,
                           double rank_tol = -1.0);

// Principal angles between the spans of two orthonormal bases. Cosines come
// from the singular values of u^T v; sines from the complementary product
// (I − uu^T)v for small-angle accuracy. The number of angles is
// min(dim u, dim v). Throws EmptySubspace if either dim is 0, DimensionError
// on ambient mismatch.
PrincipalAngleSet principal_angles(const SubspaceBasis& u, const SubspaceBasis& v);

// Orthonormal basis of range(a): left singular vectors whose singular value
// exceeds rank_tol·σ₁ (rank_tol < 0 selects the default relative tolerance).
DenseMatrix orthonormal_range(const DenseMatrix& a, double rank_tol = -1.0);

// True when the sketched design SQ keeps the full column rank of q (an
// orthonormal basis). The smallest singular value of SQ is judged against
// rank_tol times σ₁(S) — the sketch's own scale — because a cutoff relative
// to σ₁(SQ) would misclassify sketches that nearly annihilate range(q).
bool preserves_rank(const SketchOperator& s, const DenseMatrix& q, double rank_tol = -1.0);

// The oblique coefficient matrix Z = pinv(SQ)·S (n×m). Total: defined through
// the pseudoinverse even when rank is lost.
DenseMatrix z_matrix(const SketchOperator& s, const DenseMatrix& q,
                     double rank_tol = -1.0);

// Orthonormal basis of the oblique image subspace Z = range(Z^T), computed as
// Z₀^T where Z₀ = (ZZ^T)^{−1/2}·Z via the symmetric inverse square root
// (ZZ^T = I + TT^T is positive definite). Throws RankNotPreserved when
// rank(SQ) < n.
SubspaceBasis z_subspace(const SketchOperator& s, const FullQr& fq,
                         double rank_tol = -1.0);

// Decompose range(S^T) into s1/s0/s10/sq (see SubspaceDecomposition) using
// principal-angle intersections with threshold angle_tol (radians, in
// (0, π/4)). When the sketch preserves rank, s0 is additionally restricted to
// directions orthogonal to the oblique image subspace, which is what makes
// z ⊆ sq hold; on rank loss s0 is the plain intersection with range(Q)⊥ and
// z is the trivial subspace.
SubspaceDecomposition decompose_sketch_range(const SketchOperator& s, const FullQr& fq,
                                             double angle_tol = default_angle_tol,
                                             double rank_tol = -1.0);

}  // namespace mmlr
