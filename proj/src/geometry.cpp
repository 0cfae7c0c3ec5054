#include "mmlr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmlr/errors.hpp"

namespace mmlr {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Principal directions of span(basis) whose angle to span(other) is at most
// asin(sin_tol). The SVD of basis^T·other orders candidate directions by
// alignment; each candidate is then accepted by its residual norm against
// span(other), which measures sin(angle) with absolute accuracy — the cosine
// (singular value) cannot resolve angles below ~1e-8 in double precision.
DenseMatrix intersect_directions(const DenseMatrix& basis, const DenseMatrix& other,
                                 double sin_tol) {
  if (basis.cols() == 0 || other.cols() == 0) return DenseMatrix(basis.rows(), 0);
  const SvdFactors f = svd(multiply_ta(basis, other));
  const DenseMatrix cand = multiply(basis, f.u);
  const DenseMatrix resid = subtract(cand, multiply(other, multiply_ta(other, cand)));
  int keep = 0;
  while (keep < cand.cols()) {
    double norm_sq = 0.0;
    for (int i = 0; i < resid.rows(); ++i) norm_sq += resid(i, keep) * resid(i, keep);
    if (std::sqrt(norm_sq) > sin_tol) break;
    ++keep;
  }
  if (keep == 0) return DenseMatrix(basis.rows(), 0);
  DenseMatrix out(cand.rows(), keep);
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < keep; ++j) out(i, j) = cand(i, j);
  return out;
}

// Orthonormal basis of span(basis) ⊖ span(sub), assuming sub has orthonormal
// columns lying inside span(basis). The coordinates basis^T·sub then have
// orthonormal columns, so the complement is basis times the q_perp factor of
// their full QR.
DenseMatrix complement_within(const DenseMatrix& basis, const DenseMatrix& sub) {
  if (sub.cols() == 0) return basis;
  if (sub.cols() >= basis.cols()) return DenseMatrix(basis.rows(), 0);
  const FullQr fq = full_qr(multiply_ta(basis, sub));
  return multiply(basis, fq.q_perp);
}

}  // namespace

DenseMatrix orthogonal_projector(const DenseMatrix& a) {
  const ThinQr qr = thin_qr(a);
  return multiply_tb(qr.q, qr.q);
}

DenseMatrix oblique_projector(const DenseMatrix& a, const SketchOperator& s,
                              double rank_tol) {
  const DenseMatrix sa = apply(s, a);
  return multiply(a, multiply(pinv(sa, rank_tol), s.matrix()));
}

double projector_difference_norm2(const DenseMatrix& a, const SketchOperator& s,
                                  double rank_tol) {
  const ThinQr qr = thin_qr(a);
  const DenseMatrix sa = apply(s, a);
  const DenseMatrix coeff = multiply(pinv(sa, rank_tol), s.matrix());
  const DenseMatrix g = subtract(multiply(qr.r, coeff), transpose(qr.q));
  return operator_norm2(g);
}

DenseMatrix tangent_matrix(const FullQr& fq, const SketchOperator& s, double rank_tol) {
  const DenseMatrix sq = apply(s, fq.q);
  if (fq.q_perp.cols() == 0) return DenseMatrix(fq.q.cols(), 0);
  const DenseMatrix sq_perp = apply(s, fq.q_perp);
  return multiply(pinv(sq, rank_tol), sq_perp);
}

PrincipalAngleSet principal_angles(const SubspaceBasis& u, const SubspaceBasis& v) {
  if (u.dim() == 0 || v.dim() == 0) {
    throw EmptySubspace("principal_angles: trivial subspace has no angles");
  }
  if (u.ambient_dim() != v.ambient_dim()) {
    throw DimensionError("principal_angles: ambient dimensions differ (" +
                         shape_str(u.basis) + " vs " + shape_str(v.basis) + ")");
  }
  const int q = std::min(u.dim(), v.dim());

  // Cosines: singular values of u^T v, descending. Read ascending so index k
  // pairs with the k-th LARGEST angle.
  const DenseMatrix crossgram = multiply_ta(u.basis, v.basis);
  std::vector<double> cos_desc = svd_values(crossgram);
  for (double& c : cos_desc) c = clamp01(c);

  // Sines: singular values of (I − uu^T)v, descending. When dim(v) > dim(u),
  // the leading dim(v) − q values belong to directions of v with no angle
  // partner in u; drop them.
  const DenseMatrix residual =
      subtract(v.basis, multiply(u.basis, crossgram));
  std::vector<double> sin_desc = svd_values(residual);
  const int drop = v.dim() - q;
  sin_desc.erase(sin_desc.begin(), sin_desc.begin() + drop);
  for (double& s : sin_desc) s = clamp01(s);

  PrincipalAngleSet out;
  out.angles.reserve(static_cast<std::size_t>(q));
  out.cosines.reserve(static_cast<std::size_t>(q));
  out.sines.reserve(static_cast<std::size_t>(q));
  out.tangents.reserve(static_cast<std::size_t>(q));
  for (int k = 0; k < q; ++k) {
    const double s = sin_desc[static_cast<std::size_t>(k)];
    const double c = cos_desc[static_cast<std::size_t>(q - 1 - k)];
    out.sines.push_back(s);
    out.cosines.push_back(c);
    out.angles.push_back(std::atan2(s, c));
    out.tangents.push_back(c == 0.0 ? std::numeric_limits<double>::infinity() : s / c);
  }
  return out;
}

DenseMatrix orthonormal_range(const DenseMatrix& a, double rank_tol) {
  if (a.rows() == 0 || a.cols() == 0) return DenseMatrix(a.rows(), 0);
  const SvdFactors f = svd(a);
  const double tol = (rank_tol <= 0.0 ? default_rank_tol(a) : rank_tol);
  const double cutoff = f.sigma.empty() ? 0.0 : tol * f.sigma[0];
  int keep = 0;
  while (keep < static_cast<int>(f.sigma.size())) {
    const double s = f.sigma[static_cast<std::size_t>(keep)];
    if (s <= cutoff || s == 0.0) break;
    ++keep;
  }
  DenseMatrix out(a.rows(), keep);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < keep; ++j) out(i, j) = f.u(i, j);
  return out;
}

DenseMatrix z_matrix(const SketchOperator& s, const DenseMatrix& q, double rank_tol) {
  const DenseMatrix sq = apply(s, q);
  return multiply(pinv(sq, rank_tol), s.matrix());
}

bool preserves_rank(const SketchOperator& s, const DenseMatrix& q, double rank_tol) {
  const DenseMatrix sq = apply(s, q);
  if (sq.empty()) return q.cols() == 0;
  const double tol = (rank_tol <= 0.0 ? default_rank_tol(sq) : rank_tol);
  const double cutoff = tol * operator_norm2(s.matrix());
  const std::vector<double> sigma = svd_values(sq);
  int rank = 0;
  for (double v : sigma)
    if (v > cutoff && v > 0.0) ++rank;
  return rank == q.cols();
}

SubspaceBasis z_subspace(const SketchOperator& s, const FullQr& fq, double rank_tol) {
  const int n = fq.q.cols();
  const DenseMatrix sq = apply(s, fq.q);
  if (!preserves_rank(s, fq.q, rank_tol)) {
    throw RankNotPreserved("z_subspace: SQ is rank deficient (n = " + std::to_string(n) +
                           ")");
  }
  const DenseMatrix z = multiply(pinv(sq, rank_tol), s.matrix());
  const DenseMatrix zzt = multiply_tb(z, z);
  const SymEig eig = sym_eig(zzt);  // eigenvalues of I + TT^T, all >= 1
  DenseMatrix inv_sqrt(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        acc += eig.vectors(i, k) * eig.vectors(j, k) /
               std::sqrt(eig.values[static_cast<std::size_t>(k)]);
      }
      inv_sqrt(i, j) = acc;
    }
  }
  const DenseMatrix z0 = multiply(inv_sqrt, z);
  return SubspaceBasis{transpose(z0)};
}

SubspaceDecomposition decompose_sketch_range(const SketchOperator& s, const FullQr& fq,
                                             double angle_tol, double rank_tol) {
  if (s.m() != fq.q.rows()) {
    throw DimensionError("decompose_sketch_range: sketch acts on " +
                         std::to_string(s.m()) + " rows but Q has " +
                         std::to_string(fq.q.rows()));
  }
  if (!(angle_tol > 0.0) || !(angle_tol < 0.78539816339744830962)) {
    throw InvalidValue("decompose_sketch_range: angle_tol must lie in (0, pi/4), got " +
                       std::to_string(angle_tol));
  }
  const int m = s.m();
  const double sin_tol = std::sin(angle_tol);

  const DenseMatrix u_s = orthonormal_range(transpose(s.matrix()), rank_tol);
  const DenseMatrix b1 = intersect_directions(u_s, fq.q, sin_tol);
  const DenseMatrix c = intersect_directions(u_s, fq.q_perp, sin_tol);

  const bool rank_preserved = preserves_rank(s, fq.q, rank_tol);

  SubspaceBasis z{DenseMatrix(m, 0)};
  DenseMatrix b0 = c;
  if (rank_preserved) {
    z = z_subspace(s, fq, rank_tol);
    if (c.cols() > 0) {
      // Keep only the directions of c that carry no component along z: strip
      // the principal directions of c whose projection onto z exceeds
      // sin(angle_tol).
      const SvdFactors f = svd(multiply_ta(z.basis, c));
      int big = 0;
      while (big < static_cast<int>(f.sigma.size()) &&
             f.sigma[static_cast<std::size_t>(big)] > sin_tol) {
        ++big;
      }
      DenseMatrix v_big(c.cols(), big);
      for (int i = 0; i < c.cols(); ++i)
        for (int j = 0; j < big; ++j) v_big(i, j) = f.v(i, j);
      b0 = complement_within(c, multiply(c, v_big));
    }
  }

  const DenseMatrix b10 = complement_within(u_s, hstack(b1, b0));

  SubspaceDecomposition out;
  out.s1 = SubspaceBasis{b1};
  out.s0 = SubspaceBasis{b0};
  out.s10 = SubspaceBasis{b10};
  out.sq = SubspaceBasis{hstack(b1, b10)};
  out.z = std::move(z);
  out.angle_tol = angle_tol;
  return out;
}

}  // namespace mmlr
