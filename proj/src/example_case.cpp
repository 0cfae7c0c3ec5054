#include "mmlr/example_case.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "mmlr/factor.hpp"
#include "mmlr/sketch.hpp"

namespace mmlr {

namespace {

constexpr double kEntryTol = 1e-12;  // closed-form algebraic quantities
constexpr double kAngleTol = 1e-10;  // quantities routed through angles

InstanceMeta example_meta() {
  return InstanceMeta{6, 3, 0, 4, kind_str(SketchKind::user_supplied), 0};
}

// A check comparing a computed value against its expected value: slack is the
// absolute gap and holds means the gap stays within tol.
BoundReport value_check(std::string id, double computed, double expected, double tol,
                        std::string note = {}) {
  BoundReport r;
  r.proposition_id = std::move(id);
  r.lhs = computed;
  r.rhs = expected;
  r.slack = std::abs(computed - expected);
  r.holds = r.slack <= tol;
  r.note = std::move(note);
  r.meta = example_meta();
  return r;
}

BoundReport matrix_check(std::string id, const DenseMatrix& computed,
                         const DenseMatrix& expected, double tol,
                         std::string note = {}) {
  const bool shape_ok =
      computed.rows() == expected.rows() && computed.cols() == expected.cols();
  const double gap = shape_ok ? max_abs_diff(computed, expected)
                              : std::numeric_limits<double>::infinity();
  BoundReport r = value_check(std::move(id), gap, 0.0, tol, std::move(note));
  if (!shape_ok) {
    r.note = "shape mismatch: got " + shape_str(computed) + ", expected " +
             shape_str(expected);
  }
  return r;
}

BoundReport dimension_check(std::string id, int computed, int expected,
                            std::string note = {}) {
  BoundReport r;
  r.proposition_id = std::move(id);
  r.lhs = computed;
  r.rhs = expected;
  r.slack = std::abs(computed - expected);
  r.holds = computed == expected;
  r.note = std::move(note);
  r.meta = example_meta();
  return r;
}

// Largest principal angle between two explicitly given subspaces, used to
// confirm that a computed basis spans exactly the expected space.
double span_gap(const DenseMatrix& computed, const DenseMatrix& expected) {
  if (computed.cols() != expected.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  if (computed.cols() == 0) return 0.0;
  const PrincipalAngleSet angles =
      principal_angles(SubspaceBasis{computed}, SubspaceBasis{expected});
  return angles.angles.front();
}

}  // namespace

DenseMatrix example_q() {
  return DenseMatrix::from_rows({{1, 0, 0},
                                 {0, 1, 0},
                                 {0, 0, 1},
                                 {0, 0, 0},
                                 {0, 0, 0},
                                 {0, 0, 0}});
}

DenseMatrix example_s() {
  return DenseMatrix::from_rows({{1, 0, 0, 0, 0, 0},
                                 {0, 1, 0, 0, 0, 0},
                                 {0, 0, 1, 0, 0, 1},
                                 {0, 1, 0, 0, 1, 0}});
}

DenseMatrix example_z() {
  return DenseMatrix::from_rows({{1, 0, 0, 0, 0, 0},
                                 {0, 1, 0, 0, 0.5, 0},
                                 {0, 0, 1, 0, 0, 1}});
}

RunReport cmd_paper_example(double angle_tol) {
  const auto start = std::chrono::steady_clock::now();

  const DenseMatrix q = example_q();
  const DenseMatrix s_mat = example_s();
  const SketchOperator s = SketchOperator::from_matrix(s_mat, q.cols());
  const FullQr fq = full_qr(q);

  std::vector<BoundReport> reports;

  // The sketched range basis: S applied to the orthonormal range of A.
  const DenseMatrix sq = apply(s, q);
  const DenseMatrix sq_expected =
      DenseMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 1, 0}});
  reports.push_back(matrix_check("example:SQ", sq, sq_expected, kEntryTol));

  // The orthonormal factors of Q come out as coordinate columns exactly.
  const DenseMatrix q_perp_expected = DenseMatrix::from_rows({{0, 0, 0},
                                                              {0, 0, 0},
                                                              {0, 0, 0},
                                                              {1, 0, 0},
                                                              {0, 1, 0},
                                                              {0, 0, 1}});
  reports.push_back(matrix_check("example:Q-range", fq.q, q, kEntryTol));
  reports.push_back(
      matrix_check("example:Q-perp", fq.q_perp, q_perp_expected, kEntryTol));

  // Z = (SQ)^+ S and its Gram matrix.
  const DenseMatrix z = z_matrix(s, q);
  reports.push_back(matrix_check("example:Z", z, example_z(), kEntryTol));
  const DenseMatrix zzt_expected =
      DenseMatrix::from_rows({{1, 0, 0}, {0, 1.25, 0}, {0, 0, 2}});
  reports.push_back(
      matrix_check("example:ZZt", multiply_tb(z, z), zzt_expected, kEntryTol));

  // Z0 = (ZZ^T)^{-1/2} Z has orthonormal rows; Z0 Q is diagonal with the
  // principal cosines 1, 2/sqrt(5), 1/sqrt(2) between Z and the range.
  const SubspaceBasis z_space = z_subspace(s, fq);
  const DenseMatrix z0q = multiply_ta(z_space.basis, q);
  const DenseMatrix z0q_expected = DenseMatrix::from_rows(
      {{1, 0, 0}, {0, 2.0 / std::sqrt(5.0), 0}, {0, 0, 1.0 / std::sqrt(2.0)}});
  reports.push_back(matrix_check("example:Z0Q", z0q, z0q_expected, kEntryTol,
                                 "rows of Z0 are unique up to sign; the expected "
                                 "diagonal is nonnegative by construction here"));

  // Decomposition of the sketch range: 2 directions inside the range, none
  // purely outside it once Z directions are removed, 2 mixed, 4 total
  // non-orthogonal to the range.
  const SubspaceDecomposition decomp = decompose_sketch_range(s, fq, angle_tol);
  reports.push_back(dimension_check("example:dim-S1", decomp.s1.dim(), 2));
  reports.push_back(dimension_check("example:dim-S0", decomp.s0.dim(), 0));
  reports.push_back(dimension_check("example:dim-S10", decomp.s10.dim(), 2));
  reports.push_back(dimension_check("example:dim-SQ", decomp.sq.dim(), 4));
  reports.push_back(dimension_check("example:dim-Z", decomp.z.dim(), 3));
  {
    BoundReport r;
    r.proposition_id = "example:dim-Z-vs-SQ";
    r.lhs = decomp.z.dim();
    r.rhs = decomp.sq.dim();
    r.slack = std::abs(decomp.z.dim() - decomp.sq.dim());
    r.holds = decomp.z.dim() == 3 && decomp.sq.dim() == 4;
    r.note = "the two subspaces must have distinct dimensions (3 vs 4)";
    r.meta = example_meta();
    reports.push_back(std::move(r));
  }

  // Explicit spans for the intersection and mixed parts.
  const DenseMatrix s1_expected =
      DenseMatrix::from_rows({{1, 0}, {0, 1}, {0, 0}, {0, 0}, {0, 0}, {0, 0}});
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const DenseMatrix s10_expected = DenseMatrix::from_rows({{0, 0},
                                                           {0, 0},
                                                           {0, inv_sqrt2},
                                                           {0, 0},
                                                           {1, 0},
                                                           {0, inv_sqrt2}});
  reports.push_back(value_check("example:span-S1",
                                span_gap(decomp.s1.basis, s1_expected), 0.0,
                                kAngleTol, "largest angle to the expected span"));
  reports.push_back(value_check("example:span-S10",
                                span_gap(decomp.s10.basis, s10_expected), 0.0,
                                kAngleTol, "largest angle to the expected span"));

  // The projector-difference norm, the largest tangent between Z and the
  // range, and their agreement; all equal 1 (the largest angle is 45 degrees).
  const double proj_diff = projector_difference_norm2(q, s);
  const PrincipalAngleSet angles = principal_angles(z_space, SubspaceBasis{q});
  const double tan_theta1 = angles.tangents.front();
  reports.push_back(
      value_check("example:proj-diff-norm", proj_diff, 1.0, kEntryTol));
  reports.push_back(
      value_check("example:tan-theta1-ZQ", tan_theta1, 1.0, kAngleTol));
  reports.push_back(value_check("example:proj-diff-vs-tangent",
                                std::abs(proj_diff - tan_theta1), 0.0, kAngleTol));

  // Principal cosines between Z and the range, smallest first.
  const std::vector<double> cos_expected = {inv_sqrt2, 2.0 / std::sqrt(5.0), 1.0};
  double cos_gap = 0.0;
  for (std::size_t k = 0; k < cos_expected.size(); ++k) {
    const double got = k < angles.cosines.size() ? angles.cosines[k] : -1.0;
    cos_gap = std::max(cos_gap, std::abs(got - cos_expected[k]));
  }
  reports.push_back(value_check("example:cosines-ZQ", cos_gap, 0.0, kAngleTol,
                                "max gap over the three principal cosines"));

  RunReport out;
  out.mode = "paper-example";
  out.config.m = 6;
  out.config.n = 3;
  out.config.d = 0;
  out.config.c = 4;
  out.config.sketch_kind = SketchKind::user_supplied;
  out.config.seed = 0;
  out.config.trials = 1;
  out.config.angle_tol = angle_tol;
  out.config.noise = 0.0;

  TrialResult trial;
  trial.index = 0;
  trial.rank_preserved = preserves_rank(s, q);
  trial.reports = std::move(reports);
  out.trials.push_back(std::move(trial));
  out.summary = summarize(out.trials);
  out.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace mmlr
