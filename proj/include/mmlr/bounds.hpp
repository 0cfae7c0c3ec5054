#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmlr/geometry.hpp"
#include "mmlr/matrix.hpp"
#include "mmlr/schatten.hpp"
#include "mmlr/sketch.hpp"
#include "mmlr/solve.hpp"

namespace mmlr {

inline constexpr double default_slack_tol = 1e-9;  // inequality comparisons
inline constexpr double identity_tol = 1e-8;       // two-sided identity checks

// Descriptor of the instance a report was evaluated on.
struct InstanceMeta {
  int m = 0;
  int n = 0;
  int d = 0;
  int c = 0;
  std::string kind;
  std::uint64_t seed = 0;
};

// One evaluated proposition. For inequalities slack = rhs − lhs and holds means
// slack ≥ −slack_tol·max(1, rhs); for identities slack = |lhs − rhs| and holds
// means slack ≤ identity_tol·max(1, |rhs|), with two infinite sides counting as
// equal and exactly one infinite side as a failure. Inapplicable reports carry
// holds = true (vacuous) and a note explaining why.
struct BoundReport {
  std::string proposition_id;
  std::optional<SchattenOrder> p;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
  bool applicable = true;
  std::string note;
  std::map<std::string, double> extras;
  InstanceMeta meta;
};

// Singular values of a matrix plus the cutoff below which they are treated as
// zero, enough to evaluate any Schatten norm without refactorizing.
struct SigmaCache {
  std::vector<double> sigma;
  double cutoff = 0.0;
};

double cached_norm(const SigmaCache& cache, const SchattenOrder& p);

// Everything the bound evaluations need, computed once per instance.
struct BoundContext {
  InstanceMeta meta;
  double rank_tol = 0.0;
  bool rank_preserved = false;
  bool s_orthonormal_rows = false;

  double a_norm2 = 0.0;       // ‖A‖₂
  double a_pinv_norm2 = 0.0;  // ‖A†‖₂
  double cond2_a = 0.0;       // κ₂(A)
  double s_norm2 = 0.0;       // ‖S‖₂
  double proj_diff_norm2 = 0.0;  // ‖P − P_A‖₂
  double t_norm2 = 0.0;          // ‖(SQ)†SQ⊥‖₂
  double sq_pinv_norm2 = 0.0;    // ‖(SQ)†‖₂
  double tsr_norm2 = 0.0;        // ‖(SQ)†S·R̂‖₂

  std::vector<double> t_sigma;  // singular values of the tangent matrix, descending

  double a_fro = 0.0;
  double b_fro = 0.0;
  double atb_fro = 0.0;  // ‖AᵀB‖_F, gates the relative bound

  SigmaCache sv_xdiff;  // σ(X̃ − X̂)
  SigmaCache sv_rdiff;  // σ(R̃ − R̂)
  SigmaCache sv_b;      // σ(B)
  SigmaCache sv_rhat;   // σ(R̂)
  SigmaCache sv_xhat;   // σ(X̂)
  SigmaCache sv_sbhat;  // σ(S·A·X̂)

  std::optional<PrincipalAngleSet> angles_sq;  // (𝒮, 𝒬)
  std::optional<PrincipalAngleSet> angles_zq;  // (𝒵, 𝒬), rank-preserving only
};

BoundContext make_context(const MmlrProblem& problem, const MmlrSolution& exact,
                          const SketchedSolution& sketched, const SketchOperator& sketch);

// The three multiplicative perturbation bounds: absolute solution error,
// absolute residual error, and the relative solution error (the last marked
// inapplicable when AᵀB ≈ 0 or ‖X̂‖_p is below roundoff scale).
std::vector<BoundReport> eval_general_bounds(const BoundContext& ctx, const SchattenOrder& p,
                                             double slack_tol = default_slack_tol);

// Residual-scaled bound ‖X̃−X̂‖_p ≤ ‖A†‖₂·‖T‖₂·‖R̂‖_p; requires rank
// preservation and throws NotApplicableError otherwise.
BoundReport eval_rank_preserving_bound(const BoundContext& ctx, const SchattenOrder& p,
                                       double slack_tol = default_slack_tol);

// Single right-hand-side comparison against the classical √ε-style bound
// ‖x̂−x̃‖₂ ≤ ‖A†‖₂·√ε·‖r̂‖₂, with its two side conditions recorded in extras.
// epsilon < 0 selects the default 2‖T‖₂², the smallest value for which the
// norm-level reading of the second condition is guaranteed. Throws
// NotApplicableError when d ≠ 1.
BoundReport eval_drineas_comparison(const BoundContext& ctx, double epsilon = -1.0,
                                    double slack_tol = default_slack_tol);

// Submultiplicativity check ‖S·A·X̂‖_p ≤ ‖S‖₂·‖A‖₂·‖X̂‖_p on the trial's own
// triple.
BoundReport eval_product_bound(const BoundContext& ctx, const SchattenOrder& p,
                               double slack_tol = default_slack_tol);

// The three tangent/projector identities: ‖T‖₂ = tanθ₁(𝒮,𝒬) for
// orthonormal-row sketches (infinite tangents matched symbolically on rank
// loss), σ(T) = tan(angles(𝒵,𝒬)) elementwise, and ‖P−P_A‖₂ = tanθ₁(𝒵,𝒬).
// `tol` is the relative agreement tolerance (slack ≤ tol·max(1, |rhs|)).
std::vector<BoundReport> eval_identity_checks(const BoundContext& ctx,
                                              double tol = identity_tol);

}  // namespace mmlr
