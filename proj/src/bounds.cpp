#include "mmlr/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmlr/errors.hpp"
#include "mmlr/factor.hpp"

namespace mmlr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SigmaCache sigma_cache(const DenseMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return {};
  SigmaCache cache;
  cache.sigma = svd_values(a);
  cache.cutoff = cache.sigma.empty() ? 0.0 : default_rank_tol(a) * cache.sigma.front();
  return cache;
}

BoundReport make_inequality(std::string id, std::optional<SchattenOrder> p, double lhs,
                            double rhs, double slack_tol, const InstanceMeta& meta) {
  BoundReport r;
  r.proposition_id = std::move(id);
  r.p = std::move(p);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.holds = r.slack >= -slack_tol * std::max(1.0, rhs);
  r.meta = meta;
  return r;
}

BoundReport make_identity(std::string id, double lhs, double rhs, double tol,
                          const InstanceMeta& meta) {
  BoundReport r;
  r.proposition_id = std::move(id);
  r.lhs = lhs;
  r.rhs = rhs;
  const bool lhs_inf = std::isinf(lhs);
  const bool rhs_inf = std::isinf(rhs);
  if (lhs_inf && rhs_inf) {
    r.slack = 0.0;  // both sides infinite: symbolically equal
    r.holds = true;
  } else if (lhs_inf || rhs_inf) {
    r.slack = kInf;
    r.holds = false;
  } else {
    r.slack = std::abs(lhs - rhs);
    r.holds = r.slack <= tol * std::max(1.0, std::abs(rhs));
  }
  r.meta = meta;
  return r;
}

BoundReport make_inapplicable(std::string id, std::optional<SchattenOrder> p,
                              std::string note, const InstanceMeta& meta) {
  BoundReport r;
  r.proposition_id = std::move(id);
  r.p = std::move(p);
  r.applicable = false;
  r.holds = true;  // vacuous
  r.slack = 0.0;
  r.note = std::move(note);
  r.meta = meta;
  return r;
}

}  // namespace

double cached_norm(const SigmaCache& cache, const SchattenOrder& p) {
  return schatten_from_sigma(cache.sigma, p, cache.cutoff);
}

BoundContext make_context(const MmlrProblem& problem, const MmlrSolution& exact,
                          const SketchedSolution& sketched, const SketchOperator& sketch) {
  BoundContext ctx;
  ctx.meta = {problem.a.rows(), problem.a.cols(), problem.b.cols(),
              sketch.c(),       kind_str(sketch.kind()),  sketch.seed()};
  ctx.rank_tol = problem.rank_tol;
  ctx.rank_preserved = sketched.rank_preserved;

  const std::vector<double> a_sigma = svd_values(problem.a);
  ctx.a_norm2 = a_sigma.front();
  ctx.a_pinv_norm2 = 1.0 / a_sigma.back();  // full column rank by construction
  ctx.cond2_a = a_sigma.front() / a_sigma.back();
  ctx.s_norm2 = operator_norm2(sketch.matrix());

  const DenseMatrix sst = multiply_tb(sketch.matrix(), sketch.matrix());
  ctx.s_orthonormal_rows =
      frobenius_entrywise(subtract(sst, DenseMatrix::identity(sketch.c()))) <= 1e-10;

  ctx.proj_diff_norm2 = projector_difference_norm2(problem.a, sketch, problem.rank_tol);

  const FullQr fq = full_qr(problem.a);
  const DenseMatrix sq = apply(sketch, fq.q);
  const DenseMatrix sq_pinv = pinv(sq, problem.rank_tol);
  ctx.sq_pinv_norm2 = operator_norm2(sq_pinv);
  if (fq.q_perp.cols() > 0) {
    const DenseMatrix t = multiply(sq_pinv, apply(sketch, fq.q_perp));
    ctx.t_sigma = svd_values(t);
    ctx.t_norm2 = ctx.t_sigma.empty() ? 0.0 : ctx.t_sigma.front();
  }
  ctx.tsr_norm2 = operator_norm2(multiply(sq_pinv, apply(sketch, exact.r_hat)));

  ctx.a_fro = frobenius_entrywise(problem.a);
  ctx.b_fro = frobenius_entrywise(problem.b);
  ctx.atb_fro = frobenius_entrywise(multiply_ta(problem.a, problem.b));

  ctx.sv_xdiff = sigma_cache(subtract(sketched.x_tilde, exact.x_hat));
  ctx.sv_rdiff = sigma_cache(subtract(sketched.r_tilde, exact.r_hat));
  ctx.sv_b = sigma_cache(problem.b);
  ctx.sv_rhat = sigma_cache(exact.r_hat);
  ctx.sv_xhat = sigma_cache(exact.x_hat);
  ctx.sv_sbhat = sigma_cache(apply(sketch, exact.b_hat));

  const DenseMatrix u_s = orthonormal_range(transpose(sketch.matrix()), problem.rank_tol);
  if (u_s.cols() > 0) {
    ctx.angles_sq = principal_angles(SubspaceBasis{u_s}, SubspaceBasis{fq.q});
  }
  if (ctx.rank_preserved) {
    const SubspaceBasis z = z_subspace(sketch, fq, problem.rank_tol);
    ctx.angles_zq = principal_angles(z, SubspaceBasis{fq.q});
  }
  return ctx;
}

std::vector<BoundReport> eval_general_bounds(const BoundContext& ctx, const SchattenOrder& p,
                                             double slack_tol) {
  std::vector<BoundReport> out;
  const double xdiff_p = cached_norm(ctx.sv_xdiff, p);
  const double b_p = cached_norm(ctx.sv_b, p);

  out.push_back(make_inequality("P3.1-abs-solution", p, xdiff_p,
                                ctx.a_pinv_norm2 * ctx.proj_diff_norm2 * b_p, slack_tol,
                                ctx.meta));
  out.push_back(make_inequality("P3.1-abs-residual", p, cached_norm(ctx.sv_rdiff, p),
                                ctx.proj_diff_norm2 * b_p, slack_tol, ctx.meta));

  const double xhat_p = cached_norm(ctx.sv_xhat, p);
  if (ctx.atb_fro <= 1e-12 * std::max(1.0, ctx.a_fro * ctx.b_fro)) {
    out.push_back(make_inapplicable("P3.1-relative", p,
                                    "A^T B is numerically zero, the relative bound "
                                    "has no statement",
                                    ctx.meta));
  } else if (xhat_p < slack_tol * ctx.a_pinv_norm2 * b_p) {
    out.push_back(make_inapplicable("P3.1-relative", p,
                                    "solution norm below roundoff scale, ratio "
                                    "not meaningful",
                                    ctx.meta));
  } else {
    const double lhs = xdiff_p / xhat_p;
    const double rhs =
        ctx.cond2_a * ctx.proj_diff_norm2 * b_p / (ctx.a_norm2 * xhat_p);
    out.push_back(make_inequality("P3.1-relative", p, lhs, rhs, slack_tol, ctx.meta));
  }
  return out;
}

BoundReport eval_rank_preserving_bound(const BoundContext& ctx, const SchattenOrder& p,
                                       double slack_tol) {
  if (!ctx.rank_preserved) {
    throw NotApplicableError("residual-scaled solution bound requires rank preservation");
  }
  const double lhs = cached_norm(ctx.sv_xdiff, p);
  const double rhs = ctx.a_pinv_norm2 * ctx.t_norm2 * cached_norm(ctx.sv_rhat, p);
  return make_inequality("P4.1", p, lhs, rhs, slack_tol, ctx.meta);
}

BoundReport eval_drineas_comparison(const BoundContext& ctx, double epsilon,
                                    double slack_tol) {
  if (ctx.meta.d != 1) {
    throw NotApplicableError("sqrt-epsilon comparison is stated for a single "
                             "right-hand side (d = 1), got d = " +
                             std::to_string(ctx.meta.d));
  }
  const SchattenOrder p2 = SchattenOrder::finite(2.0);
  if (!ctx.rank_preserved) {
    return make_inapplicable("Drineas-L1", p2, "rank not preserved", ctx.meta);
  }
  const double eps = epsilon < 0.0 ? 2.0 * ctx.t_norm2 * ctx.t_norm2 : epsilon;
  const double rhat2 = cached_norm(ctx.sv_rhat, p2);
  const double lhs = cached_norm(ctx.sv_xdiff, p2);
  const double rhs = ctx.a_pinv_norm2 * std::sqrt(eps) * rhat2;
  BoundReport r = make_inequality("Drineas-L1", p2, lhs, rhs, slack_tol, ctx.meta);
  const double cond4_bound = std::pow(2.0, 0.25);
  const double cond5_bound = std::sqrt(eps / 2.0) * rhat2;
  r.extras["epsilon"] = eps;
  r.extras["sqrt_eps_star"] = ctx.t_norm2;
  r.extras["condition4_lhs"] = ctx.sq_pinv_norm2;
  r.extras["condition4_bound"] = cond4_bound;
  r.extras["condition4_holds"] = ctx.sq_pinv_norm2 <= cond4_bound ? 1.0 : 0.0;
  r.extras["condition5_lhs"] = ctx.tsr_norm2;
  r.extras["condition5_bound"] = cond5_bound;
  r.extras["condition5_holds"] =
      ctx.tsr_norm2 <= cond5_bound + 1e-12 * std::max(1.0, rhat2) ? 1.0 : 0.0;
  r.extras["residual_scaled_rhs"] = ctx.a_pinv_norm2 * ctx.t_norm2 * rhat2;
  return r;
}

BoundReport eval_product_bound(const BoundContext& ctx, const SchattenOrder& p,
                               double slack_tol) {
  const double lhs = cached_norm(ctx.sv_sbhat, p);
  const double rhs = ctx.s_norm2 * ctx.a_norm2 * cached_norm(ctx.sv_xhat, p);
  return make_inequality("L2.1", p, lhs, rhs, slack_tol, ctx.meta);
}

std::vector<BoundReport> eval_identity_checks(const BoundContext& ctx, double tol) {
  std::vector<BoundReport> out;

  // Tangent-norm identity, stated for sketches with orthonormal rows. On rank
  // loss the largest principal angle is pi/2 and both sides are reported as
  // the symbolic infinity.
  if (!ctx.s_orthonormal_rows) {
    out.push_back(make_inapplicable("P5.1", std::nullopt,
                                    "sketch rows are not orthonormal", ctx.meta));
  } else if (!ctx.angles_sq.has_value()) {
    out.push_back(make_inapplicable("P5.1", std::nullopt, "sketch range is trivial",
                                    ctx.meta));
  } else if (!ctx.rank_preserved) {
    BoundReport r = make_identity("P5.1", kInf, kInf, tol, ctx.meta);
    r.extras["t_norm2_numeric"] = ctx.t_norm2;
    r.extras["tan_theta1_numeric"] = ctx.angles_sq->tangents.front();
    out.push_back(std::move(r));
  } else {
    out.push_back(
        make_identity("P5.1", ctx.t_norm2, ctx.angles_sq->tangents.front(), tol,
                      ctx.meta));
  }

  // Elementwise tangent identity and the projector-difference identity, both
  // stated under rank preservation.
  if (!ctx.rank_preserved) {
    out.push_back(
        make_inapplicable("P5.2", std::nullopt, "rank not preserved", ctx.meta));
    out.push_back(
        make_inapplicable("P5.3", std::nullopt, "rank not preserved", ctx.meta));
    return out;
  }

  const std::vector<double>& tangents = ctx.angles_zq->tangents;
  BoundReport p52 =
      make_identity("P5.2", ctx.t_norm2, tangents.empty() ? 0.0 : tangents.front(),
                    tol, ctx.meta);
  double max_gap = 0.0;
  bool elementwise_ok = true;
  for (std::size_t k = 0; k < tangents.size(); ++k) {
    // T has min(n, m−n) singular values; trailing angles pair with zeros.
    const double sv = k < ctx.t_sigma.size() ? ctx.t_sigma[k] : 0.0;
    const double tk = tangents[k];
    if (std::isinf(tk)) {
      elementwise_ok = false;  // finite tangents are part of the claim
      max_gap = kInf;
      break;
    }
    const double gap = std::abs(sv - tk);
    max_gap = std::max(max_gap, gap);
    if (gap > tol * std::max(1.0, tk)) elementwise_ok = false;
  }
  p52.extras["max_elementwise_gap"] = max_gap;
  p52.holds = p52.holds && elementwise_ok;
  out.push_back(std::move(p52));

  out.push_back(make_identity("P5.3", ctx.proj_diff_norm2,
                              ctx.angles_zq->tangents.front(), tol, ctx.meta));
  return out;
}

}  // namespace mmlr
