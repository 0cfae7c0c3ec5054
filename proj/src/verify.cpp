#include "mmlr/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "mmlr/errors.hpp"
#include "mmlr/factor.hpp"
#include "mmlr/matrix_io.hpp"
#include "mmlr/rng.hpp"

namespace mmlr {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string field_error(const std::string& field, const std::string& what) {
  return field + ": " + what;
}

DenseMatrix random_normal(Rng& rng, int rows, int cols) {
  DenseMatrix a(rows, cols);
  for (double& v : a.data()) v = rng.normal();
  return a;
}

// A with i.i.d. standard normal entries is full column rank with probability
// one; the redraw loop only guards against numerically degenerate draws.
DenseMatrix draw_full_rank(Rng& rng, int m, int n, double rank_tol) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    DenseMatrix a = random_normal(rng, m, n);
    if (numerical_rank(a, rank_tol) == n) return a;
  }
  throw Error("failed to draw a full-column-rank matrix after 100 attempts");
}

MmlrProblem generate_problem(const ExperimentConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix a = draw_full_rank(rng, config.m, config.n, config.rank_tol);
  const DenseMatrix x0 = random_normal(rng, config.n, config.d);
  DenseMatrix b = multiply(a, x0);
  if (config.noise > 0.0) {
    b = add(b, scale(random_normal(rng, config.m, config.d), config.noise));
  }
  return make_problem(std::move(a), std::move(b), config.rank_tol);
}

SketchOperator generate_sketch(SketchKind kind, int c, int m, int n,
                               std::uint64_t seed) {
  switch (kind) {
    case SketchKind::sample_without_replacement:
      return SketchOperator::sample_without_replacement(c, m, n, seed);
    case SketchKind::sample_with_replacement:
      return SketchOperator::sample_with_replacement(c, m, n, seed);
    case SketchKind::gaussian:
      return SketchOperator::gaussian(c, m, n, seed);
    case SketchKind::user_supplied:
      break;
  }
  throw ConfigError(field_error("sketch", "a user-supplied sketch cannot be generated"));
}

// Identity reports share the user's tolerance scale: tightening slack_tol by
// some factor tightens the identity tolerance by the same factor.
double identity_tol_for(double slack_tol) {
  return identity_tol * (slack_tol / default_slack_tol);
}

TrialResult run_trial(const ExperimentConfig& config, int index,
                      const MmlrProblem* fixed_problem,
                      const SketchOperator* fixed_sketch) {
  const std::uint64_t trial_seed = derive_seed(config.seed, static_cast<std::uint64_t>(index));
  const MmlrProblem problem = fixed_problem
                                  ? *fixed_problem
                                  : generate_problem(config, derive_seed(trial_seed, 0));
  const SketchOperator sketch =
      fixed_sketch ? *fixed_sketch
                   : generate_sketch(config.sketch_kind, config.c, problem.a.rows(),
                                     problem.a.cols(), derive_seed(trial_seed, 1));
  const MmlrSolution exact = solve_exact(problem);
  const SketchedSolution sketched = solve_sketched(problem, sketch);

  TrialResult result;
  result.index = index;
  result.rank_preserved = sketched.rank_preserved;
  result.reports =
      evaluate_instance(problem, exact, sketched, sketch, config.p_list, config.slack_tol);
  return result;
}

const char* source_str(ProblemSource source) {
  return source == ProblemSource::generate ? "generate" : "files";
}

ordered_json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  return v;
}

ordered_json report_json(const BoundReport& r) {
  ordered_json j;
  j["proposition"] = r.proposition_id;
  j["p"] = r.p.has_value() ? ordered_json(r.p->str()) : ordered_json(nullptr);
  j["lhs"] = json_number(r.lhs);
  j["rhs"] = json_number(r.rhs);
  j["slack"] = json_number(r.slack);
  j["holds"] = r.holds;
  j["applicable"] = r.applicable;
  j["note"] = r.note;
  ordered_json extras = ordered_json::object();
  for (const auto& [key, value] : r.extras) extras[key] = json_number(value);
  j["extras"] = std::move(extras);
  j["meta"] = {{"m", r.meta.m},       {"n", r.meta.n},     {"d", r.meta.d},
               {"c", r.meta.c},       {"kind", r.meta.kind},
               {"seed", r.meta.seed}};
  return j;
}

ordered_json config_json(const RunReport& report) {
  const ExperimentConfig& c = report.config;
  ordered_json j;
  j["mode"] = report.mode;
  j["m"] = c.m;
  j["n"] = c.n;
  j["d"] = c.d;
  j["c"] = c.c;
  j["sketch"] = kind_str(c.sketch_kind);
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  ordered_json orders = ordered_json::array();
  for (const SchattenOrder& p : c.p_list) orders.push_back(p.str());
  j["p"] = std::move(orders);
  j["rank_tol"] = c.rank_tol > 0.0 ? ordered_json(c.rank_tol) : ordered_json("auto");
  j["angle_tol"] = c.angle_tol;
  j["slack_tol"] = c.slack_tol;
  j["noise"] = c.noise;
  j["problem_source"] = source_str(c.problem_source);
  if (c.problem_source == ProblemSource::files) {
    j["a"] = c.a_path;
    j["b"] = c.b_path;
  }
  if (c.sketch_kind == SketchKind::user_supplied) {
    j["sketch_file"] = c.sketch_path;
  }
  return j;
}

}  // namespace

void validate_config(const ExperimentConfig& config) {
  if (config.trials < 1) {
    throw ConfigError(field_error("trials", "must be at least 1 (got " +
                                                std::to_string(config.trials) + ")"));
  }
  if (config.p_list.empty()) {
    throw ConfigError(field_error("p", "at least one Schatten order is required"));
  }
  if (!(config.angle_tol > 0.0) || !(config.angle_tol < std::numbers::pi / 4.0)) {
    throw ConfigError(field_error("angle_tol", "must lie in (0, pi/4) radians"));
  }
  if (!(config.slack_tol > 0.0) || !std::isfinite(config.slack_tol)) {
    throw ConfigError(field_error("slack_tol", "must be positive and finite"));
  }
  if (std::isnan(config.rank_tol) || (config.rank_tol > 0.0 && !std::isfinite(config.rank_tol))) {
    throw ConfigError(field_error(
        "rank_tol", "must be a finite value (nonpositive selects the default)"));
  }
  if (!(config.noise >= 0.0) || !std::isfinite(config.noise)) {
    throw ConfigError(field_error("noise", "must be nonnegative and finite"));
  }
  if (config.sketch_kind == SketchKind::user_supplied && config.sketch_path.empty()) {
    throw ConfigError(
        field_error("sketch-file", "a sketch path is required when sketch kind is file"));
  }

  if (config.problem_source == ProblemSource::files) {
    if (config.a_path.empty()) {
      throw ConfigError(field_error("a", "a path to A is required in files mode"));
    }
    if (config.b_path.empty()) {
      throw ConfigError(field_error("b", "a path to B is required in files mode"));
    }
    return;  // shape bounds are checked against the loaded matrices
  }

  if (config.n < 1) {
    throw ConfigError(
        field_error("n", "must be at least 1 (got " + std::to_string(config.n) + ")"));
  }
  if (config.d < 1) {
    throw ConfigError(
        field_error("d", "must be at least 1 (got " + std::to_string(config.d) + ")"));
  }
  if (config.m < config.n) {
    throw ConfigError(field_error("m", "must be at least n (got m=" +
                                           std::to_string(config.m) + ", n=" +
                                           std::to_string(config.n) + ")"));
  }
  if (config.sketch_kind != SketchKind::user_supplied &&
      !(config.n <= config.c && config.c <= config.m)) {
    throw ConfigError(field_error(
        "c", "must satisfy n <= c <= m (got c=" + std::to_string(config.c) + ", n=" +
                 std::to_string(config.n) + ", m=" + std::to_string(config.m) + ")"));
  }
}

std::vector<BoundReport> evaluate_instance(const MmlrProblem& problem,
                                           const MmlrSolution& exact,
                                           const SketchedSolution& sketched,
                                           const SketchOperator& sketch,
                                           const std::vector<SchattenOrder>& p_list,
                                           double slack_tol) {
  const BoundContext ctx = make_context(problem, exact, sketched, sketch);
  std::vector<BoundReport> reports;
  reports.reserve(p_list.size() * 5 + 4);

  for (const SchattenOrder& p : p_list) {
    for (BoundReport& r : eval_general_bounds(ctx, p, slack_tol)) {
      reports.push_back(std::move(r));
    }
    reports.push_back(eval_product_bound(ctx, p, slack_tol));
    if (ctx.rank_preserved) {
      reports.push_back(eval_rank_preserving_bound(ctx, p, slack_tol));
    } else {
      BoundReport r;
      r.proposition_id = "P4.1";
      r.p = p;
      r.applicable = false;
      r.holds = true;  // vacuous
      r.note = "rank not preserved";
      r.meta = ctx.meta;
      reports.push_back(std::move(r));
    }
  }
  if (problem.b.cols() == 1) {
    reports.push_back(eval_drineas_comparison(ctx, -1.0, slack_tol));
  }
  for (BoundReport& r : eval_identity_checks(ctx, identity_tol_for(slack_tol))) {
    reports.push_back(std::move(r));
  }
  return reports;
}

RunSummary summarize(const std::vector<TrialResult>& trials) {
  RunSummary s;
  int preserved = 0;
  for (const TrialResult& trial : trials) {
    if (trial.rank_preserved) ++preserved;
    for (const BoundReport& r : trial.reports) {
      ++s.reports;
      if (!r.applicable) continue;
      ++s.applicable;
      PropositionTally& tally = s.per_proposition[r.proposition_id];
      ++tally.applicable;
      if (r.holds) {
        ++s.held;
        ++tally.held;
      } else {
        ++s.failed;
        s.all_hold = false;
      }
      const double magnitude = std::abs(r.slack);
      if (magnitude > tally.max_abs_slack) tally.max_abs_slack = magnitude;
    }
  }
  s.rank_preservation_rate =
      trials.empty() ? 0.0 : static_cast<double>(preserved) / static_cast<double>(trials.size());
  return s;
}

RunReport cmd_verify(const ExperimentConfig& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();

  // Files mode loads the problem (and a fixed sketch, if any) once.
  MmlrProblem loaded_problem;
  const MmlrProblem* fixed_problem = nullptr;
  if (config.problem_source == ProblemSource::files) {
    loaded_problem =
        make_problem(read_matrix(config.a_path), read_matrix(config.b_path), config.rank_tol);
    fixed_problem = &loaded_problem;
    if (config.sketch_kind != SketchKind::user_supplied) {
      const int m = loaded_problem.a.rows();
      const int n = loaded_problem.a.cols();
      if (!(n <= config.c && config.c <= m)) {
        throw ConfigError(field_error(
            "c", "must satisfy n <= c <= m for the loaded problem (got c=" +
                     std::to_string(config.c) + ", n=" + std::to_string(n) + ", m=" +
                     std::to_string(m) + ")"));
      }
    }
  }
  SketchOperator loaded_sketch = SketchOperator::from_matrix(DenseMatrix::identity(1), 1);
  const SketchOperator* fixed_sketch = nullptr;
  if (config.sketch_kind == SketchKind::user_supplied) {
    const int n = fixed_problem ? fixed_problem->a.cols() : config.n;
    loaded_sketch = SketchOperator::from_matrix(read_matrix(config.sketch_path), n);
    fixed_sketch = &loaded_sketch;
  }

  RunReport out;
  out.mode = "verify";
  out.config = config;
  out.trials.resize(static_cast<std::size_t>(config.trials));
  std::vector<std::string> failures(out.trials.size());

#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < config.trials; ++t) {
    try {
      out.trials[static_cast<std::size_t>(t)] =
          run_trial(config, t, fixed_problem, fixed_sketch);
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(t)] = e.what();
    }
  }
  for (std::size_t t = 0; t < failures.size(); ++t) {
    if (!failures[t].empty()) {
      throw Error("trial " + std::to_string(t) + ": " + failures[t]);
    }
  }

  out.summary = summarize(out.trials);
  out.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RunReport cmd_solve(const SolveConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.a_path.empty()) {
    throw ConfigError(field_error("a", "a path to A is required"));
  }
  if (config.b_path.empty()) {
    throw ConfigError(field_error("b", "a path to B is required"));
  }
  std::vector<SchattenOrder> p_list = config.p_list;
  if (p_list.empty()) p_list.push_back(SchattenOrder::finite(2.0));

  const MmlrProblem problem =
      make_problem(read_matrix(config.a_path), read_matrix(config.b_path), config.rank_tol);
  const int m = problem.a.rows();
  const int n = problem.a.cols();
  const MmlrSolution exact = solve_exact(problem);

  const bool sketched_mode = !config.sketch_path.empty() || config.c > 0;
  SketchOperator sketch = SketchOperator::from_matrix(DenseMatrix::identity(1), 1);
  if (sketched_mode) {
    sketch = config.sketch_path.empty()
                 ? generate_sketch(config.sketch_kind, config.c, m, n, config.seed)
                 : SketchOperator::from_matrix(read_matrix(config.sketch_path), n);
  }

  TrialResult trial;
  trial.index = 0;
  trial.rank_preserved = true;
  InstanceMeta meta{m, n, problem.b.cols(), sketched_mode ? sketch.c() : 0,
                    sketched_mode ? kind_str(sketch.kind()) : "none",
                    sketched_mode ? sketch.seed() : 0};

  auto info = [&meta](const std::string& id, const SchattenOrder& p, double value) {
    BoundReport r;
    r.proposition_id = id;
    r.p = p;
    r.lhs = value;
    r.rhs = value;
    r.slack = 0.0;
    r.holds = true;
    r.note = "informational";
    r.meta = meta;
    return r;
  };

  ordered_json norms;
  ordered_json solution_norms = ordered_json::object();
  ordered_json residual_norms = ordered_json::object();
  for (const SchattenOrder& p : p_list) {
    const double xn = schatten_norm(exact.x_hat, p);
    const double rn = schatten_norm(exact.r_hat, p);
    trial.reports.push_back(info("solve:solution-norm", p, xn));
    trial.reports.push_back(info("solve:residual-norm", p, rn));
    solution_norms[p.str()] = json_number(xn);
    residual_norms[p.str()] = json_number(rn);
  }
  norms["solution_norms"] = std::move(solution_norms);
  norms["residual_norms"] = std::move(residual_norms);

  SketchedSolution sketched;
  if (sketched_mode) {
    sketched = solve_sketched(problem, sketch);
    trial.rank_preserved = sketched.rank_preserved;
    ordered_json solution_errors = ordered_json::object();
    ordered_json residual_errors = ordered_json::object();
    for (const SchattenOrder& p : p_list) {
      const double xe = solution_error(exact, sketched, p);
      const double re = residual_error(exact, sketched, p);
      trial.reports.push_back(info("solve:solution-error", p, xe));
      trial.reports.push_back(info("solve:residual-error", p, re));
      solution_errors[p.str()] = json_number(xe);
      residual_errors[p.str()] = json_number(re);
    }
    norms["solution_errors"] = std::move(solution_errors);
    norms["residual_errors"] = std::move(residual_errors);
    norms["rank_preserved"] = sketched.rank_preserved;

    for (BoundReport& r :
         evaluate_instance(problem, exact, sketched, sketch, p_list, config.slack_tol)) {
      trial.reports.push_back(std::move(r));
    }
  }

  if (!config.out_prefix.empty()) {
    write_matrix(config.out_prefix + "_xhat.mtx", exact.x_hat);
    if (sketched_mode) {
      write_matrix(config.out_prefix + "_xtilde.mtx", sketched.x_tilde);
    }
    const std::string norms_path = config.out_prefix + "_norms.json";
    std::ofstream out(norms_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open \"" + norms_path + "\" for writing");
    out << norms.dump(2) << "\n";
    if (!out) throw IoError("failed to write \"" + norms_path + "\"");
  }

  RunReport out;
  out.mode = "solve";
  out.config.m = m;
  out.config.n = n;
  out.config.d = problem.b.cols();
  out.config.c = sketched_mode ? sketch.c() : 0;
  out.config.sketch_kind = sketch.kind();
  out.config.seed = config.seed;
  out.config.trials = 1;
  out.config.p_list = p_list;
  out.config.rank_tol = config.rank_tol;
  out.config.slack_tol = config.slack_tol;
  out.config.problem_source = ProblemSource::files;
  out.config.a_path = config.a_path;
  out.config.b_path = config.b_path;
  out.config.sketch_path = config.sketch_path;
  out.trials.push_back(std::move(trial));
  out.summary = summarize(out.trials);
  out.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string report_to_json(const RunReport& report) {
  ordered_json j;
  j["artifact"] = {{"name", artifact_name}, {"version", artifact_version}};
  j["config"] = config_json(report);
  ordered_json trials = ordered_json::array();
  for (const TrialResult& trial : report.trials) {
    ordered_json t;
    t["trial"] = trial.index;
    t["rank_preserved"] = trial.rank_preserved;
    ordered_json reports = ordered_json::array();
    for (const BoundReport& r : trial.reports) reports.push_back(report_json(r));
    t["reports"] = std::move(reports);
    trials.push_back(std::move(t));
  }
  j["trials"] = std::move(trials);

  ordered_json per_prop = ordered_json::object();
  for (const auto& [id, tally] : report.summary.per_proposition) {
    per_prop[id] = {{"applicable", tally.applicable},
                    {"held", tally.held},
                    {"failed", tally.applicable - tally.held},
                    {"max_abs_slack", json_number(tally.max_abs_slack)}};
  }
  j["summary"] = {{"reports", report.summary.reports},
                  {"applicable", report.summary.applicable},
                  {"held", report.summary.held},
                  {"failed", report.summary.failed},
                  {"all_hold", report.summary.all_hold},
                  {"rank_preservation_rate", report.summary.rank_preservation_rate},
                  {"per_proposition", std::move(per_prop)}};
  j["timing"] = {{"elapsed_seconds", report.elapsed_seconds}};
  return j.dump(2) + "\n";
}

std::string summary_to_csv(const RunReport& report) {
  std::string out = "proposition,applicable,held,failed,max_abs_slack\n";
  char buf[64];
  for (const auto& [id, tally] : report.summary.per_proposition) {
    if (std::isinf(tally.max_abs_slack)) {
      std::snprintf(buf, sizeof(buf), "inf");
    } else {
      std::snprintf(buf, sizeof(buf), "%.17g", tally.max_abs_slack);
    }
    out += id + "," + std::to_string(tally.applicable) + "," +
           std::to_string(tally.held) + "," +
           std::to_string(tally.applicable - tally.held) + "," + buf + "\n";
  }
  return out;
}

}  // namespace mmlr
