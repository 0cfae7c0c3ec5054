#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mmlr/bounds.hpp"
#include "mmlr/geometry.hpp"
#include "mmlr/schatten.hpp"
#include "mmlr/sketch.hpp"
#include "mmlr/solve.hpp"

namespace mmlr {

inline constexpr const char* artifact_name = "mmlr";
inline constexpr const char* artifact_version = "1.0.0";

enum class ProblemSource { generate, files };

// Full description of a verification run. Tolerance semantics: slack_tol is
// the relative slack tolerance for inequality reports; identity reports use
// identity_tol scaled by the same factor the user applied to slack_tol
// (tightening --slack-tol tightens every holds decision proportionally).
// rank_tol <= 0 selects the per-matrix default cutoff.
struct ExperimentConfig {
  int m = 200;
  int n = 10;
  int d = 5;
  int c = 60;
  SketchKind sketch_kind = SketchKind::sample_without_replacement;
  std::uint64_t seed = 42;
  int trials = 1;
  std::vector<SchattenOrder> p_list;
  double rank_tol = -1.0;
  double angle_tol = default_angle_tol;
  double slack_tol = default_slack_tol;
  double noise = 1e-2;
  ProblemSource problem_source = ProblemSource::generate;
  std::string a_path;
  std::string b_path;
  std::string sketch_path;  // required when sketch_kind == user_supplied
};

// Throws ConfigError naming the offending field.
void validate_config(const ExperimentConfig& config);

struct TrialResult {
  int index = 0;
  bool rank_preserved = false;
  std::vector<BoundReport> reports;
};

struct PropositionTally {
  int applicable = 0;
  int held = 0;
  double max_abs_slack = 0.0;  // over applicable reports
};

struct RunSummary {
  int reports = 0;
  int applicable = 0;
  int held = 0;       // applicable reports that hold
  int failed = 0;     // applicable reports that do not
  bool all_hold = true;
  double rank_preservation_rate = 0.0;
  std::map<std::string, PropositionTally> per_proposition;
};

struct RunReport {
  std::string mode;  // "verify" | "solve" | "paper-example"
  ExperimentConfig config;
  std::vector<TrialResult> trials;
  RunSummary summary;
  double elapsed_seconds = 0.0;
};

// Every report the instance supports: for each requested order the three
// general perturbation bounds, the product bound, and the residual-scaled
// bound (inapplicable on rank loss); the single-column comparison bound when
// d = 1; and the three identity checks.
std::vector<BoundReport> evaluate_instance(const MmlrProblem& problem,
                                           const MmlrSolution& exact,
                                           const SketchedSolution& sketched,
                                           const SketchOperator& sketch,
                                           const std::vector<SchattenOrder>& p_list,
                                           double slack_tol = default_slack_tol);

RunSummary summarize(const std::vector<TrialResult>& trials);

// Runs config.trials seeded trials (in parallel when OpenMP is enabled;
// results are assembled by trial index, so the report is deterministic).
// Generate mode draws A with i.i.d. standard normal entries (redrawn in the
// improbable event of rank deficiency), X0 and N likewise, and sets
// B = A*X0 + noise*N. Files mode loads A and B once and sketches per trial.
RunReport cmd_verify(const ExperimentConfig& config);

// Solve configuration: always reads A and B from files; sketches either from
// an explicit matrix file or from a generated operator when c > 0.
struct SolveConfig {
  std::string a_path;
  std::string b_path;
  std::string sketch_path;
  SketchKind sketch_kind = SketchKind::sample_without_replacement;
  int c = 0;  // 0 = exact solve only (unless sketch_path is given)
  std::uint64_t seed = 42;
  std::vector<SchattenOrder> p_list;
  double rank_tol = -1.0;
  double slack_tol = default_slack_tol;
  std::string out_prefix;  // when nonempty, matrices and norms are written
};

// Solves the problem, writes <prefix>_xhat.mtx (and <prefix>_xtilde.mtx plus
// verification reports when a sketch is involved) and <prefix>_norms.json.
// The returned report carries the norms as informational "solve:*" entries.
RunReport cmd_solve(const SolveConfig& config);

// Serialization with stable key order; non-finite numbers are emitted as the
// strings "inf"/"-inf"/"nan". Timing lives under the single "timing" key so
// byte-level comparisons can exclude it.
std::string report_to_json(const RunReport& report);
std::string summary_to_csv(const RunReport& report);

}  // namespace mmlr
