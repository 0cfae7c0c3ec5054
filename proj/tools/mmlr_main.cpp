// Command-line driver: seeded batch verification of the perturbation bounds
// and subspace identities, one-off solves over matrix files, and the built-in
// worked example. Exit codes: 0 when every applicable report holds, 1 on
// verification failure, 2 on configuration or I/O errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmlr/errors.hpp"
#include "mmlr/example_case.hpp"
#include "mmlr/verify.hpp"

namespace {

using mmlr::ExperimentConfig;
using mmlr::RunReport;
using mmlr::SchattenOrder;
using mmlr::SketchKind;

SketchKind parse_kind(const std::string& text) {
  if (text == "without") return SketchKind::sample_without_replacement;
  if (text == "with") return SketchKind::sample_with_replacement;
  if (text == "gaussian") return SketchKind::gaussian;
  if (text == "file") return SketchKind::user_supplied;
  throw mmlr::ConfigError("sketch: unknown kind \"" + text +
                          "\" (expected without|with|gaussian|file)");
}

std::vector<SchattenOrder> parse_orders(const std::vector<std::string>& texts) {
  std::vector<SchattenOrder> orders;
  orders.reserve(texts.size());
  for (const std::string& t : texts) orders.push_back(SchattenOrder::parse(t));
  return orders;
}

double parse_rank_tol(const std::string& text) {
  if (text == "auto") return -1.0;
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != text.size() || !(value > 0.0)) {
    throw mmlr::ConfigError("rank-tol: expected \"auto\" or a positive number, got \"" +
                            text + "\"");
  }
  return value;
}

// Writes or prints the report in the chosen format and returns the exit code
// implied by its summary.
int emit_report(const RunReport& report, const std::string& out_path,
                const std::string& format) {
  const std::string body =
      format == "csv" ? summary_to_csv(report) : report_to_json(report);
  if (out_path.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw mmlr::IoError("cannot open \"" + out_path + "\" for writing");
    out << body;
    if (!out) throw mmlr::IoError("failed to write \"" + out_path + "\"");
    std::fprintf(stderr, "report written to %s\n", out_path.c_str());
  }
  return report.summary.all_hold ? 0 : 1;
}

void print_solve_norms(const RunReport& report) {
  for (const mmlr::TrialResult& trial : report.trials) {
    for (const mmlr::BoundReport& r : trial.reports) {
      if (r.proposition_id.rfind("solve:", 0) != 0) continue;
      const std::string label = r.proposition_id.substr(6);
      std::printf("%s (p=%s): %.17g\n", label.c_str(),
                  r.p.has_value() ? r.p->str().c_str() : "-", r.lhs);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Row-sketched multivariate regression: solver and bound verifier"};
  app.require_subcommand(1);

  // Shared option state; each subcommand registers the flags it honors.
  int m = 200, n = 10, d = 5, c = 60, trials = 10;
  std::uint64_t seed = 42;
  std::string sketch = "without";
  std::vector<std::string> p_texts = {"1", "2", "inf"};
  std::string rank_tol_text = "auto";
  double angle_tol = mmlr::default_angle_tol;
  double slack_tol = mmlr::default_slack_tol;
  double noise = 1e-2;
  std::string a_path, b_path, sketch_file, out_path;
  std::string format = "json";

  CLI::App* verify = app.add_subcommand(
      "verify", "Run seeded trials and check every applicable bound and identity");
  verify->add_option("--m", m, "Rows of A (generate mode)");
  verify->add_option("--n", n, "Columns of A (generate mode)");
  verify->add_option("--d", d, "Columns of B (generate mode)");
  verify->add_option("--c", c, "Sketch rows");
  verify->add_option("--sketch", sketch, "Sketch kind: without|with|gaussian|file");
  verify->add_option("--seed", seed, "Root seed; trials derive their own streams");
  verify->add_option("--trials", trials, "Number of trials");
  verify->add_option("--p", p_texts, "Schatten orders (>= 1 or inf)")->delimiter(',');
  verify->add_option("--rank-tol", rank_tol_text,
                     "Relative rank cutoff, or \"auto\" for the per-matrix default");
  verify->add_option("--angle-tol", angle_tol,
                     "Intersection angle threshold in radians, in (0, pi/4)");
  verify->add_option("--slack-tol", slack_tol,
                     "Relative slack tolerance for holds decisions");
  verify->add_option("--noise", noise, "Residual scale of generated problems");
  verify->add_option("--a", a_path, "Matrix file for A (switches to files mode)");
  verify->add_option("--b", b_path, "Matrix file for B (switches to files mode)");
  verify->add_option("--sketch-file", sketch_file,
                     "Matrix file for S (with --sketch file)");
  verify->add_option("--out", out_path, "Write the report here instead of stdout");
  verify->add_option("--format", format, "Report format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* solve = app.add_subcommand(
      "solve", "Solve min ||AX - B||_p from matrix files, optionally sketched");
  solve->add_option("--a", a_path, "Matrix file for A")->required();
  solve->add_option("--b", b_path, "Matrix file for B")->required();
  solve->add_option("--sketch", sketch, "Sketch kind: without|with|gaussian|file");
  solve->add_option("--sketch-file", sketch_file, "Matrix file for S");
  int solve_c = 0;
  solve->add_option("--c", solve_c, "Sketch rows (0 = exact solve only)");
  solve->add_option("--seed", seed, "Seed for a generated sketch");
  solve->add_option("--p", p_texts, "Schatten orders (>= 1 or inf)")->delimiter(',');
  solve->add_option("--rank-tol", rank_tol_text,
                    "Relative rank cutoff, or \"auto\" for the per-matrix default");
  solve->add_option("--slack-tol", slack_tol,
                    "Relative slack tolerance for holds decisions");
  solve->add_option("--out", out_path,
                    "Output prefix: writes <out>_xhat.mtx, <out>_xtilde.mtx, "
                    "<out>_norms.json, <out>_report.json|csv");
  solve->add_option("--format", format, "Report format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* example = app.add_subcommand(
      "paper-example", "Verify the built-in worked example against closed forms");
  example->add_option("--angle-tol", angle_tol,
                      "Intersection angle threshold in radians, in (0, pi/4)");
  example->add_option("--out", out_path, "Write the report here instead of stdout");
  example->add_option("--format", format, "Report format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit cleanly; bad flags are config errors
  }

  try {
    if (verify->parsed()) {
      ExperimentConfig config;
      config.m = m;
      config.n = n;
      config.d = d;
      config.c = c;
      config.sketch_kind = parse_kind(sketch);
      config.seed = seed;
      config.trials = trials;
      config.p_list = parse_orders(p_texts);
      config.rank_tol = parse_rank_tol(rank_tol_text);
      config.angle_tol = angle_tol;
      config.slack_tol = slack_tol;
      config.noise = noise;
      if (!a_path.empty() || !b_path.empty()) {
        config.problem_source = mmlr::ProblemSource::files;
        config.a_path = a_path;
        config.b_path = b_path;
      }
      config.sketch_path = sketch_file;
      return emit_report(mmlr::cmd_verify(config), out_path, format);
    }

    if (solve->parsed()) {
      mmlr::SolveConfig config;
      config.a_path = a_path;
      config.b_path = b_path;
      config.sketch_path = sketch_file;
      config.sketch_kind = parse_kind(sketch);
      config.c = sketch_file.empty() ? solve_c : 0;
      config.seed = seed;
      config.p_list = parse_orders(p_texts);
      config.rank_tol = parse_rank_tol(rank_tol_text);
      config.slack_tol = slack_tol;
      config.out_prefix = out_path;
      const RunReport report = mmlr::cmd_solve(config);
      print_solve_norms(report);
      if (!out_path.empty()) {
        const std::string report_path =
            out_path + (format == "csv" ? "_report.csv" : "_report.json");
        std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
        if (!out) throw mmlr::IoError("cannot open \"" + report_path + "\" for writing");
        out << (format == "csv" ? summary_to_csv(report) : report_to_json(report));
        if (!out) throw mmlr::IoError("failed to write \"" + report_path + "\"");
      }
      return report.summary.all_hold ? 0 : 1;
    }

    // paper-example
    return emit_report(mmlr::cmd_paper_example(angle_tol), out_path, format);
  } catch (const mmlr::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
}
