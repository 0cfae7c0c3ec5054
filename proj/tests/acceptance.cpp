// Acceptance gate: exercises the seven acceptance criteria end to end and
// prints exactly one PASS/FAIL line per criterion. Takes the path to the
// command-line binary as argv[1] (used for runtime and exit-code checks).

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mmlr/errors.hpp"
#include "mmlr/example_case.hpp"
#include "mmlr/factor.hpp"
#include "mmlr/geometry.hpp"
#include "mmlr/matrix.hpp"
#include "mmlr/rng.hpp"
#include "mmlr/schatten.hpp"
#include "mmlr/sketch.hpp"
#include "mmlr/solve.hpp"
#include "mmlr/verify.hpp"

using namespace mmlr;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

DenseMatrix random_matrix(Rng& rng, int rows, int cols) {
  DenseMatrix a(rows, cols);
  for (double& v : a.data()) v = rng.normal();
  return a;
}

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string strip_timing(const std::string& text) {
  std::string out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(start, end - start);
    if (line.find("elapsed_seconds") == std::string::npos) {
      out += line;
      out += '\n';
    }
    start = end + 1;
  }
  return out;
}

SketchOperator make_kind(int which, int c, int m, int n, std::uint64_t seed, Rng& rng) {
  switch (which % 4) {
    case 0:
      return SketchOperator::sample_without_replacement(c, m, n, seed);
    case 1:
      return SketchOperator::sample_with_replacement(c, m, n, seed);
    case 2:
      return SketchOperator::gaussian(c, m, n, seed);
    default:
      return SketchOperator::from_matrix(random_matrix(rng, c, m), n);
  }
}

// ---------------------------------------------------------------------------
// 1. Built-in example: every closed-form check at 1e-12 / 1e-10, CLI < 1 s.
bool criterion1(const std::string& binary) {
  const RunReport report = cmd_paper_example();

  bool ok = report.summary.all_hold && report.summary.failed == 0;
  int checks = 0;
  double max_slack = 0.0;
  for (const BoundReport& r : report.trials.at(0).reports) {
    ++checks;
    ok = ok && r.holds;
    if (r.proposition_id.rfind("example:dim", 0) != 0) {
      max_slack = std::max(max_slack, r.slack);
    }
  }
  ok = ok && checks >= 17;

  const auto cli_start = std::chrono::steady_clock::now();
  const int code =
      run_command(binary + " paper-example --out /tmp/acc_example.json 2>/dev/null");
  const double cli_seconds = seconds_since(cli_start);
  ok = ok && code == 0 && cli_seconds < 1.0;

  std::printf("%s 1. built-in example reproduction: %d checks, max gap %.2e, cli %.2fs "
              "(exit %d)\n",
              ok ? "[PASS]" : "[FAIL]", checks, max_slack, cli_seconds, code);
  return ok;
}

// ---------------------------------------------------------------------------
// 2. Projector-difference identity on the example and 200 random
//    rank-preserving instances (m <= 400, n <= 20), gap <= 1e-8*max(1, tan).
bool criterion2() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;

  const RunReport example = cmd_paper_example();
  const BoundReport* proj = nullptr;
  for (const BoundReport& r : example.trials.at(0).reports) {
    if (r.proposition_id == "example:proj-diff-norm") proj = &r;
  }
  ok = ok && proj != nullptr && proj->holds && proj->rhs == 1.0;

  Rng rng(202601);
  int done = 0;
  int redraws = 0;
  double max_rel_gap = 0.0;
  while (done < 200 && redraws < 2000) {
    const int m = 20 + rng.uniform_below(381);            // [20, 400]
    const int n = 2 + rng.uniform_below(std::min(19, m - 1));  // [2, 20]
    const int c = std::min(m, n + rng.uniform_below(std::min(m - n + 1, 140)));
    const DenseMatrix a = random_matrix(rng, m, n);
    Rng sketch_rng(derive_seed(202601, static_cast<std::uint64_t>(done * 7 + redraws)));
    const SketchOperator s =
        make_kind(done % 3, c, m, n, sketch_rng.next_u64(), sketch_rng);
    const FullQr fq = full_qr(a);
    if (!preserves_rank(s, fq.q)) {
      ++redraws;
      continue;
    }
    const double pd = projector_difference_norm2(a, s);
    const SubspaceBasis z = z_subspace(s, fq);
    const double tan1 =
        principal_angles(z, SubspaceBasis{fq.q}).tangents.front();
    const double rel_gap = std::abs(pd - tan1) / std::max(1.0, tan1);
    max_rel_gap = std::max(max_rel_gap, rel_gap);
    if (rel_gap > 1e-8) ok = false;
    ++done;
  }
  ok = ok && done == 200;
  const double elapsed = seconds_since(start);
  ok = ok && elapsed < 30.0;

  std::printf("%s 2. projector-difference identity: example value 1, %d instances, "
              "max relative gap %.2e, %.1fs\n",
              ok ? "[PASS]" : "[FAIL]", done, max_rel_gap, elapsed);
  return ok;
}

// ---------------------------------------------------------------------------
// 3. Tangent identities: 200 orthonormal-row sketches for the norm identity
//    (with symbolic infinity on rank loss), 200 rank-preserving sketches for
//    the elementwise identity.
bool criterion3() {
  bool ok = true;
  Rng rng(202602);

  // Part A: norm identity for orthonormal-row sketches.
  int done_a = 0;
  int rank_loss_seen = 0;
  double max_gap_a = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int m = 12 + rng.uniform_below(60);
    const int n = 2 + rng.uniform_below(std::min(6, m - 5));
    const bool force_rank_loss = i % 20 == 19;
    const int c = std::max(n, 4) + rng.uniform_below(m / 2);

    DenseMatrix a = random_matrix(rng, m, n);
    const FullQr fq = full_qr(a);

    SketchOperator s = SketchOperator::sample_without_replacement(
        std::min(c, m), m, n, rng.next_u64());
    if (force_rank_loss) {
      // Rows spanning directions orthogonal to the range: SQ = 0 exactly.
      const int rows = std::min(std::max(n, 2), m - n);
      DenseMatrix s_mat(rows, m);
      for (int r = 0; r < rows; ++r) {
        for (int col = 0; col < m; ++col) s_mat(r, col) = fq.q_perp(col, r);
      }
      if (s_mat.rows() < n) continue;  // cannot force rank loss; skip instance
      s = SketchOperator::from_matrix(s_mat, n);
    } else if (i % 2 == 1) {
      // Dense orthonormal rows from a QR factor.
      const DenseMatrix dense =
          transpose(thin_qr(random_matrix(rng, m, std::min(c, m))).q);
      s = SketchOperator::from_matrix(dense, n);
    }

    const DenseMatrix b = random_matrix(rng, m, 1);
    const MmlrProblem problem = make_problem(a, b);
    const MmlrSolution exact = solve_exact(problem);
    const SketchedSolution sketched = solve_sketched(problem, s);
    const BoundContext ctx = make_context(problem, exact, sketched, s);
    if (!ctx.s_orthonormal_rows) {
      ok = false;  // every instance here is constructed with orthonormal rows
      continue;
    }
    const std::vector<BoundReport> identities = eval_identity_checks(ctx);
    const BoundReport& p51 = identities.front();
    ok = ok && p51.proposition_id == "P5.1" && p51.applicable && p51.holds;
    if (force_rank_loss) {
      ok = ok && std::isinf(p51.lhs) && std::isinf(p51.rhs);
      ++rank_loss_seen;
    } else if (ctx.rank_preserved) {
      ok = ok && std::abs(p51.lhs - p51.rhs) <= 1e-8;
      max_gap_a = std::max(max_gap_a, std::abs(p51.lhs - p51.rhs));
    }
    ++done_a;
  }
  ok = ok && done_a >= 195 && rank_loss_seen >= 8;

  // Part B: elementwise identity for rank-preserving sketches.
  int done_b = 0;
  int redraws = 0;
  double max_gap_b = 0.0;
  while (done_b < 200 && redraws < 2000) {
    const int m = 12 + rng.uniform_below(80);
    const int n = 2 + rng.uniform_below(std::min(7, m - 5));
    const int c = n + rng.uniform_below(m - n + 1);
    const DenseMatrix a = random_matrix(rng, m, n);
    const FullQr fq = full_qr(a);
    Rng sketch_rng(rng.next_u64());
    const SketchOperator s = make_kind(done_b % 4, c, m, n, sketch_rng.next_u64(), sketch_rng);
    if (!preserves_rank(s, fq.q)) {
      ++redraws;
      continue;
    }
    const std::vector<double> t_sigma = svd_values(tangent_matrix(fq, s));
    const std::vector<double>& tangents =
        principal_angles(z_subspace(s, fq), SubspaceBasis{fq.q}).tangents;
    for (std::size_t k = 0; k < tangents.size(); ++k) {
      if (std::isinf(tangents[k])) {
        ok = false;  // rank preservation promises finite tangents
        continue;
      }
      const double sv = k < t_sigma.size() ? t_sigma[k] : 0.0;
      const double gap = std::abs(sv - tangents[k]);
      max_gap_b = std::max(max_gap_b, gap);
      if (gap > 1e-8 * std::max(1.0, tangents[k])) ok = false;
    }
    ++done_b;
  }
  ok = ok && done_b == 200;

  std::printf("%s 3. tangent identities: %d norm-identity instances (%d with symbolic "
              "infinity), %d elementwise instances, max gaps %.2e / %.2e\n",
              ok ? "[PASS]" : "[FAIL]", done_a, rank_loss_seen, done_b, max_gap_a,
              max_gap_b);
  return ok;
}

// ---------------------------------------------------------------------------
// 4. Bound suites over >= 500 randomized instances, every applicable report
//    with slack >= -1e-9*max(1, rhs), under 2 minutes.
bool criterion4() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<SchattenOrder> p_list = {
      SchattenOrder::finite(1.0), SchattenOrder::finite(1.5), SchattenOrder::finite(2.0),
      SchattenOrder::finite(3.0), SchattenOrder::infinity()};
  const double noises[] = {0.0, 1e-6, 1e-2, 1.0};

  bool ok = true;
  Rng rng(202603);
  int instances = 0;
  int applicable = 0;
  double min_norm_slack = 0.0;
  for (int i = 0; i < 540; ++i) {
    const int m = 12 + rng.uniform_below(109);  // [12, 120]
    const int n = 1 + rng.uniform_below(std::min(10, m / 2));
    const int d = 1 + rng.uniform_below(6);
    const int c = n + rng.uniform_below(m - n + 1);
    const DenseMatrix a = random_matrix(rng, m, n);
    const DenseMatrix x0 = random_matrix(rng, n, d);
    DenseMatrix b = multiply(a, x0);
    const double noise = noises[i % 4];
    if (noise > 0.0) b = add(b, scale(random_matrix(rng, m, d), noise));

    Rng sketch_rng(rng.next_u64());
    const SketchOperator s = make_kind(i, c, m, n, sketch_rng.next_u64(), sketch_rng);
    const MmlrProblem problem = make_problem(a, b);
    const MmlrSolution exact = solve_exact(problem);
    const SketchedSolution sketched = solve_sketched(problem, s);
    const std::vector<BoundReport> reports =
        evaluate_instance(problem, exact, sketched, s, p_list, 1e-9);
    for (const BoundReport& r : reports) {
      if (!r.applicable) continue;
      if (r.proposition_id.rfind("P3.1", 0) != 0 && r.proposition_id != "P4.1" &&
          r.proposition_id != "L2.1" && r.proposition_id != "Drineas-L1") {
        continue;
      }
      ++applicable;
      const double norm_slack = r.slack / std::max(1.0, r.rhs);
      min_norm_slack = std::min(min_norm_slack, norm_slack);
      if (!(r.slack >= -1e-9 * std::max(1.0, r.rhs)) || !r.holds) ok = false;
    }
    ++instances;
  }
  const double elapsed = seconds_since(start);
  ok = ok && instances >= 500 && applicable >= 5000 && elapsed < 120.0;

  std::printf("%s 4. bound suites: %d instances, %d applicable reports, min "
              "normalized slack %.2e, %.1fs\n",
              ok ? "[PASS]" : "[FAIL]", instances, applicable, min_norm_slack, elapsed);
  return ok;
}

// ---------------------------------------------------------------------------
// 5. Optimality of the minimizers: 200 instances x 200 perturbations, exact
//    and sketched, with a single solution winning for every order at once.
bool criterion5() {
  const std::vector<SchattenOrder> p_list = {
      SchattenOrder::finite(1.0), SchattenOrder::finite(1.5), SchattenOrder::finite(2.0),
      SchattenOrder::finite(3.0), SchattenOrder::infinity()};
  const double deltas[] = {1e-4, 1e-1, 1.0, 1e2};

  bool ok = true;
  Rng rng(202604);
  int instances = 0;
  long perturbations = 0;
  double worst_violation = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int m = 8 + rng.uniform_below(33);
    const int n = 1 + rng.uniform_below(std::min(6, m / 2));
    const int d = 1 + rng.uniform_below(4);
    const int c = n + rng.uniform_below(m - n + 1);
    const DenseMatrix a = random_matrix(rng, m, n);
    DenseMatrix b = multiply(a, random_matrix(rng, n, d));
    if (i % 3 != 0) b = add(b, scale(random_matrix(rng, m, d), i % 3 == 1 ? 1e-2 : 1.0));

    const MmlrProblem problem = make_problem(a, b);
    const MmlrSolution exact = solve_exact(problem);
    Rng sketch_rng(rng.next_u64());
    const SketchOperator s = make_kind(i % 2 == 0 ? 0 : 2, c, m, n,
                                       sketch_rng.next_u64(), sketch_rng);
    const SketchedSolution sketched = solve_sketched(problem, s);
    const DenseMatrix sa = apply(s, a);
    const DenseMatrix s_r_tilde = apply(s, sketched.r_tilde);

    // Base norms for every order from one spectrum per matrix.
    const std::vector<double> sig_exact = svd_values(exact.r_hat);
    const std::vector<double> sig_sk = svd_values(s_r_tilde);
    const double cut_exact =
        sig_exact.empty() ? 0.0 : default_rank_tol(exact.r_hat) * sig_exact.front();
    const double cut_sk =
        sig_sk.empty() ? 0.0 : default_rank_tol(s_r_tilde) * sig_sk.front();

    for (int j = 0; j < 200; ++j) {
      const DenseMatrix delta = scale(random_matrix(rng, n, d), deltas[j % 4]);
      const DenseMatrix pert_exact = subtract(exact.r_hat, multiply(a, delta));
      const DenseMatrix pert_sk = subtract(s_r_tilde, multiply(sa, delta));
      const std::vector<double> sig_pe = svd_values(pert_exact);
      const std::vector<double> sig_ps = svd_values(pert_sk);
      const double cut_pe =
          sig_pe.empty() ? 0.0 : default_rank_tol(pert_exact) * sig_pe.front();
      const double cut_ps =
          sig_ps.empty() ? 0.0 : default_rank_tol(pert_sk) * sig_ps.front();
      for (const SchattenOrder& p : p_list) {
        const double gap_exact = schatten_from_sigma(sig_pe, p, cut_pe) -
                                 schatten_from_sigma(sig_exact, p, cut_exact);
        const double gap_sk = schatten_from_sigma(sig_ps, p, cut_ps) -
                              schatten_from_sigma(sig_sk, p, cut_sk);
        worst_violation = std::min(worst_violation, std::min(gap_exact, gap_sk));
        if (gap_exact < -1e-10 || gap_sk < -1e-10) ok = false;
      }
      ++perturbations;
    }
    ++instances;
  }
  ok = ok && instances == 200 && perturbations == 200L * 200L;

  std::printf("%s 5. minimizer optimality: %d instances, %ld perturbations, worst "
              "norm decrease %.2e\n",
              ok ? "[PASS]" : "[FAIL]", instances, perturbations, worst_violation);
  return ok;
}

// ---------------------------------------------------------------------------
// 6. Factorization oracles: Penrose conditions, QR reconstruction and
//    orthogonality, Schatten p=2 against the entrywise Frobenius norm.
bool criterion6() {
  bool ok = true;
  Rng rng(202605);
  double worst_penrose = 0.0;
  double worst_qr = 0.0;
  double worst_schatten = 0.0;

  auto rel = [](double gap, double scale) { return gap / std::max(1.0, scale); };

  for (int i = 0; i < 60; ++i) {
    const int m = 3 + rng.uniform_below(40);
    const int n = 1 + rng.uniform_below(20);
    DenseMatrix a;
    const bool rank_deficient = i % 3 == 0 && std::min(m, n) > 2;
    if (rank_deficient) {
      const int r = 1 + rng.uniform_below(std::min(m, n) - 1);
      a = multiply(random_matrix(rng, m, r), random_matrix(rng, r, n));
    } else {
      a = random_matrix(rng, m, n);
    }
    if (i % 5 == 0) a = scale(a, 1e3);
    if (i % 5 == 1) a = scale(a, 1e-3);

    const DenseMatrix x = pinv(a);
    const DenseMatrix ax = multiply(a, x);
    const DenseMatrix xa = multiply(x, a);
    const double checks[] = {
        rel(frobenius_entrywise(subtract(multiply(ax, a), a)), frobenius_entrywise(a)),
        rel(frobenius_entrywise(subtract(multiply(xa, x), x)), frobenius_entrywise(x)),
        rel(max_abs_diff(transpose(ax), ax), max_abs(ax)),
        rel(max_abs_diff(transpose(xa), xa), max_abs(xa)),
    };
    for (double chk : checks) {
      worst_penrose = std::max(worst_penrose, chk);
      if (chk > 1e-10) ok = false;
    }

    if (m >= n && !rank_deficient) {
      const ThinQr qr = thin_qr(a);
      const double recon = rel(frobenius_entrywise(subtract(multiply(qr.q, qr.r), a)),
                               frobenius_entrywise(a));
      const double orth = frobenius_entrywise(
          subtract(multiply_ta(qr.q, qr.q), DenseMatrix::identity(n)));
      worst_qr = std::max(worst_qr, std::max(recon, orth));
      if (recon > 1e-12 || orth > 1e-12) ok = false;
    }

    const double fro_gap = rel(std::abs(schatten_norm(a, SchattenOrder::finite(2.0)) -
                                        frobenius_entrywise(a)),
                               frobenius_entrywise(a));
    worst_schatten = std::max(worst_schatten, fro_gap);
    if (fro_gap > 1e-12) ok = false;
  }

  std::printf("%s 6. factorization oracles: worst relative gaps penrose %.2e, qr %.2e, "
              "schatten-vs-frobenius %.2e\n",
              ok ? "[PASS]" : "[FAIL]", worst_penrose, worst_qr, worst_schatten);
  return ok;
}

// ---------------------------------------------------------------------------
// 7. Determinism and the exit-code contract through the real binary.
bool criterion7(const std::string& binary) {
  bool ok = true;

  const std::string common =
      " verify --m 60 --n 6 --d 2 --c 25 --trials 3 --seed 7 --p 1,2,inf";
  const int first =
      run_command(binary + common + " --out /tmp/acc_run1.json 2>/dev/null");
  const int second =
      run_command(binary + common + " --out /tmp/acc_run2.json 2>/dev/null");
  ok = ok && first == 0 && second == 0;

  const std::string run1 = strip_timing(slurp("/tmp/acc_run1.json"));
  const std::string run2 = strip_timing(slurp("/tmp/acc_run2.json"));
  const bool identical = !run1.empty() && run1 == run2;
  ok = ok && identical;

  const int failing = run_command(binary + common +
                                  " --slack-tol 1e-18 --out /tmp/acc_run3.json "
                                  "2>/dev/null");
  const int config_err =
      run_command(binary + " verify --c 3 --n 5 >/dev/null 2>&1");
  const int io_err = run_command(binary +
                                 " solve --a /tmp/acc_missing.mtx --b /tmp/acc_missing.mtx"
                                 " >/dev/null 2>&1");
  ok = ok && failing == 1 && config_err == 2 && io_err == 2;

  std::printf("%s 7. determinism and exit codes: reports byte-identical: %s; exits "
              "ok/fail/config/io = %d/%d/%d/%d\n",
              ok ? "[PASS]" : "[FAIL]", identical ? "yes" : "no", first, failing,
              config_err, io_err);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-mmlr-binary>\n", argv[0]);
    return 2;
  }
  const std::string binary = argv[1];

  const auto start = std::chrono::steady_clock::now();
  int failures = 0;
  failures += criterion1(binary) ? 0 : 1;
  failures += criterion2() ? 0 : 1;
  failures += criterion3() ? 0 : 1;
  failures += criterion4() ? 0 : 1;
  failures += criterion5() ? 0 : 1;
  failures += criterion6() ? 0 : 1;
  failures += criterion7(binary) ? 0 : 1;

  std::printf("\n%d/7 criteria passed in %.1fs\n", 7 - failures,
              seconds_since(start));
  return failures == 0 ? 0 : 1;
}
