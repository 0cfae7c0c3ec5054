#include "mmlr/factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mmlr/errors.hpp"

namespace mmlr {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxJacobiSweeps = 64;
constexpr double kJacobiTol = 1e-15;

struct Reflector {
  std::vector<double> v;  // length m - k
  double beta = 0.0;
};

// In-place Householder reduction of w (m x n, row-major) to upper
// triangular form; returns one reflector per column.
std::vector<Reflector> householder_reduce(DenseMatrix& w) {
  const int m = w.rows();
  const int n = w.cols();
  std::vector<Reflector> refs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Reflector& ref = refs[static_cast<std::size_t>(k)];
    ref.v.assign(static_cast<std::size_t>(m - k), 0.0);
    double nx = 0.0;
    for (int i = k; i < m; ++i) nx += w(i, k) * w(i, k);
    nx = std::sqrt(nx);
    if (nx == 0.0) {
      ref.beta = 0.0;
      continue;
    }
    const double alpha = w(k, k) >= 0.0 ? -nx : nx;
    double vv = 0.0;
    for (int i = k; i < m; ++i) {
      double vi = w(i, k);
      if (i == k) vi -= alpha;
      ref.v[static_cast<std::size_t>(i - k)] = vi;
      vv += vi * vi;
    }
    ref.beta = vv == 0.0 ? 0.0 : 2.0 / vv;
    w(k, k) = alpha;
    for (int i = k + 1; i < m; ++i) w(i, k) = 0.0;
    const double beta = ref.beta;
    const double* v = ref.v.data();
#pragma omp parallel for schedule(static) \
    if (static_cast<long long>(m - k) * (n - k - 1) > 32768)
    for (int j = k + 1; j < n; ++j) {
      double s = 0.0;
      for (int i = k; i < m; ++i) s += v[i - k] * w(i, j);
      s *= beta;
      for (int i = k; i < m; ++i) w(i, j) -= s * v[i - k];
    }
  }
  return refs;
}

// q = H_0 * ... * H_{n-1} * e, where e holds columns col_begin..col_end-1
// of the m x m identity.
DenseMatrix accumulate_q(const std::vector<Reflector>& refs, int m, int col_begin,
                         int col_end) {
  const int cols = col_end - col_begin;
  DenseMatrix q(m, cols);
  for (int j = 0; j < cols; ++j) q(col_begin + j, j) = 1.0;
  for (int k = static_cast<int>(refs.size()) - 1; k >= 0; --k) {
    const Reflector& ref = refs[static_cast<std::size_t>(k)];
    if (ref.beta == 0.0) continue;
    const double beta = ref.beta;
    const double* v = ref.v.data();
#pragma omp parallel for schedule(static) \
    if (static_cast<long long>(m - k) * cols > 32768)
    for (int j = 0; j < cols; ++j) {
      double s = 0.0;
      for (int i = k; i < m; ++i) s += v[i - k] * q(i, j);
      s *= beta;
      for (int i = k; i < m; ++i) q(i, j) -= s * v[i - k];
    }
  }
  return q;
}

void check_qr_input(const DenseMatrix& a) {
  if (a.rows() < a.cols()) {
    throw DimensionError("qr: need rows >= cols, got " + shape_str(a));
  }
  if (numerical_rank(a) != a.cols()) {
    throw RankDeficient("qr: input " + shape_str(a) + " is column rank deficient");
  }
}

// Flip signs so diag(r) >= 0; the matching thin-q columns flip with it.
void fix_signs(DenseMatrix& q, DenseMatrix& r) {
  const int n = r.rows();
  for (int k = 0; k < n; ++k) {
    if (r(k, k) < 0.0) {
      for (int j = k; j < n; ++j) r(k, j) = -r(k, j);
      for (int i = 0; i < q.rows(); ++i) q(i, k) = -q(i, k);
    }
  }
}

double column_dot(const std::vector<double>& buf, int m, int i, int j) {
  const double* ci = buf.data() + static_cast<std::size_t>(i) * m;
  const double* cj = buf.data() + static_cast<std::size_t>(j) * m;
  double s = 0.0;
  for (int t = 0; t < m; ++t) s += ci[t] * cj[t];
  return s;
}

// One-sided Jacobi on the columns of a tall matrix held column-major.
// Returns false if the sweep limit is hit before convergence.
bool jacobi_orthogonalize(std::vector<double>& w, std::vector<double>* v, int m, int n) {
  // A length-m dot product recomputed from scratch carries rounding of order
  // m*eps relative to the column norms, so a fixed threshold below that floor
  // stalls the sweeps on tall inputs.
  const double tol = std::max(kJacobiTol, static_cast<double>(m) * kEps);
  const double floor2 = tol * tol;
  auto zero_column = [&](int col) {
    double* wc = w.data() + static_cast<std::size_t>(col) * m;
    for (int r = 0; r < m; ++r) wc[r] = 0.0;
  };
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    bool changed = false;
    for (int i = 0; i < n - 1; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double aij = column_dot(w, m, i, j);
        if (aij == 0.0) continue;
        const double aii = column_dot(w, m, i, i);
        const double ajj = column_dot(w, m, j, j);
        // A column whose mass is below the rounding floor of its partner has
        // no resolvable direction of its own; rotating it forever against an
        // exactly parallel partner (e.g. duplicate sampled rows) never
        // quiesces, so drop it at the same level the rank cutoff would.
        if (ajj <= floor2 * aii) {
          zero_column(j);
          changed = true;
          continue;
        }
        if (aii <= floor2 * ajj) {
          zero_column(i);
          changed = true;
          continue;
        }
        if (std::abs(aij) <= tol * std::sqrt(aii * ajj)) continue;
        const double tau = (ajj - aii) / (2.0 * aij);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        double* wi = w.data() + static_cast<std::size_t>(i) * m;
        double* wj = w.data() + static_cast<std::size_t>(j) * m;
        for (int r = 0; r < m; ++r) {
          const double x = wi[r];
          const double y = wj[r];
          wi[r] = c * x - s * y;
          wj[r] = s * x + c * y;
        }
        if (v != nullptr) {
          double* vi = v->data() + static_cast<std::size_t>(i) * n;
          double* vj = v->data() + static_cast<std::size_t>(j) * n;
          for (int r = 0; r < n; ++r) {
            const double x = vi[r];
            const double y = vj[r];
            vi[r] = c * x - s * y;
            vj[r] = s * x + c * y;
          }
        }
        changed = true;
      }
    }
    if (!changed) return true;
  }
  return false;
}

std::vector<double> column_norms(const std::vector<double>& w, int m, int n) {
  std::vector<double> norms(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    norms[static_cast<std::size_t>(j)] = std::sqrt(column_dot(w, m, j, j));
  return norms;
}

std::vector<int> descending_order(const std::vector<double>& values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return values[static_cast<std::size_t>(x)] > values[static_cast<std::size_t>(y)];
  });
  return order;
}

// Replace unusable (numerically zero) left singular directions with unit
// vectors orthogonal to the columns accepted so far.
void complete_column(DenseMatrix& u, int col) {
  const int m = u.rows();
  for (int cand = 0; cand < m; ++cand) {
    std::vector<double> x(static_cast<std::size_t>(m), 0.0);
    x[static_cast<std::size_t>(cand)] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < u.cols(); ++j) {
        if (j == col) continue;
        double dot = 0.0;
        for (int i = 0; i < m; ++i) dot += u(i, j) * x[static_cast<std::size_t>(i)];
        for (int i = 0; i < m; ++i) x[static_cast<std::size_t>(i)] -= dot * u(i, j);
      }
    }
    double nx = 0.0;
    for (double xv : x) nx += xv * xv;
    nx = std::sqrt(nx);
    if (nx > 0.5) {
      for (int i = 0; i < m; ++i) u(i, col) = x[static_cast<std::size_t>(i)] / nx;
      return;
    }
  }
  throw ConvergenceFailure("svd: could not complete an orthonormal basis");
}

}  // namespace

double default_rank_tol(const DenseMatrix& a) {
  return static_cast<double>(std::max(a.rows(), a.cols())) * kEps;
}

ThinQr thin_qr(const DenseMatrix& a) {
  check_qr_input(a);
  DenseMatrix w = a;
  const std::vector<Reflector> refs = householder_reduce(w);
  const int n = a.cols();
  DenseMatrix r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) r(i, j) = w(i, j);
  DenseMatrix q = accumulate_q(refs, a.rows(), 0, n);
  fix_signs(q, r);
  return {std::move(q), std::move(r)};
}

FullQr full_qr(const DenseMatrix& a) {
  check_qr_input(a);
  DenseMatrix w = a;
  const std::vector<Reflector> refs = householder_reduce(w);
  const int m = a.rows();
  const int n = a.cols();
  DenseMatrix r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) r(i, j) = w(i, j);
  DenseMatrix q = accumulate_q(refs, m, 0, n);
  DenseMatrix q_perp = accumulate_q(refs, m, n, m);
  fix_signs(q, r);
  return {std::move(q), std::move(q_perp), std::move(r)};
}

SvdFactors svd(const DenseMatrix& a) {
  if (a.rows() < a.cols()) {
    SvdFactors t = svd(transpose(a));
    return {std::move(t.v), std::move(t.sigma), std::move(t.u)};
  }
  const int m = a.rows();
  const int n = a.cols();
  std::vector<double> w(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      w[static_cast<std::size_t>(j) * m + static_cast<std::size_t>(i)] = a(i, j);
  std::vector<double> v(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(j) * n + j] = 1.0;
  if (!jacobi_orthogonalize(w, &v, m, n)) {
    throw ConvergenceFailure("svd: Jacobi sweeps did not converge");
  }
  const std::vector<double> norms = column_norms(w, m, n);
  const std::vector<int> order = descending_order(norms);
  SvdFactors f;
  f.sigma.resize(static_cast<std::size_t>(n));
  f.u = DenseMatrix(m, n);
  f.v = DenseMatrix(n, n);
  const double sigma_max = n > 0 ? norms[static_cast<std::size_t>(order[0])] : 0.0;
  std::vector<int> pending;
  for (int t = 0; t < n; ++t) {
    const int p = order[static_cast<std::size_t>(t)];
    const double s = norms[static_cast<std::size_t>(p)];
    f.sigma[static_cast<std::size_t>(t)] = s;
    for (int i = 0; i < n; ++i) f.v(i, t) = v[static_cast<std::size_t>(p) * n + i];
    if (s > sigma_max * 1e-306 && s > 0.0) {
      for (int i = 0; i < m; ++i)
        f.u(i, t) = w[static_cast<std::size_t>(p) * m + i] / s;
    } else {
      pending.push_back(t);
    }
  }
  for (int t : pending) complete_column(f.u, t);
  return f;
}

std::vector<double> svd_values(const DenseMatrix& a) {
  const int m = std::max(a.rows(), a.cols());
  const int n = std::min(a.rows(), a.cols());
  if (n == 0) return {};
  std::vector<double> w(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
  const bool wide = a.rows() < a.cols();
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const int col = wide ? i : j;
      const int row = wide ? j : i;
      w[static_cast<std::size_t>(col) * m + static_cast<std::size_t>(row)] = a(i, j);
    }
  if (!jacobi_orthogonalize(w, nullptr, m, n)) {
    throw ConvergenceFailure("svd_values: Jacobi sweeps did not converge");
  }
  std::vector<double> norms = column_norms(w, m, n);
  std::sort(norms.begin(), norms.end(), std::greater<double>());
  return norms;
}

DenseMatrix pinv(const DenseMatrix& a, double rank_tol) {
  DenseMatrix x(a.cols(), a.rows());
  if (a.empty()) return x;
  const SvdFactors f = svd(a);
  const double tol = (rank_tol <= 0.0 ? default_rank_tol(a) : rank_tol);
  const double cutoff = f.sigma.empty() ? 0.0 : tol * f.sigma[0];
  for (std::size_t k = 0; k < f.sigma.size(); ++k) {
    const double s = f.sigma[k];
    if (s <= cutoff || s == 0.0) continue;
    const double inv = 1.0 / s;
    for (int i = 0; i < x.rows(); ++i) {
      const double w = inv * f.v(i, static_cast<int>(k));
      if (w == 0.0) continue;
      for (int j = 0; j < x.cols(); ++j) x(i, j) += w * f.u(j, static_cast<int>(k));
    }
  }
  return x;
}

int numerical_rank(const DenseMatrix& a, double rank_tol) {
  if (a.empty()) return 0;
  const std::vector<double> s = svd_values(a);
  const double tol = (rank_tol <= 0.0 ? default_rank_tol(a) : rank_tol);
  const double cutoff = s.empty() ? 0.0 : tol * s[0];
  int rank = 0;
  for (double v : s)
    if (v > cutoff && v > 0.0) ++rank;
  return rank;
}

double cond2(const DenseMatrix& a) {
  if (a.empty()) throw DimensionError("cond2: empty matrix");
  if (numerical_rank(a) != a.cols()) {
    throw RankDeficient("cond2: input " + shape_str(a) + " is column rank deficient");
  }
  const std::vector<double> s = svd_values(a);
  return s.front() / s[static_cast<std::size_t>(a.cols() - 1)];
}

double operator_norm2(const DenseMatrix& a) {
  if (a.empty()) return 0.0;
  return svd_values(a).front();
}

SymEig sym_eig(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("sym_eig: matrix is not square");
  const int n = a.rows();
  DenseMatrix w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(i, j) = 0.5 * (a(i, j) + a(j, i));
  DenseMatrix v = DenseMatrix::identity(n);
  const double scale = frobenius_entrywise(w);
  const double thresh = scale * kJacobiTol;
  for (int sweep = 0; sweep < kMaxJacobiSweeps + 36; ++sweep) {
    bool changed = false;
    for (int i = 0; i < n - 1; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double aij = w(i, j);
        if (std::abs(aij) <= thresh || aij == 0.0) continue;
        const double theta = (w(j, j) - w(i, i)) / (2.0 * aij);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int k = 0; k < n; ++k) {
          const double x = w(i, k);
          const double y = w(j, k);
          w(i, k) = c * x - s * y;
          w(j, k) = s * x + c * y;
        }
        for (int k = 0; k < n; ++k) {
          const double x = w(k, i);
          const double y = w(k, j);
          w(k, i) = c * x - s * y;
          w(k, j) = s * x + c * y;
        }
        for (int k = 0; k < n; ++k) {
          const double x = v(k, i);
          const double y = v(k, j);
          v(k, i) = c * x - s * y;
          v(k, j) = s * x + c * y;
        }
        changed = true;
      }
    }
    if (!changed) {
      std::vector<double> values(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = w(i, i);
      const std::vector<int> order = descending_order(values);
      SymEig e;
      e.values.resize(static_cast<std::size_t>(n));
      e.vectors = DenseMatrix(n, n);
      for (int t = 0; t < n; ++t) {
        const int p = order[static_cast<std::size_t>(t)];
        e.values[static_cast<std::size_t>(t)] = values[static_cast<std::size_t>(p)];
        for (int i = 0; i < n; ++i) e.vectors(i, t) = v(i, p);
      }
      return e;
    }
  }
  throw ConvergenceFailure("sym_eig: Jacobi sweeps did not converge");
}

DenseMatrix back_substitute(const DenseMatrix& r, const DenseMatrix& y) {
  const int n = r.rows();
  if (r.cols() != n) throw DimensionError("back_substitute: r is not square");
  if (y.rows() != n) {
    throw DimensionError("back_substitute: r " + shape_str(r) + " vs y " + shape_str(y));
  }
  DenseMatrix x(n, y.cols());
  for (int i = n - 1; i >= 0; --i) {
    if (r(i, i) == 0.0) throw RankDeficient("back_substitute: zero diagonal entry");
    for (int j = 0; j < y.cols(); ++j) {
      double s = y(i, j);
      for (int k = i + 1; k < n; ++k) s -= r(i, k) * x(k, j);
      x(i, j) = s / r(i, i);
    }
  }
  return x;
}

}  // namespace mmlr
