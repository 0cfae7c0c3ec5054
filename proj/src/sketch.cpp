#include "mmlr/sketch.hpp"

#include <cmath>
#include <numeric>

#include "mmlr/errors.hpp"
#include "mmlr/rng.hpp"

namespace mmlr {

namespace {

void check_sizes(int c, int m, int n) {
  if (n < 1) throw DimensionError("sketch: n must be >= 1, got " + std::to_string(n));
  if (c < n || c > m) {
    throw DimensionError("sketch: need n <= c <= m, got c=" + std::to_string(c) +
                         ", n=" + std::to_string(n) + ", m=" + std::to_string(m));
  }
}

}  // namespace

std::string kind_str(SketchKind kind) {
  switch (kind) {
    case SketchKind::sample_without_replacement:
      return "sample_without_replacement";
    case SketchKind::sample_with_replacement:
      return "sample_with_replacement";
    case SketchKind::gaussian:
      return "gaussian";
    case SketchKind::user_supplied:
      return "user_supplied";
  }
  return "unknown";
}

SketchOperator SketchOperator::sample_without_replacement(int c, int m, int n,
                                                          std::uint64_t seed) {
  check_sizes(c, m, n);
  Rng rng(seed);
  std::vector<int> idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), 0);
  DenseMatrix s(c, m);
  for (int k = 0; k < c; ++k) {
    const int j = k + rng.uniform_below(m - k);
    std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(j)]);
    s(k, idx[static_cast<std::size_t>(k)]) = 1.0;
  }
  return SketchOperator(std::move(s), n, SketchKind::sample_without_replacement, seed);
}

SketchOperator SketchOperator::sample_with_replacement(int c, int m, int n,
                                                       std::uint64_t seed,
                                                       const std::vector<double>& weights) {
  check_sizes(c, m, n);
  std::vector<double> w = weights;
  if (w.empty()) {
    w.assign(static_cast<std::size_t>(m), 1.0 / static_cast<double>(m));
  }
  if (static_cast<int>(w.size()) != m) {
    throw InvalidWeights("sampling weights: expected " + std::to_string(m) +
                         " entries, got " + std::to_string(w.size()));
  }
  double total = 0.0;
  for (double v : w) {
    if (!(v > 0.0)) throw InvalidWeights("sampling weights must be positive");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidWeights("sampling weights must sum to 1, got " + std::to_string(total));
  }
  Rng rng(seed);
  DenseMatrix s(c, m);
  for (int k = 0; k < c; ++k) {
    const double u = rng.uniform01();
    double acc = 0.0;
    int pick = m - 1;
    for (int i = 0; i < m; ++i) {
      acc += w[static_cast<std::size_t>(i)];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    s(k, pick) = 1.0 / std::sqrt(static_cast<double>(c) * w[static_cast<std::size_t>(pick)]);
  }
  return SketchOperator(std::move(s), n, SketchKind::sample_with_replacement, seed);
}

SketchOperator SketchOperator::gaussian(int c, int m, int n, std::uint64_t seed) {
  check_sizes(c, m, n);
  Rng rng(seed);
  DenseMatrix s(c, m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(c));
  for (double& v : s.data()) v = scale * rng.normal();
  return SketchOperator(std::move(s), n, SketchKind::gaussian, seed);
}

SketchOperator SketchOperator::from_matrix(const DenseMatrix& s, int n) {
  check_sizes(s.rows(), s.cols(), n);
  return SketchOperator(s, n, SketchKind::user_supplied, 0);
}

DenseMatrix apply(const SketchOperator& s, const DenseMatrix& a) {
  if (a.rows() != s.m()) {
    throw DimensionError("apply: sketch expects " + std::to_string(s.m()) +
                         " rows, matrix has " + std::to_string(a.rows()));
  }
  return multiply(s.matrix(), a);
}

}  // namespace mmlr
