#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmlr/matrix.hpp"

namespace mmlr {

enum class SketchKind {
  sample_without_replacement,
  sample_with_replacement,
  gaussian,
  user_supplied,
};

std::string kind_str(SketchKind kind);

// A c x m row sketch destined for an m x n regression matrix. Constructors
// enforce n <= c <= m so the sketched problem can preserve rank at all.
class SketchOperator {
 public:
  // Rows are c distinct standard basis vectors, uniformly chosen. The
  // resulting S has orthonormal rows (S S^T = I exactly).
  static SketchOperator sample_without_replacement(int c, int m, int n, std::uint64_t seed);

  // Row k is e_i^T / sqrt(c * w_i) with i drawn from the weights
  // (uniform when empty), so E[S^T S] = I.
  static SketchOperator sample_with_replacement(int c, int m, int n, std::uint64_t seed,
                                                const std::vector<double>& weights = {});

  // Entries iid normal with variance 1/c.
  static SketchOperator gaussian(int c, int m, int n, std::uint64_t seed);

  static SketchOperator from_matrix(const DenseMatrix& s, int n);

  const DenseMatrix& matrix() const { return s_; }
  SketchKind kind() const { return kind_; }
  int c() const { return s_.rows(); }
  int m() const { return s_.cols(); }
  int n() const { return n_; }
  std::uint64_t seed() const { return seed_; }

 private:
  SketchOperator(DenseMatrix s, int n, SketchKind kind, std::uint64_t seed)
      : s_(std::move(s)), n_(n), kind_(kind), seed_(seed) {}

  DenseMatrix s_;
  int n_;
  SketchKind kind_;
  std::uint64_t seed_;
};

// S * a; requires a.rows() == s.m().
DenseMatrix apply(const SketchOperator& s, const DenseMatrix& a);

}  // namespace mmlr
