#pragma once

#include <string>
#include <vector>

#include "mmlr/matrix.hpp"

namespace mmlr {

// Order of a Schatten norm. p = inf is a distinguished state rather
// than a large float, so reports can treat it symbolically.
class SchattenOrder {
 public:
  static SchattenOrder finite(double p);
  static SchattenOrder infinity();
  // Accepts "inf" or a decimal number >= 1.
  static SchattenOrder parse(const std::string& text);

  bool is_infinite() const { return infinite_; }
  double value() const;
  std::string str() const;

  bool operator==(const SchattenOrder& o) const {
    return infinite_ == o.infinite_ && (infinite_ || p_ == o.p_);
  }

 private:
  SchattenOrder(double p, bool infinite) : p_(p), infinite_(infinite) {}

  double p_;
  bool infinite_;
};

// (sum sigma_i^p)^(1/p), or sigma_max for p = inf. Singular values at or
// below the matrix's default rank tolerance times sigma_max are dropped
// so that noise-level values cannot dominate large p sums.
double schatten_norm(const DenseMatrix& a, const SchattenOrder& p);

// Same evaluation from a precomputed spectrum (sorted nonincreasing);
// zero_cutoff plays the role of rank_tol * sigma_max.
double schatten_from_sigma(const std::vector<double>& sigma, const SchattenOrder& p,
                           double zero_cutoff);

}  // namespace mmlr
