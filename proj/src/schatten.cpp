#include "mmlr/schatten.hpp"

#include <cmath>
#include <cstdio>

#include "mmlr/errors.hpp"
#include "mmlr/factor.hpp"

namespace mmlr {

SchattenOrder SchattenOrder::finite(double p) {
  if (!std::isfinite(p) || p < 1.0) {
    throw InvalidOrder("schatten order must be finite and >= 1, got " + std::to_string(p));
  }
  return SchattenOrder(p, false);
}

SchattenOrder SchattenOrder::infinity() { return SchattenOrder(0.0, true); }

SchattenOrder SchattenOrder::parse(const std::string& text) {
  if (text == "inf") return infinity();
  std::size_t pos = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw InvalidOrder("cannot parse schatten order '" + text + "'");
  }
  if (pos != text.size()) {
    throw InvalidOrder("cannot parse schatten order '" + text + "'");
  }
  return finite(p);
}

double SchattenOrder::value() const {
  if (infinite_) throw InvalidOrder("value() called on the infinite order");
  return p_;
}

std::string SchattenOrder::str() const {
  if (infinite_) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", p_);
  return buf;
}

double schatten_from_sigma(const std::vector<double>& sigma, const SchattenOrder& p,
                           double zero_cutoff) {
  double sigma_max = 0.0;
  for (double s : sigma) sigma_max = std::max(sigma_max, s);
  if (sigma_max <= 0.0) return 0.0;
  if (p.is_infinite()) return sigma_max;
  const double order = p.value();
  double sum = 0.0;
  for (double s : sigma) {
    if (s <= zero_cutoff) continue;
    sum += std::pow(s / sigma_max, order);
  }
  return sigma_max * std::pow(sum, 1.0 / order);
}

double schatten_norm(const DenseMatrix& a, const SchattenOrder& p) {
  if (a.empty()) return 0.0;
  const std::vector<double> sigma = svd_values(a);
  const double sigma_max = sigma.empty() ? 0.0 : sigma.front();
  return schatten_from_sigma(sigma, p, default_rank_tol(a) * sigma_max);
}

}  // namespace mmlr
