#include "mmlr/matrix.hpp"

#include <cmath>
#include <cstdlib>

#include "mmlr/errors.hpp"
#include "mmlr/kernels.hpp"

namespace mmlr {

namespace {

void check_dims(int rows, int cols) {
  if (rows < 0 || cols < 0) {
    throw DimensionError("matrix dimensions must be nonnegative, got " +
                         std::to_string(rows) + " x " + std::to_string(cols));
  }
}

void check_finite(const std::vector<double>& data) {
  for (double v : data) {
    if (!std::isfinite(v)) throw InvalidValue("matrix entry is not finite");
  }
}

void check_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shapes " + shape_str(a) + " and " +
                         shape_str(b) + " differ");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  check_dims(rows, cols);
  data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
}

DenseMatrix::DenseMatrix(int rows, int cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  check_dims(rows, cols);
  if (data_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw DimensionError("matrix data size does not match " + shape_str(*this));
  }
  check_finite(data_);
}

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = 1.0;
  return a;
}

DenseMatrix DenseMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const int m = static_cast<int>(rows.size());
  const int n = m == 0 ? 0 : static_cast<int>(rows.begin()->size());
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n) {
      throw DimensionError("from_rows: ragged row lengths");
    }
    data.insert(data.end(), row.begin(), row.end());
  }
  return DenseMatrix(m, n, std::move(data));
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("multiply: " + shape_str(a) + " * " + shape_str(b));
  }
  DenseMatrix c(a.rows(), b.cols());
  if (c.empty() || a.cols() == 0) return c;
  const long long flops =
      2LL * a.rows() * a.cols() * b.cols();
  if (flops >= kernels::parallel_flop_threshold) {
    kernels::matmul_parallel(a.data().data(), b.data().data(), c.data().data(), a.rows(),
                             a.cols(), b.cols());
  } else {
    kernels::matmul_serial(a.data().data(), b.data().data(), c.data().data(), a.rows(),
                           a.cols(), b.cols());
  }
  return c;
}

DenseMatrix multiply_ta(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("multiply_ta: " + shape_str(a) + "^T * " + shape_str(b));
  }
  DenseMatrix c(a.cols(), b.cols());
  if (c.empty() || a.rows() == 0) return c;
  const long long flops = 2LL * a.cols() * a.rows() * b.cols();
  if (flops >= kernels::parallel_flop_threshold) {
    kernels::matmul_ta_parallel(a.data().data(), b.data().data(), c.data().data(), a.cols(),
                                a.rows(), b.cols());
  } else {
    kernels::matmul_ta_serial(a.data().data(), b.data().data(), c.data().data(), a.cols(),
                              a.rows(), b.cols());
  }
  return c;
}

DenseMatrix multiply_tb(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("multiply_tb: " + shape_str(a) + " * " + shape_str(b) + "^T");
  }
  DenseMatrix c(a.rows(), b.rows());
  if (c.empty() || a.cols() == 0) return c;
  const long long flops = 2LL * a.rows() * a.cols() * b.rows();
  if (flops >= kernels::parallel_flop_threshold) {
    kernels::matmul_tb_parallel(a.data().data(), b.data().data(), c.data().data(), a.rows(),
                                a.cols(), b.rows());
  } else {
    kernels::matmul_tb_serial(a.data().data(), b.data().data(), c.data().data(), a.rows(),
                              a.cols(), b.rows());
  }
  return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
  check_same_shape(a, b, "add");
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  check_same_shape(a, b, "subtract");
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

DenseMatrix scale(const DenseMatrix& a, double alpha) {
  DenseMatrix c = a;
  for (double& v : c.data()) v *= alpha;
  return c;
}

DenseMatrix hstack(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("hstack: " + shape_str(a) + " | " + shape_str(b));
  }
  DenseMatrix c(a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (int j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
  }
  return c;
}

double frobenius_entrywise(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.data()) s = std::max(s, std::abs(v));
  return s;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  check_same_shape(a, b, "max_abs_diff");
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    s = std::max(s, std::abs(a.data()[i] - b.data()[i]));
  return s;
}

std::string shape_str(const DenseMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

}  // namespace mmlr
