#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace mmlr {

// Dense row-major matrix of doubles. Dimensions may be zero (empty
// factors such as q_perp of a square matrix, or trivial subspace bases).
// Entries are validated finite when constructed from user data.
class DenseMatrix {
 public:
  DenseMatrix() : rows_(0), cols_(0) {}
  DenseMatrix(int rows, int cols);
  DenseMatrix(int rows, int cols, std::vector<double> data);

  static DenseMatrix identity(int n);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double operator()(int i, int j) const { return data_[idx(i, j)]; }
  double& operator()(int i, int j) { return data_[idx(i, j)]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(j);
  }

  int rows_;
  int cols_;
  std::vector<double> data_;
};

// c = a * b, c = a^T * b, c = a * b^T. Dispatch to the parallel kernel
// when the flop count is large enough to pay for it; both kernels share
// the same per-row routine, so results are bitwise identical.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix multiply_ta(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix multiply_tb(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale(const DenseMatrix& a, double alpha);
DenseMatrix hstack(const DenseMatrix& a, const DenseMatrix& b);

// Entrywise Frobenius norm, independent of the SVD-based Schatten p=2 path.
double frobenius_entrywise(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

std::string shape_str(const DenseMatrix& a);

}  // namespace mmlr
