#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace urbanhealth {

// Dense row-major matrix of doubles. All tensors in the model (weight
// matrices, attention vectors, per-edge score columns) are instances of
// this; vectors are n x 1 matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool all_finite() const;

  Matrix transposed() const;

  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double c, const Matrix& a);

  // a * b
  static Matrix matmul(const Matrix& a, const Matrix& b);
  // a * b^T without materializing the transpose
  static Matrix matmul_nt(const Matrix& a, const Matrix& b);
  // a^T * b without materializing the transpose
  static Matrix matmul_tn(const Matrix& a, const Matrix& b);

  void add_in_place(const Matrix& other);
  void scale_in_place(double c);

  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace urbanhealth
