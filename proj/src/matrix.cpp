#include "urbanhealth/matrix.hpp"

#include "urbanhealth/errors.hpp"

namespace urbanhealth {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw InternalError("matrix data length does not match rows*cols");
  }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != m.cols_) throw InternalError("ragged initializer rows");
    std::size_t c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

bool Matrix::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw InternalError("matrix add: shape mismatch");
  Matrix out = a;
  out.add_in_place(b);
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw InternalError("matrix sub: shape mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
  return out;
}

Matrix operator*(double c, const Matrix& a) {
  Matrix out = a;
  out.scale_in_place(c);
  return out;
}

Matrix Matrix::matmul(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw InternalError("matmul: inner dimensions differ");
  Matrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* brow = b.data() + k * b.cols_;
      double* orow = out.data() + i * out.cols_;
      for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

Matrix Matrix::matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.cols_) throw InternalError("matmul_nt: inner dimensions differ");
  Matrix out(a.rows_, b.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    const double* arow = a.data() + i * a.cols_;
    for (std::size_t j = 0; j < b.rows_; ++j) {
      const double* brow = b.data() + j * b.cols_;
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols_; ++k) acc += arow[k] * brow[k];
      out(i, j) = acc;
    }
  }
  return out;
}

Matrix Matrix::matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_) throw InternalError("matmul_tn: inner dimensions differ");
  Matrix out(a.cols_, b.cols_);
  for (std::size_t k = 0; k < a.rows_; ++k) {
    const double* arow = a.data() + k * a.cols_;
    const double* brow = b.data() + k * b.cols_;
    for (std::size_t i = 0; i < a.cols_; ++i) {
      const double aki = arow[i];
      if (aki == 0.0) continue;
      double* orow = out.data() + i * out.cols_;
      for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += aki * brow[j];
    }
  }
  return out;
}

void Matrix::add_in_place(const Matrix& other) {
  if (!same_shape(other)) throw InternalError("add_in_place: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
}

void Matrix::scale_in_place(double c) {
  for (double& v : data_) v *= c;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace urbanhealth
