#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "fnorm/vector_ops.hpp"

namespace fnorm {

/// Column-major complex matrix for the small projected problems.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  /// Row-wise literal, e.g. DenseMatrix::from_rows({{1, 2}, {3, 4}}).
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const Complex> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i + j * rows_]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i + j * rows_]; }

  std::span<Complex> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const Complex> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

  Complex* data() noexcept { return data_.data(); }
  const Complex* data() const noexcept { return data_.data(); }

  DenseMatrix adjoint() const;
  DenseMatrix transpose() const;
  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const DenseMatrix& b);

  /// Grow or shrink, keeping the overlapping leading block and zero-filling the rest.
  void resize(std::size_t rows, std::size_t cols);

  double norm_fro() const;
  double norm_one() const;
  double max_abs() const;
  bool all_finite() const;

  CVector operator*(std::span<const Complex> x) const;

  DenseMatrix& operator+=(const DenseMatrix& o);
  DenseMatrix& operator-=(const DenseMatrix& o);
  DenseMatrix& operator*=(Complex a);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(Complex s, DenseMatrix a);

/// a^* b without forming the adjoint.
DenseMatrix adjoint_times(const DenseMatrix& a, const DenseMatrix& b);

/// Matrix whose columns are the given vectors.
DenseMatrix from_columns(const std::vector<CVector>& columns, std::size_t count);

}  // namespace fnorm
