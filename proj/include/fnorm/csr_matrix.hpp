#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fnorm/dense_matrix.hpp"

namespace fnorm {

struct MatrixEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  Complex value{};
};

/// Compressed sparse row storage.
class CsrMatrix {
 public:
  CsrMatrix() = default;

  /// Entries in any order. Duplicate (row, col) pairs throw ParseError when
  /// reject_duplicates is set and are summed otherwise.
  static CsrMatrix from_entries(std::size_t rows, std::size_t cols,
                                std::vector<MatrixEntry> entries, bool reject_duplicates = true);
  static CsrMatrix from_dense(const DenseMatrix& d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
  std::span<const Complex> values() const noexcept { return values_; }

  /// y = A x
  void multiply(std::span<const Complex> x, std::span<Complex> y) const;

  CsrMatrix conj_transpose() const;
  DenseMatrix to_dense() const;

  /// Entry (i, j), zero if not stored.
  Complex at(std::size_t i, std::size_t j) const;

  double norm_fro() const;

  /// Largest i - j and j - i over stored entries.
  std::size_t lower_bandwidth() const;
  std::size_t upper_bandwidth() const;

  /// A + shift * I (square only).
  CsrMatrix shifted(Complex shift) const;

  /// P A P^T for the permutation new_index = perm^{-1}: row/col perm[k] of A
  /// becomes row/col k of the result.
  CsrMatrix permuted(std::span<const std::size_t> perm) const;

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<Complex> values_;
};

}  // namespace fnorm
