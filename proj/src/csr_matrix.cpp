#include "fnorm/csr_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fnorm/errors.hpp"

namespace fnorm {

CsrMatrix CsrMatrix::from_entries(std::size_t rows, std::size_t cols,
                                  std::vector<MatrixEntry> entries, bool reject_duplicates) {
  for (const auto& e : entries) {
    if (e.row >= rows || e.col >= cols) {
      throw DimensionError("CsrMatrix: entry (" + std::to_string(e.row) + ", " +
                           std::to_string(e.col) + ") outside " + std::to_string(rows) + "x" +
                           std::to_string(cols));
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(rows + 1, 0);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (k > 0 && entries[k - 1].row == e.row && entries[k - 1].col == e.col) {
      if (reject_duplicates) {
        throw ParseError("duplicate matrix entry at (" + std::to_string(e.row + 1) + ", " +
                         std::to_string(e.col + 1) + ")");
      }
      m.values_.back() += e.value;
      continue;
    }
    m.col_idx_.push_back(e.col);
    m.values_.push_back(e.value);
    ++m.row_ptr_[e.row + 1];
  }
  for (std::size_t i = 0; i < rows; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
  return m;
}

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& d) {
  std::vector<MatrixEntry> entries;
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (d(i, j) != Complex{}) entries.push_back({i, j, d(i, j)});
  return from_entries(d.rows(), d.cols(), std::move(entries));
}

void CsrMatrix::multiply(std::span<const Complex> x, std::span<Complex> y) const {
  if (x.size() != cols_ || y.size() != rows_) throw DimensionError("CsrMatrix::multiply: size mismatch");
  for (std::size_t i = 0; i < rows_; ++i) {
    Complex s{};
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
}

CsrMatrix CsrMatrix::conj_transpose() const {
  std::vector<MatrixEntry> entries;
  entries.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      entries.push_back({col_idx_[k], i, std::conj(values_[k])});
  return from_entries(cols_, rows_, std::move(entries));
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) = values_[k];
  return d;
}

Complex CsrMatrix::at(std::size_t i, std::size_t j) const {
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return {};
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

double CsrMatrix::norm_fro() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return std::sqrt(s);
}

std::size_t CsrMatrix::lower_bandwidth() const {
  std::size_t b = 0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (i > col_idx_[k]) b = std::max(b, i - col_idx_[k]);
  return b;
}

std::size_t CsrMatrix::upper_bandwidth() const {
  std::size_t b = 0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (col_idx_[k] > i) b = std::max(b, col_idx_[k] - i);
  return b;
}

CsrMatrix CsrMatrix::shifted(Complex shift) const {
  if (rows_ != cols_) throw DimensionError("CsrMatrix::shifted: matrix is not square");
  std::vector<MatrixEntry> entries;
  entries.reserve(nnz() + rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      entries.push_back({i, col_idx_[k], values_[k]});
  for (std::size_t i = 0; i < rows_; ++i) entries.push_back({i, i, shift});
  return from_entries(rows_, cols_, std::move(entries), false);
}

CsrMatrix CsrMatrix::permuted(std::span<const std::size_t> perm) const {
  std::vector<std::size_t> inverse(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) inverse[perm[k]] = k;
  std::vector<MatrixEntry> entries;
  entries.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      entries.push_back({inverse[i], inverse[col_idx_[k]], values_[k]});
  return from_entries(rows_, cols_, std::move(entries));
}

}  // namespace fnorm
