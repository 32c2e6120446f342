#include "fnorm/dense_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "fnorm/errors.hpp"

namespace fnorm {

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  DenseMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("DenseMatrix::from_rows: ragged rows");
    std::size_t j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const Complex> d) {
  DenseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

DenseMatrix DenseMatrix::adjoint() const {
  DenseMatrix m(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) m(j, i) = std::conj((*this)(i, j));
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix m(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) m(j, i) = (*this)(i, j);
  return m;
}

DenseMatrix DenseMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                               std::size_t nc) const {
  DenseMatrix m(nr, nc);
  for (std::size_t j = 0; j < nc; ++j)
    for (std::size_t i = 0; i < nr; ++i) m(i, j) = (*this)(r0 + i, c0 + j);
  return m;
}

void DenseMatrix::set_block(std::size_t r0, std::size_t c0, const DenseMatrix& b) {
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < b.rows(); ++i) (*this)(r0 + i, c0 + j) = b(i, j);
}

void DenseMatrix::resize(std::size_t rows, std::size_t cols) {
  if (rows == rows_ && cols == cols_) return;
  DenseMatrix m(rows, cols);
  const std::size_t rr = std::min(rows, rows_);
  const std::size_t cc = std::min(cols, cols_);
  for (std::size_t j = 0; j < cc; ++j)
    for (std::size_t i = 0; i < rr; ++i) m(i, j) = (*this)(i, j);
  *this = std::move(m);
}

double DenseMatrix::norm_fro() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

double DenseMatrix::norm_one() const {
  double best = 0.0;
  for (std::size_t j = 0; j < cols_; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

double DenseMatrix::max_abs() const {
  double best = 0.0;
  for (const auto& v : data_) best = std::max(best, std::abs(v));
  return best;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

CVector DenseMatrix::operator*(std::span<const Complex> x) const {
  if (x.size() != cols_) throw DimensionError("DenseMatrix * vector: size mismatch");
  CVector y(rows_);
  for (std::size_t j = 0; j < cols_; ++j) {
    const Complex xj = x[j];
    if (xj == Complex{}) continue;
    const Complex* c = data_.data() + j * rows_;
    for (std::size_t i = 0; i < rows_; ++i) y[i] += c[i] * xj;
  }
  return y;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw DimensionError("DenseMatrix +=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw DimensionError("DenseMatrix -=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(Complex a) {
  for (auto& v : data_) v *= a;
  return *this;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("DenseMatrix product: inner dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    Complex* cj = c.data() + j * c.rows();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex bkj = b(k, j);
      if (bkj == Complex{}) continue;
      const Complex* ak = a.data() + k * a.rows();
      for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
    }
  }
  return c;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(Complex s, DenseMatrix a) { return a *= s; }

DenseMatrix adjoint_times(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("adjoint_times: row mismatch");
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = dot(a.col(i), b.col(j));
  return c;
}

DenseMatrix from_columns(const std::vector<CVector>& columns, std::size_t count) {
  const std::size_t n = count == 0 ? 0 : columns.front().size();
  DenseMatrix m(n, count);
  for (std::size_t j = 0; j < count; ++j)
    std::copy(columns[j].begin(), columns[j].end(), m.col(j).begin());
  return m;
}

}  // namespace fnorm
