#pragma once

#include <vector>

#include "fnorm/dense_matrix.hpp"

namespace fnorm::dense {

/// Thin SVD b = u * diag(s) * v^*, singular values descending.
/// u is rows x k, v is cols x k with k = min(rows, cols); both have
/// orthonormal columns (columns for zero singular values are completed).
struct SvdResult {
  DenseMatrix u;
  std::vector<double> s;
  DenseMatrix v;
};

/// One-sided (Hestenes) Jacobi.
SvdResult svd_small(const DenseMatrix& b);

std::vector<double> singular_values(const DenseMatrix& b);

/// Smallest singular value of m - theta I.
double sigma_min_shifted(const DenseMatrix& m, Complex theta);

/// Largest singular value.
double sigma_max(const DenseMatrix& b);

}  // namespace fnorm::dense
