#pragma once

#include "fnorm/dense_matrix.hpp"
#include "fnorm/eig.hpp"
#include "fnorm/scalar_function.hpp"

namespace fnorm::dense {

/// Scaling and squaring with the degree-13 diagonal Pade approximant,
/// scaled so that ||a / 2^s||_1 <= 5.37.
DenseMatrix expm(const DenseMatrix& a);

/// Principal square root of an upper triangular matrix (column recurrence).
DenseMatrix sqrtm_triangular(const DenseMatrix& t);

/// phi1(x) = (exp(x) - 1)/x, from the exponential of [[x, I], [0, 0]].
DenseMatrix phi1m(const DenseMatrix& x);

/// f(t) for upper triangular t without any block splitting.
DenseMatrix triangular_matfun(const DenseMatrix& t, ScalarFunction f);

/// Blocked Schur-Parlett evaluation on a Schur form. Eigenvalues closer than
/// `cluster_gap` share a diagonal block; blocks are made contiguous by
/// unitary swaps before the block recurrence. Returns f of the original matrix.
DenseMatrix schur_parlett(SchurForm s, ScalarFunction f, double cluster_gap);

/// Which route dense_matfun used on its last call (for diagnostics and tests).
enum class MatfunRoute { identity, pade, diagonalization, schur_parlett };

/// f(h) for a small square matrix.
///
/// exp/expneg go through expm. Other functions diagonalize when the
/// eigenvector matrix has condition estimate <= 1e6, and otherwise use the
/// Schur-Parlett route with cluster gap 0.1 ||h||_F. Eigenvalues within
/// 1e-12 ||h||_F of the excluded ray raise DomainError.
DenseMatrix dense_matfun(const DenseMatrix& h, ScalarFunction f, MatfunRoute* route = nullptr);

/// beta * f(h) e1, the only part of f(h) the Krylov solvers need. Same routes
/// and errors as dense_matfun; the diagonalization route avoids forming f(h).
CVector dense_matfun_e1(const DenseMatrix& h, ScalarFunction f, Complex beta = 1.0);

inline constexpr double kDiagonalizationConditionLimit = 1e6;

}  // namespace fnorm::dense
