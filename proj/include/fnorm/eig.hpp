#pragma once

#include <vector>

#include "fnorm/dense_matrix.hpp"

namespace fnorm::dense {

struct HessenbergResult {
  DenseMatrix q;     ///< unitary
  DenseMatrix hess;  ///< upper Hessenberg, input = q * hess * q^*
};

/// Householder reduction to upper Hessenberg form.
HessenbergResult hessenberg_reduce(const DenseMatrix& h);

/// Complex Schur form: input = z * t * z^*, t upper triangular.
struct SchurForm {
  DenseMatrix z;
  DenseMatrix t;
};

/// Hessenberg reduction followed by single-shift QR with Wilkinson shifts.
/// Throws ConvergenceError (carrying the unconverged row) after 30*d sweeps.
SchurForm schur(const DenseMatrix& h);

struct PlaneRotation {
  std::size_t i = 0;  ///< acts on rows/columns i, i+1
  double c = 1.0;
  Complex s{};
};

/// Schur form with the unitary factor kept implicitly: z = q * G_1^* ... G_m^*.
/// Cheaper than schur() when z is only applied to a few vectors.
struct SchurFactor {
  DenseMatrix q;
  std::vector<PlaneRotation> rotations;
  DenseMatrix t;

  CVector apply_z(CVector w) const;
  CVector apply_z_adjoint(std::span<const Complex> x) const;
};
SchurFactor schur_factor(const DenseMatrix& h);

/// Eigenvalues only (no Schur vectors), in the order the QR sweep deflates them.
std::vector<Complex> eigenvalues(const DenseMatrix& h);

/// Unit eigenvector for an already computed eigenvalue by inverse iteration.
CVector inverse_iteration(const DenseMatrix& h, Complex lambda, std::size_t steps = 3);

/// Right eigenvectors of an upper triangular matrix by back substitution,
/// returned as an upper triangular matrix with unit-norm columns.
DenseMatrix triangular_eigenvectors(const DenseMatrix& t);

/// Unit-norm eigenvector of the Schur form for the eigenvalue t(k, k),
/// mapped back to the original basis.
CVector schur_eigenvector(const SchurForm& s, std::size_t k);

struct EigDecomp {
  std::vector<Complex> values;
  DenseMatrix vectors;              ///< unit columns, vectors(:, i) pairs with values[i]
  double condition_estimate = 1.0;  ///< 1-norm condition number of the eigenvector matrix
};

EigDecomp eig_dense(const DenseMatrix& h);

/// Default eigenpair residual tolerance 1e3 * d * eps.
double eig_tolerance(std::size_t d);

/// Inverse of a nonsingular upper triangular matrix.
DenseMatrix triangular_inverse(const DenseMatrix& t);

}  // namespace fnorm::dense
