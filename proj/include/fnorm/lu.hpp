#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "fnorm/csr_matrix.hpp"
#include "fnorm/dense_matrix.hpp"

namespace fnorm {

/// Storage layout of an operator, used to pick a factorization.
enum class StructureKind { tridiagonal, banded, general_sparse, dense };

struct Structure {
  StructureKind kind = StructureKind::general_sparse;
  std::size_t lower = 0;  ///< bandwidths, meaningful for banded
  std::size_t upper = 0;
};

namespace dense {

/// Dense LU with partial pivoting.
class DenseLu {
 public:
  explicit DenseLu(DenseMatrix a);
  std::size_t size() const noexcept { return lu_.rows(); }
  void solve_in_place(std::span<Complex> b, bool adjoint = false) const;
  DenseMatrix solve(const DenseMatrix& b) const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> piv_;
};

/// Solve a x = b for square dense a (b may have several columns).
DenseMatrix solve(const DenseMatrix& a, const DenseMatrix& b);

/// Tridiagonal LU with partial pivoting (row interchanges create a second
/// superdiagonal).
class TridiagonalLu {
 public:
  TridiagonalLu(std::vector<Complex> sub, std::vector<Complex> diag, std::vector<Complex> super);
  std::size_t size() const noexcept { return d_.size(); }
  void solve_in_place(std::span<Complex> b, bool adjoint = false) const;

 private:
  std::vector<Complex> dl_, d_, du_, du2_;
  std::vector<bool> swapped_;
};

/// Band LU with partial pivoting; U gets upper bandwidth lower + upper.
class BandedLu {
 public:
  BandedLu(const CsrMatrix& a, std::size_t lower, std::size_t upper);
  std::size_t size() const noexcept { return n_; }
  void solve_in_place(std::span<Complex> b, bool adjoint = false) const;

 private:
  Complex& at(std::size_t i, std::size_t j) { return ab_[(kv_ + i - j) + j * ld_]; }
  const Complex& at(std::size_t i, std::size_t j) const { return ab_[(kv_ + i - j) + j * ld_]; }

  std::size_t n_ = 0, kl_ = 0, kv_ = 0, ld_ = 0;
  std::vector<Complex> ab_;
  std::vector<std::size_t> piv_;
};

/// Reverse Cuthill-McKee ordering of the symmetrized sparsity pattern.
std::vector<std::size_t> reverse_cuthill_mckee(const CsrMatrix& a);

/// Factorization chosen from the structure tag. Immutable once built.
class Factorization {
 public:
  std::size_t size() const noexcept;
  /// Solves a x = b, or a^* x = b when adjoint is set.
  CVector solve(std::span<const Complex> b, bool adjoint = false) const;
  StructureKind method() const noexcept { return method_; }

 private:
  friend Factorization lu_factor(const CsrMatrix& a, const Structure& structure);
  using Impl = std::variant<TridiagonalLu, BandedLu, DenseLu>;
  Factorization(Impl impl, StructureKind method, std::vector<std::size_t> perm)
      : impl_(std::move(impl)), method_(method), perm_(std::move(perm)) {}

  Impl impl_;
  StructureKind method_;
  std::vector<std::size_t> perm_;  ///< empty unless reordered
};

/// Throws SingularMatrixError on a zero pivot.
Factorization lu_factor(const CsrMatrix& a, const Structure& structure);

CVector lu_solve(const Factorization& f, std::span<const Complex> b, bool adjoint = false);

}  // namespace dense
}  // namespace fnorm
