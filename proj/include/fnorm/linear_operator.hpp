#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <span>

#include "fnorm/csr_matrix.hpp"
#include "fnorm/lu.hpp"

namespace fnorm {

/// Immutable square operator with exact forward and adjoint products.
///
/// Copies share the underlying storage. The LU factorization used by the
/// extended Krylov inner solver is built on first request and cached; it is
/// safe to request it from several threads.
class LinearOperator {
 public:
  LinearOperator(CsrMatrix a, Structure structure);

  std::size_t dim() const noexcept { return state_->a.rows(); }
  const Structure& structure() const noexcept { return state_->structure; }
  const CsrMatrix& matrix() const noexcept { return state_->a; }
  const CsrMatrix& adjoint_matrix() const noexcept { return state_->ah; }
  double norm_fro() const noexcept { return state_->norm_fro; }

  void apply(std::span<const Complex> x, std::span<Complex> y) const { state_->a.multiply(x, y); }
  void apply_adjoint(std::span<const Complex> x, std::span<Complex> y) const {
    state_->ah.multiply(x, y);
  }
  CVector apply(std::span<const Complex> x) const;
  CVector apply_adjoint(std::span<const Complex> x) const;

  /// Throws SingularMatrixError if the matrix cannot be factored.
  const dense::Factorization& factorization() const;

  DenseMatrix to_dense() const { return state_->a.to_dense(); }

 private:
  struct State {
    CsrMatrix a;
    CsrMatrix ah;
    Structure structure;
    double norm_fro = 0.0;
    std::once_flag factor_once;
    std::unique_ptr<dense::Factorization> factor;
  };
  std::shared_ptr<State> state_;
};

}  // namespace fnorm
