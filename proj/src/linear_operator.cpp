#include "fnorm/linear_operator.hpp"

#include "fnorm/errors.hpp"

namespace fnorm {

LinearOperator::LinearOperator(CsrMatrix a, Structure structure) : state_(std::make_shared<State>()) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw DimensionError("LinearOperator: matrix must be square and non-empty");
  state_->ah = a.conj_transpose();
  state_->a = std::move(a);
  state_->structure = structure;
  state_->norm_fro = state_->a.norm_fro();
}

CVector LinearOperator::apply(std::span<const Complex> x) const {
  CVector y(dim());
  apply(x, y);
  return y;
}

CVector LinearOperator::apply_adjoint(std::span<const Complex> x) const {
  CVector y(dim());
  apply_adjoint(x, y);
  return y;
}

const dense::Factorization& LinearOperator::factorization() const {
  std::call_once(state_->factor_once, [this] {
    state_->factor = std::make_unique<dense::Factorization>(
        dense::lu_factor(state_->a, state_->structure));
  });
  return *state_->factor;
}

}  // namespace fnorm
