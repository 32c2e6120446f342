#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fnorm/linear_operator.hpp"
#include "fnorm/scalar_function.hpp"

namespace fnorm {

enum class InnerMethod { standard_krylov, extended_krylov };

struct InnerConfig {
  InnerMethod method = InnerMethod::standard_krylov;
  double eps_inner = 1e-10;  ///< relative tolerance
  std::size_t lag = 2;       ///< j in omega_{k+j}
  std::size_t max_dim = 400;
  /// When set, the stopping test is absolute against eps_inner * reference_norm
  /// instead of relative to ||z_k||. The relaxed schedule passes the current
  /// leading singular value estimate here.
  std::optional<double> reference_norm;

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
};

struct InnerResult {
  CVector vector;             ///< z_k
  double err_estimate = 0.0;  ///< estimate of ||f(A)v - z_k||
  std::size_t dims_used = 0;  ///< basis vectors built (including the lag look-ahead)
  std::size_t iterations = 0;
  std::vector<double> omega_history;
  bool converged = false;
  bool breakdown = false;  ///< invariant subspace reached, z is exact
};

/// z ~ f(A) v (or f(A)^* v = f(A^*) v when adjoint is set) by projection on a
/// standard or extended Krylov space. v need not be unit; the result scales.
InnerResult approx_fAv(const LinearOperator& a, ScalarFunction f, std::span<const Complex> v,
                       const InnerConfig& cfg, bool adjoint = false);

namespace detail {
/// Two passes of classical Gram-Schmidt of w against basis; returns the
/// accumulated coefficients (w is left holding the orthogonal residual).
CVector orthogonalize_twice(const std::vector<CVector>& basis, std::size_t count, std::span<Complex> w);
}  // namespace detail

}  // namespace fnorm
