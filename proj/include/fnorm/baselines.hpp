#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "fnorm/bidiag.hpp"

namespace fnorm {

struct PowerOptions {
  double eps_out = 1e-2;
  std::size_t max_iters = 1000;
  InnerConfig inner;
  /// Inner tolerance; eps_out / 100 when unset.
  std::optional<double> eps_inner;
  std::uint64_t seed = 1;
  StartDistribution start_distribution = StartDistribution::uniform;
};

/// Power iteration on f(A)^* f(A) with inexact products. The reported sigma is
/// sqrt(lambda), lambda = |v^* y| for y ~ f(A)^* f(A) v, stopped when
/// ||y - lambda v|| / lambda <= eps_out. outer_iters counts power steps.
RunReport power_method(const LinearOperator& a, ScalarFunction f, const PowerOptions& opts);

struct ExpBound {
  double bound = 0.0;  ///< exp(alpha)
  double alpha = 0.0;  ///< upper end of the bracket on the top eigenvalue of the Hermitian part of sign * A
  double lower = 0.0;  ///< top Ritz value, lower end
  std::size_t iterations = 0;  ///< Lanczos steps
  bool converged = false;
};

/// ||exp(sign A)|| <= exp(alpha), alpha the largest eigenvalue of
/// H = (sign A + sign A^*)/2. Lanczos with full reorthogonalization gives a
/// lower estimate; Cholesky of sigma I - H (banded, RCM for general sparse)
/// decides sigma > alpha, and bisection closes the bracket to rel_tol.
ExpBound exp_norm_bound(const LinearOperator& a, int sign = 1, double rel_tol = 1e-6,
                        std::size_t max_iters = 100, std::uint64_t seed = 7);

}  // namespace fnorm
