#pragma once

#include <array>
#include <string>
#include <string_view>

#include "fnorm/vector_ops.hpp"

namespace fnorm {

enum class FunctionId { exp, expneg, sqrt, invsqrt, phi, identity };

/// One of the supported scalar functions f, evaluated on the principal branch.
///
/// sqrt, invsqrt and phi(z) = (exp(-sqrt z) - 1)/z exclude the closed ray
/// (-inf, 0]. All six satisfy f(conj z) = conj f(z) off the cut, which is what
/// lets f(A)^* u be computed as f(A^*) u.
class ScalarFunction {
 public:
  constexpr explicit ScalarFunction(FunctionId id) : id_(id) {}

  constexpr FunctionId id() const noexcept { return id_; }
  std::string_view name() const noexcept;
  std::string_view domain_description() const noexcept;
  bool has_branch_cut() const noexcept;

  /// Throws DomainError for arguments on the excluded ray.
  Complex operator()(Complex z) const;

  friend constexpr bool operator==(ScalarFunction a, ScalarFunction b) { return a.id_ == b.id_; }

 private:
  FunctionId id_;
};

inline constexpr std::array<FunctionId, 6> kAllFunctions = {
    FunctionId::exp, FunctionId::expneg, FunctionId::sqrt,
    FunctionId::invsqrt, FunctionId::phi, FunctionId::identity};

/// CLI token: exp | expneg | sqrt | invsqrt | phi | identity.
ScalarFunction parse_function(std::string_view token);

Complex eval_scalar(ScalarFunction f, Complex z);

/// Distance from z to the closed ray (-inf, 0].
double distance_to_negative_axis(Complex z);

/// exp(z) - 1 without cancellation for small |z|.
Complex expm1(Complex z);

}  // namespace fnorm
