#include "fnorm/scalar_function.hpp"

#include <cmath>
#include <sstream>

#include "fnorm/errors.hpp"

namespace fnorm {

namespace {

constexpr double kPhiSmallArgument = 1e-8;

void require_off_cut(ScalarFunction f, Complex z) {
  if (z.imag() == 0.0 && z.real() <= 0.0) {
    std::ostringstream os;
    os << f.name() << ": argument " << z.real() << "+" << z.imag()
       << "i lies on the excluded ray (-inf, 0]";
    throw DomainError(os.str(), z);
  }
}

}  // namespace

std::string_view ScalarFunction::name() const noexcept {
  switch (id_) {
    case FunctionId::exp: return "exp";
    case FunctionId::expneg: return "expneg";
    case FunctionId::sqrt: return "sqrt";
    case FunctionId::invsqrt: return "invsqrt";
    case FunctionId::phi: return "phi";
    case FunctionId::identity: return "identity";
  }
  return "unknown";
}

std::string_view ScalarFunction::domain_description() const noexcept {
  return has_branch_cut() ? "C \\ (-inf, 0]" : "C";
}

bool ScalarFunction::has_branch_cut() const noexcept {
  return id_ == FunctionId::sqrt || id_ == FunctionId::invsqrt || id_ == FunctionId::phi;
}

Complex expm1(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  // exp(x)cos(y) - 1 = expm1(x)cos(y) - 2 sin^2(y/2)
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

Complex ScalarFunction::operator()(Complex z) const {
  switch (id_) {
    case FunctionId::exp: return std::exp(z);
    case FunctionId::expneg: return std::exp(-z);
    case FunctionId::identity: return z;
    case FunctionId::sqrt:
      require_off_cut(*this, z);
      return std::sqrt(z);
    case FunctionId::invsqrt:
      require_off_cut(*this, z);
      return 1.0 / std::sqrt(z);
    case FunctionId::phi: {
      require_off_cut(*this, z);
      const Complex w = std::sqrt(z);
      if (std::abs(z) < kPhiSmallArgument) return expm1(-w) / (w * w);
      return expm1(-w) / z;
    }
  }
  return z;
}

Complex eval_scalar(ScalarFunction f, Complex z) { return f(z); }

ScalarFunction parse_function(std::string_view token) {
  for (auto id : kAllFunctions) {
    if (ScalarFunction(id).name() == token) return ScalarFunction(id);
  }
  throw ParseError("unknown function token '" + std::string(token) +
                   "' (expected exp|expneg|sqrt|invsqrt|phi|identity)");
}

double distance_to_negative_axis(Complex z) {
  if (z.real() <= 0.0) return std::abs(z.imag());
  return std::abs(z);
}

}  // namespace fnorm
