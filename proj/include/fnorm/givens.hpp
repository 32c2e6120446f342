#pragma once

#include <cmath>
#include <cstddef>

#include "fnorm/dense_matrix.hpp"

namespace fnorm::dense {

/// Plane rotation G = [c s; -conj(s) c] with real c, chosen so that
/// G [p; q] = [r; 0].
struct Givens {
  double c = 1.0;
  Complex s{};

  static Givens make(Complex p, Complex q, Complex* r = nullptr) {
    Givens g;
    const double ap = std::abs(p);
    const double aq = std::abs(q);
    if (aq == 0.0) {
      if (r) *r = p;
      return g;
    }
    if (ap == 0.0) {
      g.c = 0.0;
      g.s = std::conj(q) / aq;
      if (r) *r = aq;
      return g;
    }
    const double rho = std::hypot(ap, aq);
    g.c = ap / rho;
    g.s = (p / ap) * std::conj(q) / rho;
    if (r) *r = (p / ap) * rho;
    return g;
  }

  /// rows i, j of m, columns [c0, c1), replaced by G applied from the left.
  void apply_left(DenseMatrix& m, std::size_t i, std::size_t j, std::size_t c0,
                  std::size_t c1) const {
    for (std::size_t k = c0; k < c1; ++k) {
      const Complex a = m(i, k);
      const Complex b = m(j, k);
      m(i, k) = c * a + s * b;
      m(j, k) = -std::conj(s) * a + c * b;
    }
  }

  /// columns i, j of m, rows [r0, r1), replaced by m G^*.
  void apply_right_adjoint(DenseMatrix& m, std::size_t i, std::size_t j, std::size_t r0,
                           std::size_t r1) const {
    for (std::size_t k = r0; k < r1; ++k) {
      const Complex a = m(k, i);
      const Complex b = m(k, j);
      m(k, i) = a * c + b * std::conj(s);
      m(k, j) = -a * s + b * c;
    }
  }
};

}  // namespace fnorm::dense
