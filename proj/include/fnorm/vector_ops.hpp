#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fnorm {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// x^* y
inline Complex dot(std::span<const Complex> x, std::span<const Complex> y) {
  // Split real arithmetic with independent partial sums so the loop pipelines.
  const double* a = reinterpret_cast<const double*>(x.data());
  const double* b = reinterpret_cast<const double*>(y.data());
  double re0 = 0.0, re1 = 0.0, im0 = 0.0, im1 = 0.0;
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 1 < n; i += 2) {
    re0 += a[2 * i] * b[2 * i] + a[2 * i + 1] * b[2 * i + 1];
    im0 += a[2 * i] * b[2 * i + 1] - a[2 * i + 1] * b[2 * i];
    re1 += a[2 * i + 2] * b[2 * i + 2] + a[2 * i + 3] * b[2 * i + 3];
    im1 += a[2 * i + 2] * b[2 * i + 3] - a[2 * i + 3] * b[2 * i + 2];
  }
  if (i < n) {
    re0 += a[2 * i] * b[2 * i] + a[2 * i + 1] * b[2 * i + 1];
    im0 += a[2 * i] * b[2 * i + 1] - a[2 * i + 1] * b[2 * i];
  }
  return {re0 + re1, im0 + im1};
}

inline double norm2(std::span<const Complex> x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

/// y += a x
inline void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y) {
  const double ar = a.real(), ai = a.imag();
  const double* u = reinterpret_cast<const double*>(x.data());
  double* v = reinterpret_cast<double*>(y.data());
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    v[2 * i] += ar * u[2 * i] - ai * u[2 * i + 1];
    v[2 * i + 1] += ar * u[2 * i + 1] + ai * u[2 * i];
  }
}

inline void scale(Complex a, std::span<Complex> x) {
  for (auto& v : x) v *= a;
}

inline CVector difference(std::span<const Complex> x, std::span<const Complex> y) {
  CVector d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  return d;
}

inline double distance(std::span<const Complex> x, std::span<const Complex> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::norm(x[i] - y[i]);
  return std::sqrt(s);
}

}  // namespace fnorm
