#include "fnorm/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fnorm/errors.hpp"

namespace fnorm::dense {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Columns of `a` (rows >= cols) are rotated until mutually orthogonal.
SvdResult jacobi_tall(DenseMatrix a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  DenseMatrix v = DenseMatrix::identity(n);
  std::vector<double> sq(n);
  for (std::size_t j = 0; j < n; ++j) sq[j] = std::pow(norm2(a.col(j)), 2);

  constexpr int kMaxSweeps = 80;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = sq[p];
        const double beta = sq[q];
        const Complex gamma = dot(a.col(p), a.col(q));
        const double ag = std::abs(gamma);
        if (ag == 0.0 || ag <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Complex phase = gamma / ag;
        const double zeta = (beta - alpha) / (2.0 * ag);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Complex pc = std::conj(phase);
        for (std::size_t i = 0; i < m; ++i) {
          const Complex ap = a(i, p);
          const Complex aq = a(i, q) * pc;
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const Complex vp = v(i, p);
          const Complex vq = v(i, q) * pc;
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
        sq[p] = std::pow(norm2(a.col(p)), 2);
        sq[q] = std::pow(norm2(a.col(q)), 2);
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> sig(n);
  for (std::size_t j = 0; j < n; ++j) sig[j] = norm2(a.col(j));
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sig[x] > sig[y]; });

  SvdResult out{DenseMatrix(m, n), std::vector<double>(n), DenseMatrix(n, n)};
  const double smax = n > 0 ? sig[order[0]] : 0.0;
  std::vector<bool> filled(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.s[k] = sig[j];
    std::copy(v.col(j).begin(), v.col(j).end(), out.v.col(k).begin());
    if (sig[j] > 0.0 && sig[j] > 1e-300 * std::max(1.0, smax)) {
      for (std::size_t i = 0; i < m; ++i) out.u(i, k) = a(i, j) / sig[j];
      filled[k] = true;
    }
  }
  // Orthonormal completion of u for (numerically) zero singular values.
  for (std::size_t k = 0; k < n; ++k) {
    if (filled[k]) continue;
    for (std::size_t e = 0; e < m; ++e) {
      CVector cand(m);
      cand[e] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t l = 0; l < n; ++l)
          if (filled[l]) axpy(-dot(out.u.col(l), cand), out.u.col(l), cand);
      const double nc = norm2(cand);
      if (nc > 0.5) {
        for (std::size_t i = 0; i < m; ++i) out.u(i, k) = cand[i] / nc;
        filled[k] = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace

SvdResult svd_small(const DenseMatrix& b) {
  if (!b.all_finite()) throw Error("svd_small: non-finite entries");
  if (b.rows() >= b.cols()) return jacobi_tall(b);
  auto t = jacobi_tall(b.adjoint());
  return SvdResult{std::move(t.v), std::move(t.s), std::move(t.u)};
}

std::vector<double> singular_values(const DenseMatrix& b) { return svd_small(b).s; }

double sigma_min_shifted(const DenseMatrix& m, Complex theta) {
  if (!m.square()) throw DimensionError("sigma_min_shifted: matrix is not square");
  if (m.rows() == 0) return 0.0;
  DenseMatrix shifted = m;
  for (std::size_t i = 0; i < m.rows(); ++i) shifted(i, i) -= theta;
  return singular_values(shifted).back();
}

double sigma_max(const DenseMatrix& b) {
  if (b.rows() == 0 || b.cols() == 0) return 0.0;
  return singular_values(b).front();
}

}  // namespace fnorm::dense
